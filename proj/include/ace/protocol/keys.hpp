#pragma once

#include "ace/crypto/group.hpp"
#include "ace/crypto/keybytes.hpp"
#include "ace/crypto/tdp.hpp"

namespace ace {

// Key material per role. The projections are enforced by construction: the
// vetter's view has no fields for the index PRF keys or the permutation
// secret key, and the server's view holds only public values.

struct TrusteeKeyMaterial {
    PrfKey k_s;   // keyword encryption-key PRF
    PrfKey k_1;   // identifier row-key PRF
    PrfKey k_t;   // keyword tag PRF (scalar range)
    PrfKey k_2;   // identifier tag PRF (scalar range)
    HashKey k_h;  // index hash key (public)
    TdpSecretKey perm_sk;
    const PrimeOrderGroup* group;
};

struct VetterKeyMaterial {
    PrfKey k_s;
    PrfKey k_t;
    HashKey k_h;
    TdpPublicKey perm_pk;
    const PrimeOrderGroup* group;
};

struct ServerPublicParams {
    HashKey k_h;
    TdpPublicKey perm_pk;
    const PrimeOrderGroup* group;
};

}  // namespace ace
