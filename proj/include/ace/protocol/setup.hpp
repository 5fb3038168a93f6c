#pragma once

#include <memory>

#include "ace/protocol/server.hpp"
#include "ace/protocol/trustee.hpp"
#include "ace/protocol/vetter.hpp"

namespace ace {

struct Deployment {
    Trustee trustee;
    Vetter vetter;
    Server server;
};

// Generates all key material and hands each role exactly its view: the
// trustee everything, the vetter the search keys plus publics, the server
// publics and an empty encrypted index. security_bits must be >= 128.
Deployment setup(const Trustee::Config& config, std::unique_ptr<RandomSource> rng,
                 std::unique_ptr<KvStore> server_store = nullptr);

}  // namespace ace
