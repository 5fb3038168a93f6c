#include "ace/crypto/keyed_hash.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "ace/crypto/counters.hpp"
#include "ace/errors.hpp"

namespace ace {

HashOutput keyed_hash(const HashKey& key, const GroupElement& element) {
    counters::bump(counters::Kind::hash);
    HashOutput out{};
    unsigned int outlen = 0;
    if (HMAC(EVP_sha256(), key.bytes().data(), static_cast<int>(key.bytes().size()),
             element.data.data(), element.data.size(), out.data(), &outlen) == nullptr ||
        outlen != kHashOutputBytes) {
        throw Error("HMAC-SHA-256 evaluation failed");
    }
    return out;
}

}  // namespace ace
