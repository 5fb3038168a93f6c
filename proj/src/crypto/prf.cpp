#include "ace/crypto/prf.hpp"

#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <cstring>
#include <mutex>

#include "ace/crypto/counters.hpp"
#include "ace/errors.hpp"

namespace ace {

namespace {

EVP_MAC* cmac_algorithm() {
    static EVP_MAC* mac = [] {
        EVP_MAC* m = EVP_MAC_fetch(nullptr, "CMAC", nullptr);
        if (m == nullptr) throw Error("CMAC algorithm unavailable");
        return m;
    }();
    return mac;
}

}  // namespace

PrfOutput prf_bytes(const PrfKey& key, ByteView input) {
    if (input.empty()) {
        throw DomainError("PRF input must be nonempty");
    }
    counters::bump(counters::Kind::prf);

    EVP_MAC_CTX* ctx = EVP_MAC_CTX_new(cmac_algorithm());
    if (ctx == nullptr) throw Error("CMAC context allocation failed");

    char cipher_name[] = "AES-128-CBC";
    OSSL_PARAM params[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_MAC_PARAM_CIPHER, cipher_name, 0),
        OSSL_PARAM_construct_end(),
    };

    PrfOutput out{};
    size_t outlen = 0;
    int ok = EVP_MAC_init(ctx, key.bytes().data(), 16, params) &&
             EVP_MAC_update(ctx, input.data(), input.size()) &&
             EVP_MAC_final(ctx, out.data(), &outlen, out.size());
    EVP_MAC_CTX_free(ctx);
    if (!ok || outlen != kPrfOutputBytes) {
        throw Error("CMAC evaluation failed");
    }
    return out;
}

Scalar prf_scalar(const PrfKey& key, ByteView input, const PrimeOrderGroup& group) {
    counters::bump(counters::Kind::scalar_prf);

    Bytes message(input.begin(), input.end());
    for (uint32_t attempt = 0;; ++attempt) {
        uint8_t digest[64];
        unsigned int digest_len = 0;
        if (HMAC(EVP_sha512(), key.bytes().data(), static_cast<int>(key.bytes().size()),
                 message.data(), message.size(), digest, &digest_len) == nullptr ||
            digest_len != sizeof digest) {
            throw Error("HMAC-SHA-512 evaluation failed");
        }
        ScalarBytes reduced = group.reduce_be(ByteView(digest, sizeof digest));
        bool zero = true;
        for (uint8_t b : reduced) {
            if (b != 0) { zero = false; break; }
        }
        if (!zero) {
            return group.scalar_from_be(reduced);
        }
        // Zero residue: extend the message with a counter and derive again.
        message.assign(input.begin(), input.end());
        append_u32_be(attempt + 1, message);
    }
}

}  // namespace ace
