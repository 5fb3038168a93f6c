#include "ace/crypto/random.hpp"

#include <sodium.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace ace {

namespace {
void ensure_sodium() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        if (sodium_init() < 0) {
            throw std::runtime_error("libsodium initialization failed");
        }
    });
}
}  // namespace

uint64_t RandomSource::uniform(uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("uniform bound must be positive");
    }
    // Rejection sampling over the widest multiple of bound below 2^64.
    uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    for (;;) {
        uint64_t v = 0;
        uint8_t buf[8];
        fill(buf, 8);
        for (int i = 0; i < 8; ++i) v = (v << 8) | buf[i];
        if (v < limit || limit == 0) {
            return v % bound;
        }
    }
}

void OsRandom::fill(uint8_t* out, size_t len) {
    ensure_sodium();
    randombytes_buf(out, len);
}

std::unique_ptr<RandomSource> OsRandom::fork(ByteView) {
    return std::make_unique<OsRandom>();
}

DeterministicRandom::DeterministicRandom(const std::array<uint8_t, 32>& seed) : key_(seed) {
    ensure_sodium();
}

DeterministicRandom::DeterministicRandom(uint64_t seed) {
    ensure_sodium();
    // Expand the integer seed into a full key through the hash.
    uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<uint8_t>(seed >> (8 * (7 - i)));
    crypto_hash_sha256(key_.data(), buf, sizeof buf);
}

void DeterministicRandom::fill(uint8_t* out, size_t len) {
    uint8_t nonce[crypto_stream_chacha20_NONCEBYTES] = {0};
    for (int i = 0; i < 8; ++i) nonce[i] = static_cast<uint8_t>(counter_ >> (8 * (7 - i)));
    ++counter_;
    std::memset(out, 0, len);
    crypto_stream_chacha20_xor(out, out, len, nonce, key_.data());
}

std::unique_ptr<RandomSource> DeterministicRandom::fork(ByteView label) {
    std::array<uint8_t, 32> child{};
    crypto_auth_hmacsha256_state st;
    crypto_auth_hmacsha256_init(&st, key_.data(), key_.size());
    uint8_t ctr[8];
    for (int i = 0; i < 8; ++i) ctr[i] = static_cast<uint8_t>(counter_ >> (8 * (7 - i)));
    ++counter_;
    crypto_auth_hmacsha256_update(&st, ctr, sizeof ctr);
    crypto_auth_hmacsha256_update(&st, label.data(), label.size());
    crypto_auth_hmacsha256_final(&st, child.data());
    return std::make_unique<DeterministicRandom>(child);
}

}  // namespace ace
