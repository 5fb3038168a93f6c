#pragma once

#include <array>
#include <cstdint>

#include "ace/bytes.hpp"
#include "ace/crypto/random.hpp"
#include "ace/errors.hpp"

namespace ace {

// Fixed-width secret key wrapper; distinct Tag types keep the PRF, hash and
// cipher key roles from mixing. Zeroized on destruction.
template <size_t N, typename Tag>
class KeyBytes {
public:
    static constexpr size_t kBytes = N;

    static KeyBytes random(RandomSource& rng) {
        KeyBytes k;
        rng.fill(k.bytes_.data(), N);
        return k;
    }

    static KeyBytes from_bytes(ByteView b) {
        if (b.size() != N) {
            throw DomainError("key has wrong width");
        }
        KeyBytes k;
        std::copy(b.begin(), b.end(), k.bytes_.begin());
        return k;
    }

    const std::array<uint8_t, N>& bytes() const { return bytes_; }

    bool operator==(const KeyBytes& o) const { return bytes_ == o.bytes_; }

    ~KeyBytes() {
        volatile uint8_t* p = bytes_.data();
        for (size_t i = 0; i < N; ++i) p[i] = 0;
    }

    KeyBytes(const KeyBytes&) = default;
    KeyBytes& operator=(const KeyBytes&) = default;

private:
    KeyBytes() = default;
    std::array<uint8_t, N> bytes_{};
};

using PrfKey = KeyBytes<32, struct PrfKeyTag>;
using HashKey = KeyBytes<32, struct HashKeyTag>;
using CipherKey = KeyBytes<16, struct CipherKeyTag>;

}  // namespace ace
