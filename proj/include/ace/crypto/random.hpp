#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string_view>

#include "ace/bytes.hpp"

namespace ace {

// Source of randomness for key generation, state sampling and nonces.
//
// Two implementations exist: the operating-system CSPRNG for normal use and
// a deterministic ChaCha20-based generator for seeded, reproducible runs.
// fork() derives an independent child stream from a label, which lets batch
// processing hand each worker its own stream without losing determinism.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    virtual void fill(uint8_t* out, size_t len) = 0;
    virtual std::unique_ptr<RandomSource> fork(ByteView label) = 0;

    Bytes bytes(size_t len) {
        Bytes out(len);
        if (len > 0) fill(out.data(), len);
        return out;
    }

    template <size_t N>
    std::array<uint8_t, N> array() {
        std::array<uint8_t, N> out{};
        fill(out.data(), N);
        return out;
    }

    // Uniform value in [0, bound) via rejection sampling; bound > 0.
    uint64_t uniform(uint64_t bound);
};

class OsRandom final : public RandomSource {
public:
    void fill(uint8_t* out, size_t len) override;
    std::unique_ptr<RandomSource> fork(ByteView label) override;
};

// Deterministic generator: a ChaCha20 keystream under a 32-byte seed.
class DeterministicRandom final : public RandomSource {
public:
    explicit DeterministicRandom(const std::array<uint8_t, 32>& seed);
    explicit DeterministicRandom(uint64_t seed);

    void fill(uint8_t* out, size_t len) override;
    std::unique_ptr<RandomSource> fork(ByteView label) override;

private:
    std::array<uint8_t, 32> key_;
    uint64_t counter_ = 0;
};

}  // namespace ace
