#pragma once

#include <array>

#include "ace/bytes.hpp"
#include "ace/crypto/group.hpp"
#include "ace/crypto/keybytes.hpp"

namespace ace {

// Output width of the byte-oriented PRF (AES-128 CMAC).
constexpr size_t kPrfOutputBytes = 16;
using PrfOutput = std::array<uint8_t, kPrfOutputBytes>;

// AES-128-CMAC over the input, keyed with the leading 16 key bytes.
// Deterministic, total; 16-byte output.
PrfOutput prf_bytes(const PrfKey& key, ByteView input);

// PRF with range Z*_p: HMAC-SHA-512 interpreted as a big-endian integer and
// reduced modulo the group order. A zero residue triggers re-derivation with
// a domain-separation counter appended, so the result is always invertible.
Scalar prf_scalar(const PrfKey& key, ByteView input, const PrimeOrderGroup& group);

}  // namespace ace
