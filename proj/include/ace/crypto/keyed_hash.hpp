#pragma once

#include <array>

#include "ace/crypto/group.hpp"
#include "ace/crypto/keybytes.hpp"

namespace ace {

// Output width of the keyed hash that forms searchable indices.
constexpr size_t kHashOutputBytes = 32;
using HashOutput = std::array<uint8_t, kHashOutputBytes>;

// HMAC-SHA-256 over the element's canonical fixed-width encoding.
HashOutput keyed_hash(const HashKey& key, const GroupElement& element);

}  // namespace ace
