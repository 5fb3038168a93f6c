#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ace {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(ByteView b) {
    return std::string(b.begin(), b.end());
}

std::string hex_encode(ByteView data);
Bytes hex_decode(std::string_view hex);

void append_u32_be(uint32_t value, Bytes& out);
void append_u64_be(uint64_t value, Bytes& out);
uint32_t read_u32_be(ByteView input, size_t& offset);
uint64_t read_u64_be(ByteView input, size_t& offset);

// Reads a fixed number of bytes, advancing offset; throws CodecError on underrun.
Bytes read_exact(ByteView input, size_t& offset, size_t count);

// Length-prefixed (u32 big-endian) field helpers used by every serializer.
void append_sized(ByteView field, Bytes& out);
Bytes read_sized(ByteView input, size_t& offset, size_t max_len, const char* field_name);

// True if `needle` occurs as a contiguous subsequence of `haystack`.
bool contains_bytes(ByteView haystack, ByteView needle);

template <size_t N>
std::array<uint8_t, N> to_array(ByteView b) {
    std::array<uint8_t, N> out{};
    if (b.size() != N) {
        throw std::invalid_argument("byte span has wrong width for fixed array");
    }
    std::copy(b.begin(), b.end(), out.begin());
    return out;
}

}  // namespace ace
