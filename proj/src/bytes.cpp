#include "ace/bytes.hpp"

#include <algorithm>
#include <cstring>

#include "ace/errors.hpp"

namespace ace {

namespace {
constexpr char kHexDigits[] = "0123456789abcdef";

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}
}  // namespace

std::string hex_encode(ByteView data) {
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(kHexDigits[b >> 4]);
        out.push_back(kHexDigits[b & 0x0F]);
    }
    return out;
}

Bytes hex_decode(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw CodecError("hex string has odd length");
    }
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw CodecError("invalid hex digit");
        }
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

void append_u32_be(uint32_t value, Bytes& out) {
    out.push_back(static_cast<uint8_t>(value >> 24));
    out.push_back(static_cast<uint8_t>(value >> 16));
    out.push_back(static_cast<uint8_t>(value >> 8));
    out.push_back(static_cast<uint8_t>(value));
}

void append_u64_be(uint64_t value, Bytes& out) {
    for (int shift = 56; shift >= 0; shift -= 8) {
        out.push_back(static_cast<uint8_t>(value >> shift));
    }
}

uint32_t read_u32_be(ByteView input, size_t& offset) {
    if (offset + 4 > input.size()) {
        throw CodecError("truncated u32 field");
    }
    uint32_t v = (static_cast<uint32_t>(input[offset]) << 24) |
                 (static_cast<uint32_t>(input[offset + 1]) << 16) |
                 (static_cast<uint32_t>(input[offset + 2]) << 8) |
                 static_cast<uint32_t>(input[offset + 3]);
    offset += 4;
    return v;
}

uint64_t read_u64_be(ByteView input, size_t& offset) {
    if (offset + 8 > input.size()) {
        throw CodecError("truncated u64 field");
    }
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v = (v << 8) | input[offset + i];
    }
    offset += 8;
    return v;
}

Bytes read_exact(ByteView input, size_t& offset, size_t count) {
    if (offset + count > input.size()) {
        throw CodecError("truncated fixed-width field");
    }
    Bytes out(input.begin() + static_cast<std::ptrdiff_t>(offset),
              input.begin() + static_cast<std::ptrdiff_t>(offset + count));
    offset += count;
    return out;
}

void append_sized(ByteView field, Bytes& out) {
    if (field.size() > UINT32_MAX) {
        throw CodecError("sized field exceeds u32 length");
    }
    append_u32_be(static_cast<uint32_t>(field.size()), out);
    out.insert(out.end(), field.begin(), field.end());
}

Bytes read_sized(ByteView input, size_t& offset, size_t max_len, const char* field_name) {
    uint32_t len = read_u32_be(input, offset);
    if (len > max_len) {
        throw CodecError(std::string(field_name) + " exceeds maximum length");
    }
    if (offset + len > input.size()) {
        throw CodecError(std::string(field_name) + " has inconsistent length");
    }
    Bytes out(input.begin() + static_cast<std::ptrdiff_t>(offset),
              input.begin() + static_cast<std::ptrdiff_t>(offset + len));
    offset += len;
    return out;
}

bool contains_bytes(ByteView haystack, ByteView needle) {
    if (needle.empty()) return true;
    if (needle.size() > haystack.size()) return false;
    const void* found = memmem(haystack.data(), haystack.size(), needle.data(), needle.size());
    return found != nullptr;
}

}  // namespace ace
