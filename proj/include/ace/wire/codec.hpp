#pragma once

#include <utility>

#include "ace/protocol/keys.hpp"
#include "ace/protocol/messages.hpp"

namespace ace {

// Wire framing: magic "ACE1" | type byte | u32 big-endian body length |
// body | 32-byte SHA-256 over everything before the checksum. Decoders
// reject bad magic, unknown types, length mismatches and any checksum
// failure, so every single-byte mutation of a frame is caught.
enum class MessageType : uint8_t {
    add_batch = 0x01,
    delete_token = 0x02,
    search_token = 0x03,
    rset = 0x04,
    w_delta = 0x05,
    deletion_report = 0x06,
};

constexpr size_t kWireOverheadBytes = 4 + 1 + 4 + 32;

// Body sizes fixed by the construction (production group, 2048-bit chain):
// a delete token is 48 bytes regardless of the identifier's keyword count.
constexpr size_t kDeleteTokenBodyBytes = kScalarBytes + 16;

Bytes wire_frame(MessageType type, ByteView body);
std::pair<MessageType, Bytes> wire_unframe(ByteView message);

Bytes encode_delete_token(const DeleteToken& token);
DeleteToken decode_delete_token(ByteView message, const PrimeOrderGroup& group);

Bytes encode_search_token(const SearchToken& token);
SearchToken decode_search_token(ByteView message, const PrimeOrderGroup& group,
                                const TdpPublicKey& pk);

Bytes encode_add_batch(const AddBatch& batch);
AddBatch decode_add_batch(ByteView message, const PrimeOrderGroup& group);

Bytes encode_rset(const RSet& rset);
RSet decode_rset(ByteView message);

Bytes encode_w_delta(const WDelta& delta);
WDelta decode_w_delta(ByteView message, const TdpPublicKey& pk);

Bytes encode_deletion_report(const DeletionReport& report);
DeletionReport decode_deletion_report(ByteView message);

}  // namespace ace
