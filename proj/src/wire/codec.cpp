#include "ace/wire/codec.hpp"

#include <sodium.h>

#include <cstring>

#include "ace/errors.hpp"

namespace ace {

namespace {

constexpr char kMagic[4] = {'A', 'C', 'E', '1'};
constexpr size_t kMaxBodyBytes = 1u << 30;

bool known_type(uint8_t t) {
    return t >= static_cast<uint8_t>(MessageType::add_batch) &&
           t <= static_cast<uint8_t>(MessageType::deletion_report);
}

MessageType expect_type(ByteView message, MessageType want) {
    auto [type, body] = wire_unframe(message);
    if (type != want) {
        throw CodecError("unexpected message type");
    }
    return type;
}

Scalar decode_scalar(ByteView be32, const PrimeOrderGroup& group, const char* what) {
    try {
        return group.scalar_from_be(be32);
    } catch (const DomainError& e) {
        throw CodecError(std::string(what) + ": " + e.what());
    }
}

GroupElement decode_element(ByteView bytes, const PrimeOrderGroup& group, const char* what) {
    try {
        return group.element_from_bytes(bytes);
    } catch (const DomainError& e) {
        throw CodecError(std::string(what) + ": " + e.what());
    }
}

PermDomainValue decode_perm_value(ByteView be, const TdpPublicKey& pk, const char* what) {
    try {
        return perm_value_from_bytes(be, pk);
    } catch (const DomainError& e) {
        throw CodecError(std::string(what) + ": " + e.what());
    }
}

}  // namespace

Bytes wire_frame(MessageType type, ByteView body) {
    if (body.size() > kMaxBodyBytes) {
        throw CodecError("message body too large");
    }
    Bytes out;
    out.reserve(kWireOverheadBytes + body.size());
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(static_cast<uint8_t>(type));
    append_u32_be(static_cast<uint32_t>(body.size()), out);
    out.insert(out.end(), body.begin(), body.end());
    uint8_t digest[32];
    crypto_hash_sha256(digest, out.data(), out.size());
    out.insert(out.end(), digest, digest + 32);
    return out;
}

std::pair<MessageType, Bytes> wire_unframe(ByteView message) {
    if (message.size() < kWireOverheadBytes) {
        throw CodecError("message truncated");
    }
    if (std::memcmp(message.data(), kMagic, 4) != 0) {
        throw CodecError("bad magic");
    }
    uint8_t type = message[4];
    if (!known_type(type)) {
        throw CodecError("unknown message type");
    }
    size_t off = 5;
    uint32_t body_len = read_u32_be(message, off);
    if (message.size() != kWireOverheadBytes + body_len) {
        throw CodecError("length field mismatch");
    }
    uint8_t digest[32];
    crypto_hash_sha256(digest, message.data(), message.size() - 32);
    if (std::memcmp(digest, message.data() + message.size() - 32, 32) != 0) {
        throw CodecError("checksum mismatch");
    }
    Bytes body(message.begin() + static_cast<std::ptrdiff_t>(off),
               message.begin() + static_cast<std::ptrdiff_t>(off + body_len));
    return {static_cast<MessageType>(type), std::move(body)};
}

Bytes encode_delete_token(const DeleteToken& token) {
    Bytes body;
    body.reserve(kDeleteTokenBodyBytes);
    body.insert(body.end(), token.tag_id.be().begin(), token.tag_id.be().end());
    body.insert(body.end(), token.row_key.begin(), token.row_key.end());
    return wire_frame(MessageType::delete_token, body);
}

DeleteToken decode_delete_token(ByteView message, const PrimeOrderGroup& group) {
    expect_type(message, MessageType::delete_token);
    auto [type, body] = wire_unframe(message);
    if (body.size() != kDeleteTokenBodyBytes) {
        throw CodecError("delete token body has wrong size");
    }
    size_t off = 0;
    Bytes tag = read_exact(body, off, kScalarBytes);
    Bytes row = read_exact(body, off, 16);
    return DeleteToken{decode_scalar(tag, group, "tag scalar"), to_array<16>(row)};
}

Bytes encode_search_token(const SearchToken& token) {
    Bytes body;
    body.reserve(token.tk.data.size() + kPermDomainBytes + 8);
    body.insert(body.end(), token.tk.data.begin(), token.tk.data.end());
    body.insert(body.end(), token.st.be.begin(), token.st.be.end());
    append_u64_be(token.count, body);
    return wire_frame(MessageType::search_token, body);
}

SearchToken decode_search_token(ByteView message, const PrimeOrderGroup& group,
                                const TdpPublicKey& pk) {
    expect_type(message, MessageType::search_token);
    auto [type, body] = wire_unframe(message);
    size_t expected = group.element_width() + kPermDomainBytes + 8;
    if (body.size() != expected) {
        throw CodecError("search token body has wrong size");
    }
    size_t off = 0;
    Bytes tk = read_exact(body, off, group.element_width());
    Bytes st = read_exact(body, off, kPermDomainBytes);
    uint64_t count = read_u64_be(body, off);
    if (count == 0) {
        throw CodecError("search token counter must be positive");
    }
    return SearchToken{decode_element(tk, group, "search token element"),
                       decode_perm_value(st, pk, "search token chain value"), count};
}

Bytes encode_add_batch(const AddBatch& batch) {
    Bytes body;
    append_u32_be(static_cast<uint32_t>(batch.iset_inserts.size()), body);
    for (const auto& insert : batch.iset_inserts) {
        body.insert(body.end(), insert.index.begin(), insert.index.end());
        append_sized(insert.encrypted_id, body);
    }
    append_u32_be(static_cast<uint32_t>(batch.fset_appends.size()), body);
    for (const auto& append : batch.fset_appends) {
        body.insert(body.end(), append.row_key.begin(), append.row_key.end());
        append_sized(append.delta.data, body);
    }
    return wire_frame(MessageType::add_batch, body);
}

AddBatch decode_add_batch(ByteView message, const PrimeOrderGroup& group) {
    expect_type(message, MessageType::add_batch);
    auto [type, body] = wire_unframe(message);
    size_t off = 0;
    AddBatch batch;
    uint32_t inserts = read_u32_be(body, off);
    batch.iset_inserts.reserve(inserts);
    for (uint32_t i = 0; i < inserts; ++i) {
        Bytes index = read_exact(body, off, kHashOutputBytes);
        Bytes encrypted_id = read_sized(body, off, body.size(), "encrypted identifier");
        batch.iset_inserts.push_back({to_array<kHashOutputBytes>(index), std::move(encrypted_id)});
    }
    uint32_t appends = read_u32_be(body, off);
    batch.fset_appends.reserve(appends);
    for (uint32_t i = 0; i < appends; ++i) {
        Bytes row_key = read_exact(body, off, 16);
        Bytes delta = read_sized(body, off, body.size(), "delta");
        batch.fset_appends.push_back(
            {to_array<16>(row_key), decode_element(delta, group, "delta element")});
    }
    if (off != body.size()) {
        throw CodecError("trailing bytes in add batch");
    }
    return batch;
}

Bytes encode_rset(const RSet& rset) {
    Bytes body;
    append_u32_be(static_cast<uint32_t>(rset.size()), body);
    for (const Bytes& entry : rset) {
        append_sized(entry, body);
    }
    return wire_frame(MessageType::rset, body);
}

RSet decode_rset(ByteView message) {
    expect_type(message, MessageType::rset);
    auto [type, body] = wire_unframe(message);
    size_t off = 0;
    uint32_t count = read_u32_be(body, off);
    RSet rset;
    rset.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        rset.push_back(read_sized(body, off, body.size(), "result entry"));
    }
    if (off != body.size()) {
        throw CodecError("trailing bytes in result set");
    }
    return rset;
}

Bytes encode_w_delta(const WDelta& delta) {
    Bytes body;
    append_u64_be(delta.seq, body);
    append_u32_be(static_cast<uint32_t>(delta.entries.size()), body);
    for (const WDelta::Entry& entry : delta.entries) {
        append_sized(entry.keyword, body);
        body.insert(body.end(), entry.st.be.begin(), entry.st.be.end());
        append_u64_be(entry.count, body);
    }
    return wire_frame(MessageType::w_delta, body);
}

WDelta decode_w_delta(ByteView message, const TdpPublicKey& pk) {
    expect_type(message, MessageType::w_delta);
    auto [type, body] = wire_unframe(message);
    size_t off = 0;
    WDelta delta;
    delta.seq = read_u64_be(body, off);
    uint32_t count = read_u32_be(body, off);
    delta.entries.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        Bytes keyword = read_sized(body, off, body.size(), "keyword");
        if (keyword.empty()) {
            throw CodecError("empty keyword in state delta");
        }
        Bytes st = read_exact(body, off, kPermDomainBytes);
        uint64_t c = read_u64_be(body, off);
        delta.entries.push_back(
            {std::move(keyword), decode_perm_value(st, pk, "chain value"), c});
    }
    if (off != body.size()) {
        throw CodecError("trailing bytes in state delta");
    }
    return delta;
}

Bytes encode_deletion_report(const DeletionReport& report) {
    Bytes body;
    append_u64_be(report.removed, body);
    return wire_frame(MessageType::deletion_report, body);
}

DeletionReport decode_deletion_report(ByteView message) {
    expect_type(message, MessageType::deletion_report);
    auto [type, body] = wire_unframe(message);
    if (body.size() != 8) {
        throw CodecError("deletion report body has wrong size");
    }
    size_t off = 0;
    return DeletionReport{read_u64_be(body, off)};
}

}  // namespace ace
