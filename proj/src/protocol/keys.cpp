#include "ace/protocol/state_io.hpp"

#include "ace/errors.hpp"

namespace ace::state_io {

Bytes encode_keyword_state(const KeywordState& state) {
    Bytes out;
    out.reserve(kPermDomainBytes + 8);
    out.insert(out.end(), state.st.be.begin(), state.st.be.end());
    append_u64_be(state.count, out);
    return out;
}

KeywordState decode_keyword_state(ByteView value, const TdpPublicKey& pk) {
    if (value.size() != kPermDomainBytes + 8) {
        throw StorageError("keyword state entry has wrong width");
    }
    KeywordState state;
    state.st = perm_value_from_bytes(value.subspan(0, kPermDomainBytes), pk);
    size_t off = kPermDomainBytes;
    state.count = read_u64_be(value, off);
    return state;
}

void stage_keyword_states(std::vector<Mutation>& mutations, const KeywordStateMap& w) {
    for (const auto& [keyword, state] : w) {
        mutations.push_back(Mutation::put(Namespace::wmap, keyword, encode_keyword_state(state)));
    }
}

KeywordStateMap read_keyword_states(const KvStore& store, const TdpPublicKey& pk) {
    KeywordStateMap w;
    store.scan(Namespace::wmap, [&](ByteView key, ByteView value) {
        w.emplace(Bytes(key.begin(), key.end()), decode_keyword_state(value, pk));
    });
    return w;
}

Bytes get_required(const KvStore& store, Namespace ns, ByteView key, const char* what) {
    auto value = store.get(ns, key);
    if (!value) {
        throw StorageError(std::string("missing state entry: ") + what);
    }
    return *value;
}

uint64_t read_u64_entry(const KvStore& store, ByteView key, const char* what) {
    Bytes value = get_required(store, Namespace::keys, key, what);
    size_t off = 0;
    uint64_t v = read_u64_be(value, off);
    if (off != value.size()) {
        throw StorageError(std::string("oversized u64 entry: ") + what);
    }
    return v;
}

}  // namespace ace::state_io
