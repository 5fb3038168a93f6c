#include "ace/protocol/vetter.hpp"

#include "ace/crypto/aead.hpp"
#include "ace/crypto/prf.hpp"
#include "ace/errors.hpp"
#include "ace/protocol/state_io.hpp"
#include "ace/storage/snapshot.hpp"

namespace ace {

std::optional<SearchToken> Vetter::issue_search(ByteView keyword) const {
    auto it = w_.find(Bytes(keyword.begin(), keyword.end()));
    if (it == w_.end()) {
        return std::nullopt;
    }
    Scalar tag_w = prf_scalar(keys_.k_t, keyword, *keys_.group);
    GroupElement tk = keys_.group->exp_base(tag_w);
    return SearchToken{std::move(tk), it->second.st, it->second.count};
}

IdSet Vetter::decrypt_results(ByteView keyword, const RSet& rset) const {
    CipherKey k_w = CipherKey::from_bytes(prf_bytes(keys_.k_s, keyword));
    IdSet ids;
    for (size_t i = 0; i < rset.size(); ++i) {
        try {
            ids.insert(se_decrypt(k_w, rset[i]));
        } catch (const IntegrityError&) {
            throw IntegrityError("result entry " + std::to_string(i) +
                                 " failed authenticated decryption");
        }
    }
    return ids;
}

void Vetter::apply_delta(const WDelta& delta) {
    if (delta.seq != applied_seq_ + 1) {
        throw StalenessError("keyword-state delta out of order: got seq " +
                             std::to_string(delta.seq) + ", expected " +
                             std::to_string(applied_seq_ + 1));
    }
    for (const WDelta::Entry& entry : delta.entries) {
        auto it = w_.find(entry.keyword);
        if (it != w_.end() && entry.count <= it->second.count) {
            throw StalenessError("keyword counter regression in delta");
        }
    }
    for (const WDelta::Entry& entry : delta.entries) {
        w_[entry.keyword] = {entry.st, entry.count};
    }
    applied_seq_ = delta.seq;
}

Bytes Vetter::export_snapshot() const {
    MemoryStore store;
    std::vector<Mutation> mutations;
    auto put_key = [&](std::string_view name, ByteView value) {
        mutations.push_back(
            Mutation::put(Namespace::keys, to_bytes(name), Bytes(value.begin(), value.end())));
    };
    put_key("k_s", keys_.k_s.bytes());
    put_key("k_t", keys_.k_t.bytes());
    put_key("k_h", keys_.k_h.bytes());
    put_key("perm_pk", keys_.perm_pk.serialize());
    put_key("group", to_bytes(keys_.group->id()));
    Bytes seq;
    append_u64_be(applied_seq_, seq);
    put_key("applied_seq", seq);
    state_io::stage_keyword_states(mutations, w_);
    store.apply_atomic(mutations);
    return snapshot_export(store);
}

Vetter Vetter::import_snapshot(ByteView snapshot) {
    MemoryStore store = snapshot_import(snapshot);
    auto key_entry = [&](std::string_view name) {
        return state_io::get_required(store, Namespace::keys, to_bytes(name), name.data());
    };
    const PrimeOrderGroup& group = group_by_id(to_string(key_entry("group")));
    VetterKeyMaterial keys{
        PrfKey::from_bytes(key_entry("k_s")),
        PrfKey::from_bytes(key_entry("k_t")),
        HashKey::from_bytes(key_entry("k_h")),
        TdpPublicKey::deserialize(key_entry("perm_pk")),
        &group,
    };
    Vetter vetter(std::move(keys));
    vetter.applied_seq_ = state_io::read_u64_entry(store, to_bytes("applied_seq"), "applied_seq");
    vetter.w_ = state_io::read_keyword_states(store, vetter.keys_.perm_pk);
    return vetter;
}

}  // namespace ace
