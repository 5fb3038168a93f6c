#include "ace/protocol/trustee.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "ace/crypto/aead.hpp"
#include "ace/crypto/counters.hpp"
#include "ace/crypto/prf.hpp"
#include "ace/errors.hpp"
#include "ace/protocol/state_io.hpp"
#include "ace/storage/snapshot.hpp"

namespace ace {

namespace {
constexpr std::string_view kLiveIdPrefix = "id/";

Bytes live_id_key(ByteView id) {
    Bytes key = to_bytes(kLiveIdPrefix);
    key.insert(key.end(), id.begin(), id.end());
    return key;
}
}  // namespace

Trustee::Trustee(TrusteeKeyMaterial keys, std::unique_ptr<RandomSource> rng, size_t workers)
    : keys_(std::move(keys)), rng_(std::move(rng)), workers_(workers) {
    if (workers_ == 0) {
        workers_ = std::max(1u, std::thread::hardware_concurrency());
    }
}

Trustee Trustee::create(const Config& config, std::unique_ptr<RandomSource> rng) {
    if (config.security_bits < 128) {
        throw ProtocolError("security parameter must be at least 128 bits");
    }
    if (!rng) rng = std::make_unique<OsRandom>();
    const PrimeOrderGroup* group = config.group ? config.group : &ristretto_group();

    TrusteeKeyMaterial keys{
        PrfKey::random(*rng),  PrfKey::random(*rng), PrfKey::random(*rng),
        PrfKey::random(*rng),  HashKey::random(*rng),
        tdp_keygen(config.perm_modulus_bits, *rng),
        group,
    };
    return Trustee(std::move(keys), std::move(rng), config.add_workers);
}

VetterKeyMaterial Trustee::vetter_key_material() const {
    return {keys_.k_s, keys_.k_t, keys_.k_h, keys_.perm_sk.public_key(), keys_.group};
}

ServerPublicParams Trustee::server_public_params() const {
    return {keys_.k_h, keys_.perm_sk.public_key(), keys_.group};
}

std::pair<AddBatch, WDelta> Trustee::add_batch(const std::vector<AddRecord>& records) {
    const PrimeOrderGroup& group = *keys_.group;

    // Normalize: merge duplicate identifiers, keep first-appearance order.
    std::vector<Bytes> id_order;
    std::map<Bytes, std::set<Bytes>> by_id;
    for (const AddRecord& rec : records) {
        if (rec.id.empty()) throw ProtocolError("record has empty identifier");
        if (rec.keywords.empty()) throw ProtocolError("record has empty keyword set");
        for (const Bytes& kw : rec.keywords) {
            if (kw.empty()) throw ProtocolError("record has empty keyword");
        }
        auto [it, fresh] = by_id.try_emplace(rec.id);
        if (fresh) id_order.push_back(rec.id);
        it->second.insert(rec.keywords.begin(), rec.keywords.end());
    }

    // Identifier lists per distinct keyword, in record order.
    std::map<Bytes, std::vector<const Bytes*>> gdb;
    for (const Bytes& id : id_order) {
        for (const Bytes& kw : by_id[id]) {
            gdb[kw].push_back(&id);
        }
    }

    // Row keys and tags for identifiers not currently live; committed only
    // if the whole batch succeeds.
    std::map<Bytes, LiveId> staged_ids;
    for (const Bytes& id : id_order) {
        if (live_ids_.contains(id)) continue;
        RowKey row_key = prf_bytes(keys_.k_1, id);
        Scalar tag = prf_scalar(keys_.k_2, id, group);
        staged_ids.emplace(id, LiveId{row_key, tag, group.scalar_inv(tag)});
    }
    auto id_info = [&](const Bytes& id) -> const LiveId& {
        auto it = staged_ids.find(id);
        if (it != staged_ids.end()) return it->second;
        return live_ids_.at(id);
    };

    struct Task {
        const Bytes* keyword;
        const std::vector<const Bytes*>* ids;
        std::unique_ptr<RandomSource> rng;
    };
    struct Result {
        std::vector<AddBatch::IsetInsert> inserts;
        std::vector<AddBatch::FsetAppend> appends;
        KeywordState final_state;
    };

    // Forks are created on this thread in keyword order, so seeded runs are
    // reproducible regardless of worker scheduling.
    std::vector<Task> tasks;
    tasks.reserve(gdb.size());
    for (auto& [keyword, ids] : gdb) {
        tasks.push_back(Task{&keyword, &ids, rng_->fork(keyword)});
    }
    std::vector<Result> results(tasks.size());

    TdpPublicKey perm_pk = keys_.perm_sk.public_key();
    auto run_task = [&](Task& task, Result& result, const TdpSecretKey& sk) {
        const Bytes& keyword = *task.keyword;
        Scalar tag_w = prf_scalar(keys_.k_t, keyword, group);
        CipherKey k_w = CipherKey::from_bytes(prf_bytes(keys_.k_s, keyword));

        KeywordState state;
        auto existing = w_.find(keyword);
        if (existing != w_.end()) {
            state = existing->second;
        } else {
            state.st = tdp_sample_domain(perm_pk, *task.rng);
            state.count = 0;
        }

        result.inserts.reserve(task.ids->size());
        result.appends.reserve(task.ids->size());
        for (const Bytes* id : *task.ids) {
            state.count += 1;
            state.st = sk.inverse(state.st);
            Scalar st_reduced = reduce_to_scalar(state.st, group);
            Scalar st_tag = group.scalar_mul(st_reduced, tag_w);

            IndexKey index = keyed_hash(keys_.k_h, group.exp_base(st_tag));
            Bytes encrypted_id = se_encrypt(k_w, *id, *task.rng);
            const LiveId& info = id_info(*id);
            GroupElement delta = group.exp_base(group.scalar_mul(st_tag, info.inv_tag_id));

            result.inserts.push_back({index, std::move(encrypted_id)});
            result.appends.push_back({info.row_key, std::move(delta)});
        }
        result.final_state = state;
    };

    size_t worker_count = std::min(workers_, tasks.size());
    if (worker_count <= 1) {
        for (size_t i = 0; i < tasks.size(); ++i) {
            run_task(tasks[i], results[i], keys_.perm_sk);
        }
    } else {
        std::atomic<size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        CounterSink* parent_sink = counters::current();

        auto worker = [&] {
            counters::Scope scope(parent_sink);
            TdpSecretKey sk = keys_.perm_sk.clone();
            try {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) break;
                    run_task(tasks[i], results[i], sk);
                }
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                next.store(tasks.size());  // drain remaining work
            }
        };
        std::vector<std::thread> threads;
        threads.reserve(worker_count);
        for (size_t t = 0; t < worker_count; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    // Merge in keyword order and commit.
    AddBatch batch;
    WDelta delta;
    delta.seq = delta_seq_ + 1;
    for (size_t i = 0; i < tasks.size(); ++i) {
        batch.iset_inserts.insert(batch.iset_inserts.end(),
                                  std::make_move_iterator(results[i].inserts.begin()),
                                  std::make_move_iterator(results[i].inserts.end()));
        batch.fset_appends.insert(batch.fset_appends.end(),
                                  std::make_move_iterator(results[i].appends.begin()),
                                  std::make_move_iterator(results[i].appends.end()));
        delta.entries.push_back({*tasks[i].keyword, results[i].final_state.st,
                                 results[i].final_state.count});
    }

    for (const WDelta::Entry& entry : delta.entries) {
        w_[entry.keyword] = {entry.st, entry.count};
    }
    for (auto& [id, info] : staged_ids) {
        live_ids_.emplace(id, std::move(info));
    }
    delta_seq_ += 1;
    return {std::move(batch), std::move(delta)};
}

DeleteToken Trustee::issue_delete(ByteView id) {
    if (id.empty()) throw ProtocolError("identifier must be nonempty");
    Scalar tag_id = prf_scalar(keys_.k_2, id, *keys_.group);
    RowKey row_key = prf_bytes(keys_.k_1, id);
    // Revocation forgets the identifier; a later re-add starts a fresh row
    // under the same deterministic row key.
    live_ids_.erase(Bytes(id.begin(), id.end()));
    return DeleteToken{tag_id, row_key};
}

Bytes Trustee::export_snapshot() const {
    MemoryStore store;
    std::vector<Mutation> mutations;
    auto put_key = [&](std::string_view name, ByteView value) {
        mutations.push_back(
            Mutation::put(Namespace::keys, to_bytes(name), Bytes(value.begin(), value.end())));
    };
    put_key("k_s", keys_.k_s.bytes());
    put_key("k_1", keys_.k_1.bytes());
    put_key("k_t", keys_.k_t.bytes());
    put_key("k_2", keys_.k_2.bytes());
    put_key("k_h", keys_.k_h.bytes());
    put_key("perm_sk", keys_.perm_sk.serialize());
    put_key("group", to_bytes(keys_.group->id()));
    Bytes seq;
    append_u64_be(delta_seq_, seq);
    put_key("delta_seq", seq);
    for (const auto& [id, info] : live_ids_) {
        Bytes value(info.row_key.begin(), info.row_key.end());
        value.insert(value.end(), info.tag_id.be().begin(), info.tag_id.be().end());
        mutations.push_back(Mutation::put(Namespace::keys, live_id_key(id), value));
    }
    state_io::stage_keyword_states(mutations, w_);
    store.apply_atomic(mutations);
    return snapshot_export(store);
}

Trustee Trustee::import_snapshot(ByteView snapshot, size_t add_workers,
                                 std::unique_ptr<RandomSource> rng) {
    MemoryStore store = snapshot_import(snapshot);
    auto key_entry = [&](std::string_view name) {
        return state_io::get_required(store, Namespace::keys, to_bytes(name), name.data());
    };

    const PrimeOrderGroup& group = group_by_id(to_string(key_entry("group")));
    TrusteeKeyMaterial keys{
        PrfKey::from_bytes(key_entry("k_s")),  PrfKey::from_bytes(key_entry("k_1")),
        PrfKey::from_bytes(key_entry("k_t")),  PrfKey::from_bytes(key_entry("k_2")),
        HashKey::from_bytes(key_entry("k_h")), TdpSecretKey::deserialize(key_entry("perm_sk")),
        &group,
    };
    if (!rng) rng = std::make_unique<OsRandom>();
    Trustee trustee(std::move(keys), std::move(rng), add_workers);

    trustee.delta_seq_ = state_io::read_u64_entry(store, to_bytes("delta_seq"), "delta_seq");
    TdpPublicKey pk = trustee.keys_.perm_sk.public_key();
    trustee.w_ = state_io::read_keyword_states(store, pk);

    store.scan(Namespace::keys, [&](ByteView key, ByteView value) {
        if (key.size() <= kLiveIdPrefix.size() ||
            !std::equal(kLiveIdPrefix.begin(), kLiveIdPrefix.end(), key.begin())) {
            return;
        }
        if (value.size() != kPrfOutputBytes + kScalarBytes) {
            throw StorageError("live identifier entry has wrong width");
        }
        Bytes id(key.begin() + static_cast<std::ptrdiff_t>(kLiveIdPrefix.size()), key.end());
        RowKey row_key = to_array<kPrfOutputBytes>(value.subspan(0, kPrfOutputBytes));
        Scalar tag = trustee.keys_.group->scalar_from_be(value.subspan(kPrfOutputBytes));
        trustee.live_ids_.emplace(
            std::move(id), LiveId{row_key, tag, trustee.keys_.group->scalar_inv(tag)});
    });
    return trustee;
}

}  // namespace ace
