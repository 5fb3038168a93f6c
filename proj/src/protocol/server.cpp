#include "ace/protocol/server.hpp"

#include <mutex>
#include <set>

#include "ace/crypto/keyed_hash.hpp"
#include "ace/errors.hpp"
#include "ace/protocol/setup.hpp"
#include "ace/protocol/state_io.hpp"
#include "ace/storage/snapshot.hpp"

namespace ace {

Server::Server(ServerPublicParams params, std::unique_ptr<KvStore> store)
    : params_(std::move(params)),
      store_(std::move(store)),
      mutex_(std::make_unique<std::shared_mutex>()) {
    if (!store_) throw StorageError("server requires a backing store");
    // Persist the public values so the store alone can reopen the server.
    if (!store_->get(Namespace::keys, to_bytes("group"))) {
        std::vector<Mutation> mutations;
        mutations.push_back(Mutation::put(Namespace::keys, to_bytes("k_h"),
                                          Bytes(params_.k_h.bytes().begin(),
                                                params_.k_h.bytes().end())));
        mutations.push_back(
            Mutation::put(Namespace::keys, to_bytes("perm_pk"), params_.perm_pk.serialize()));
        mutations.push_back(
            Mutation::put(Namespace::keys, to_bytes("group"), to_bytes(params_.group->id())));
        store_->apply_atomic(mutations);
    }
}

Server Server::attach(std::unique_ptr<KvStore> store) {
    if (!store) throw StorageError("server requires a backing store");
    auto key_entry = [&](std::string_view name) {
        return state_io::get_required(*store, Namespace::keys, to_bytes(name), name.data());
    };
    ServerPublicParams params{
        HashKey::from_bytes(key_entry("k_h")),
        TdpPublicKey::deserialize(key_entry("perm_pk")),
        &group_by_id(to_string(key_entry("group"))),
    };
    return Server(std::move(params), std::move(store));
}

void Server::apply_add(const AddBatch& batch) {
    std::unique_lock lock(*mutex_);
    if (batch.iset_inserts.size() != batch.fset_appends.size()) {
        throw ProtocolError("insertion batch halves disagree in length");
    }
    const size_t element_width = params_.group->element_width();

    std::set<IndexKey> batch_indices;
    for (const auto& insert : batch.iset_inserts) {
        if (!batch_indices.insert(insert.index).second) {
            throw DuplicateIndexFault("index key repeated within batch");
        }
        if (store_->get(Namespace::iset, insert.index)) {
            throw DuplicateIndexFault("index key already live");
        }
    }

    std::vector<Mutation> mutations;
    mutations.reserve(batch.iset_inserts.size() + batch.fset_appends.size());
    for (const auto& insert : batch.iset_inserts) {
        mutations.push_back(Mutation::put(Namespace::iset,
                                          Bytes(insert.index.begin(), insert.index.end()),
                                          insert.encrypted_id));
    }
    for (const auto& append : batch.fset_appends) {
        if (append.delta.data.size() != element_width) {
            throw ProtocolError("delta has wrong element width");
        }
        mutations.push_back(Mutation::append(Namespace::fset,
                                             Bytes(append.row_key.begin(), append.row_key.end()),
                                             append.delta.data));
    }
    store_->apply_atomic(mutations);
}

DeletionReport Server::apply_delete(const DeleteToken& token) {
    std::unique_lock lock(*mutex_);
    auto row = store_->get(Namespace::fset, token.row_key);
    if (!row) {
        return DeletionReport{0};
    }
    const PrimeOrderGroup& group = *params_.group;
    std::vector<Bytes> deltas = list_value_parse(*row);

    std::vector<Mutation> mutations;
    mutations.reserve(deltas.size() + 1);
    for (const Bytes& delta_bytes : deltas) {
        GroupElement delta = group.element_from_bytes(delta_bytes);
        IndexKey index = keyed_hash(params_.k_h, group.exp(delta, token.tag_id));
        if (!store_->get(Namespace::iset, index)) {
            throw ConsistencyFault("delta points at an absent index entry");
        }
        mutations.push_back(Mutation::del(Namespace::iset, Bytes(index.begin(), index.end())));
    }
    mutations.push_back(
        Mutation::del(Namespace::fset, Bytes(token.row_key.begin(), token.row_key.end())));
    store_->apply_atomic(mutations);
    return DeletionReport{deltas.size()};
}

Server::SearchOutcome Server::search(const SearchToken& token) const {
    std::shared_lock lock(*mutex_);
    if (token.count == 0) {
        throw ProtocolError("search token counter must be positive");
    }
    const PrimeOrderGroup& group = *params_.group;
    SearchOutcome outcome;
    PermDomainValue st = token.st;
    try {
        for (uint64_t i = token.count; i >= 1; --i) {
            Scalar st_reduced = reduce_to_scalar(st, group);
            IndexKey index = keyed_hash(params_.k_h, group.exp(token.tk, st_reduced));
            auto hit = store_->get(Namespace::iset, index);
            if (hit) {
                outcome.results.push_back(std::move(*hit));
            } else {
                // Entry was physically deleted; the chain slot stays dead.
                outcome.skipped += 1;
            }
            st = params_.perm_pk.forward(st);
            outcome.iterations += 1;
        }
    } catch (const ZeroResidueFault&) {
        throw ProtocolError("search token chain reduced to zero");
    } catch (const DomainError& e) {
        throw ProtocolError(std::string("malformed search token: ") + e.what());
    }
    return outcome;
}

uint64_t Server::iset_size() const {
    std::shared_lock lock(*mutex_);
    return store_->count(Namespace::iset);
}

uint64_t Server::fset_rows() const {
    std::shared_lock lock(*mutex_);
    return store_->count(Namespace::fset);
}

Bytes Server::export_snapshot() const {
    std::shared_lock lock(*mutex_);
    return snapshot_export(*store_);
}

Deployment setup(const Trustee::Config& config, std::unique_ptr<RandomSource> rng,
                 std::unique_ptr<KvStore> server_store) {
    Trustee trustee = Trustee::create(config, std::move(rng));
    Vetter vetter(trustee.vetter_key_material());
    if (!server_store) server_store = std::make_unique<MemoryStore>();
    Server server(trustee.server_public_params(), std::move(server_store));
    return Deployment{std::move(trustee), std::move(vetter), std::move(server)};
}

}  // namespace ace
