#pragma once

#include <memory>
#include <shared_mutex>

#include "ace/protocol/keys.hpp"
#include "ace/protocol/messages.hpp"
#include "ace/storage/kv.hpp"

namespace ace {

// Honest-but-curious storage and search party. Holds only public values and
// the encrypted index. Many searches may run concurrently; mutations take
// the exclusive side of a readers-writer lock.
class Server {
public:
    struct SearchOutcome {
        RSet results;
        uint64_t iterations = 0;  // always equals the token counter
        uint64_t skipped = 0;     // chain slots whose entries were deleted
    };

    Server(ServerPublicParams params, std::unique_ptr<KvStore> store);

    // Reopens a server over a store that already holds its public values.
    static Server attach(std::unique_ptr<KvStore> store);

    // Atomic batch insertion; an index key that is already live (or repeated
    // within the batch) raises DuplicateIndexFault and nothing is applied.
    void apply_add(const AddBatch& batch);

    // Physically removes the identifier's row and every index entry its
    // deltas point to. Unknown row keys are an idempotent no-op.
    DeletionReport apply_delete(const DeleteToken& token);

    // Walks the keyword chain backwards exactly token.count steps, skipping
    // deleted entries. Read-only.
    SearchOutcome search(const SearchToken& token) const;

    uint64_t iset_size() const;
    uint64_t fset_rows() const;

    const ServerPublicParams& params() const { return params_; }
    const KvStore& store() const { return *store_; }

    Bytes export_snapshot() const;

private:
    ServerPublicParams params_;
    std::unique_ptr<KvStore> store_;
    mutable std::unique_ptr<std::shared_mutex> mutex_;
};

}  // namespace ace
