#pragma once

#include <cstdio>
#include <string>

#include "ace/storage/kv.hpp"

namespace ace {

// File-backed store with a write-ahead journal. Every apply_atomic appends
// one checksummed record and syncs it before touching the in-memory state,
// so a crash at any byte offset loses either a whole batch or nothing.
// Reopening replays complete records and discards a trailing torn one.
//
// Files: <path>.base (snapshot of last compaction) and <path>.journal.
class JournalStore final : public KvStore {
public:
    explicit JournalStore(const std::string& path);
    ~JournalStore() override;

    JournalStore(const JournalStore&) = delete;
    JournalStore& operator=(const JournalStore&) = delete;

    std::optional<Bytes> get(Namespace ns, ByteView key) const override;
    void apply_atomic(const std::vector<Mutation>& mutations) override;
    void scan(Namespace ns,
              const std::function<void(ByteView key, ByteView value)>& fn) const override;
    uint64_t count(Namespace ns) const override;

    // Folds the journal into a fresh base snapshot and truncates it.
    void compact();

    uint64_t recovered_batches() const { return recovered_; }

private:
    void open_journal_for_append();

    MemoryStore memory_;
    std::string base_path_;
    std::string journal_path_;
    FILE* journal_ = nullptr;
    uint64_t recovered_ = 0;
};

// Record payload codec, exposed for the fault-injection tests.
Bytes encode_mutations(const std::vector<Mutation>& mutations);
std::vector<Mutation> decode_mutations(ByteView payload);

}  // namespace ace
