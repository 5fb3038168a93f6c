#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ace/crypto/group.hpp"
#include "ace/crypto/tdp.hpp"

namespace ace {

// Server-boundary observation log. Each event stores the full wire message
// the server received (nothing else is observable) plus a logical timestamp
// and the size of the server's visible response.
struct TranscriptEvent {
    enum class Kind : uint8_t { add = 1, del = 2, search = 3 };

    uint64_t timestamp = 0;
    Kind kind = Kind::add;
    Bytes payload;                // encoded wire message crossing to the server
    uint64_t response_count = 0;  // search: results returned; del: entries removed
};

class TranscriptRecorder {
public:
    void record_add(Bytes encoded_batch);
    void record_delete(Bytes encoded_token, uint64_t removed);
    void record_search(Bytes encoded_token, uint64_t results);

    const std::vector<TranscriptEvent>& events() const { return events_; }
    uint64_t next_timestamp() const { return next_; }

    Bytes serialize() const;
    static TranscriptRecorder deserialize(ByteView data);

private:
    std::vector<TranscriptEvent> events_;
    uint64_t next_ = 1;
};

// Structural audit over a transcript: per-batch insertion counts, add/delete
// timestamp pairings, search-pattern groups by token equality, skipped-slot
// counts, and size bounds (delete messages constant-size, add messages
// exactly their entry payloads, search messages exactly token-size). Any
// violation lands in findings; informational measurements land in lines.
struct AuditReport {
    std::vector<std::string> findings;
    std::vector<std::string> lines;

    bool ok() const { return findings.empty(); }
    std::string to_text() const;
};

AuditReport audit_transcript(const std::vector<TranscriptEvent>& events,
                             const PrimeOrderGroup& group, const TdpPublicKey& perm_pk,
                             const std::vector<Bytes>& plaintext_corpus = {});

}  // namespace ace
