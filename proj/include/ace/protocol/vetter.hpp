#pragma once

#include <optional>

#include "ace/protocol/keys.hpp"
#include "ace/protocol/messages.hpp"

namespace ace {

// Trusted query-token issuer: holds the search keys and a synchronized copy
// of the keyword-state map, never the index PRF keys or the permutation
// secret key. Single-writer.
class Vetter {
public:
    explicit Vetter(VetterKeyMaterial keys) : keys_(std::move(keys)) {}

    // Returns nothing when the keyword was never inserted; no server message
    // is needed in that case.
    std::optional<SearchToken> issue_search(ByteView keyword) const;

    // Decrypts a result set and de-duplicates. Throws IntegrityError naming
    // the offending entry if any ciphertext fails authentication.
    IdSet decrypt_results(ByteView keyword, const RSet& rset) const;

    // Applies a trustee keyword-state delta; deltas must arrive in issuance
    // order, otherwise a StalenessError is raised.
    void apply_delta(const WDelta& delta);

    const KeywordStateMap& keyword_states() const { return w_; }
    uint64_t applied_seq() const { return applied_seq_; }
    const VetterKeyMaterial& keys() const { return keys_; }

    Bytes export_snapshot() const;
    static Vetter import_snapshot(ByteView snapshot);

private:
    VetterKeyMaterial keys_;
    KeywordStateMap w_;
    uint64_t applied_seq_ = 0;
};

}  // namespace ace
