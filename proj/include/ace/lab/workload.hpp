#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ace/lab/transcript.hpp"

namespace ace {

// Seeded interleaved workload: batch insertions, revocations and searches
// against both the encrypted deployment and the cleartext oracle, checking
// result equivalence after every search and (optionally) byte-level
// deletion completeness after every revocation.
struct WorkloadConfig {
    uint64_t seed = 1;
    uint64_t id_universe = 500;
    uint64_t max_keywords_per_id = 50;
    uint64_t keyword_universe = 200;
    uint64_t batch_adds = 200;
    uint64_t revocations = 50;
    uint64_t searches = 300;
    uint64_t max_ids_per_batch = 5;
    size_t add_workers = 0;
    unsigned perm_modulus_bits = 2048;
    bool scan_snapshots_after_revoke = false;
    bool record_transcript = false;
};

struct WorkloadReport {
    uint64_t adds_applied = 0;
    uint64_t pairs_inserted = 0;
    uint64_t revocations_applied = 0;
    uint64_t entries_removed = 0;
    uint64_t searches_checked = 0;
    uint64_t slots_skipped = 0;
    uint64_t divergences = 0;
    uint64_t structural_failures = 0;  // iteration/skip accounting mismatches
    uint64_t snapshot_scans = 0;
    uint64_t scan_violations = 0;
    double protocol_seconds = 0;  // excludes snapshot export and scanning
    double scan_seconds = 0;
    std::vector<std::string> details;  // one line per failure, empty when clean

    TranscriptRecorder transcript;             // populated when recording
    std::vector<Bytes> plaintext_corpus;       // ids and keywords used
    Bytes perm_public_key;                     // serialized, for transcript audits

    bool clean() const {
        return divergences == 0 && structural_failures == 0 && scan_violations == 0;
    }
};

WorkloadReport run_workload(const WorkloadConfig& config);

}  // namespace ace
