#include "ace/lab/workload.hpp"

#include <chrono>
#include <map>

#include "ace/crypto/prf.hpp"
#include "ace/lab/oracle.hpp"
#include "ace/protocol/setup.hpp"
#include "ace/wire/codec.hpp"

namespace ace {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Everything a key-holding harness can later derive for one inserted pair;
// used for the byte-absence scans after revocation.
struct RowLedger {
    Bytes row_key;
    std::vector<Bytes> patterns;  // index keys and delta encodings
};

}  // namespace

WorkloadReport run_workload(const WorkloadConfig& config) {
    WorkloadReport report;
    DeterministicRandom rng(config.seed);

    Trustee::Config tc;
    tc.perm_modulus_bits = config.perm_modulus_bits;
    tc.add_workers = config.add_workers;
    Deployment dep = setup(tc, std::make_unique<DeterministicRandom>(config.seed ^ 0x5EEDULL));
    PlainDatabase oracle;
    report.perm_public_key = dep.server.params().perm_pk.serialize();

    // Fixed universes. Identifiers and keywords are at least 8 bytes so the
    // pseudorandomness smoke test is meaningful.
    std::vector<Bytes> ids;
    for (uint64_t i = 0; i < config.id_universe; ++i) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "WID%07llu", static_cast<unsigned long long>(i));
        ids.push_back(to_bytes(buf));
    }
    std::vector<Bytes> keywords;
    for (uint64_t k = 0; k < config.keyword_universe; ++k) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "snp_rs%07llu:AA", static_cast<unsigned long long>(k));
        keywords.push_back(to_bytes(buf));
    }
    report.plaintext_corpus = ids;
    report.plaintext_corpus.insert(report.plaintext_corpus.end(), keywords.begin(),
                                   keywords.end());

    // Shuffled operation schedule.
    enum class Op : uint8_t { add, revoke, search };
    std::vector<Op> schedule;
    schedule.insert(schedule.end(), config.batch_adds, Op::add);
    schedule.insert(schedule.end(), config.revocations, Op::revoke);
    schedule.insert(schedule.end(), config.searches, Op::search);
    for (size_t i = schedule.size(); i > 1; --i) {
        std::swap(schedule[i - 1], schedule[rng.uniform(i)]);
    }

    std::map<Bytes, RowLedger> ledger;  // live id -> derivable byte patterns
    auto fail = [&](uint64_t& counter, const std::string& what) {
        counter += 1;
        if (report.details.size() < 50) report.details.push_back(what);
    };

    double protocol_seconds = 0;
    double scan_seconds = 0;

    for (size_t step = 0; step < schedule.size(); ++step) {
        switch (schedule[step]) {
            case Op::add: {
                uint64_t batch_ids = 1 + rng.uniform(config.max_ids_per_batch);
                std::vector<AddRecord> records;
                for (uint64_t i = 0; i < batch_ids; ++i) {
                    AddRecord rec;
                    rec.id = ids[rng.uniform(ids.size())];
                    uint64_t kw_count = 1 + rng.uniform(config.max_keywords_per_id);
                    while (rec.keywords.size() < kw_count) {
                        rec.keywords.insert(keywords[rng.uniform(keywords.size())]);
                    }
                    records.push_back(std::move(rec));
                }
                auto t0 = Clock::now();
                auto [batch, delta] = dep.trustee.add_batch(records);
                dep.server.apply_add(batch);
                dep.vetter.apply_delta(delta);
                protocol_seconds += seconds_since(t0);

                oracle.apply_add(records);
                report.adds_applied += 1;
                report.pairs_inserted += batch.iset_inserts.size();

                // Ledger: pair i of the batch belongs to the row key of its
                // matching delta append.
                for (size_t i = 0; i < batch.fset_appends.size(); ++i) {
                    Bytes row(batch.fset_appends[i].row_key.begin(),
                              batch.fset_appends[i].row_key.end());
                    RowLedger& entry = ledger[row];
                    entry.row_key = row;
                    entry.patterns.emplace_back(batch.iset_inserts[i].index.begin(),
                                                batch.iset_inserts[i].index.end());
                    entry.patterns.push_back(batch.fset_appends[i].delta.data);
                }
                if (config.record_transcript) {
                    report.transcript.record_add(encode_add_batch(batch));
                }
                break;
            }
            case Op::revoke: {
                // Mostly revoke live identifiers; occasionally an unknown one
                // to exercise the idempotent path.
                Bytes id;
                if (!oracle.entries().empty() && rng.uniform(10) != 0) {
                    uint64_t pick = rng.uniform(oracle.entries().size());
                    auto it = oracle.entries().begin();
                    std::advance(it, static_cast<std::ptrdiff_t>(pick));
                    id = it->first;
                } else {
                    id = to_bytes("GHOST" + std::to_string(rng.uniform(1000)));
                }
                auto t0 = Clock::now();
                DeleteToken token = dep.trustee.issue_delete(id);
                DeletionReport del = dep.server.apply_delete(token);
                protocol_seconds += seconds_since(t0);

                bool was_live = oracle.contains(id);
                oracle.revoke(id);
                report.revocations_applied += 1;
                report.entries_removed += del.removed;
                if (!was_live && del.removed != 0) {
                    fail(report.structural_failures, "removal reported for unknown identifier");
                }
                if (config.record_transcript) {
                    report.transcript.record_delete(encode_delete_token(token), del.removed);
                }

                if (config.scan_snapshots_after_revoke) {
                    auto s0 = Clock::now();
                    Bytes snapshot = dep.server.export_snapshot();
                    Bytes row_key(token.row_key.begin(), token.row_key.end());
                    report.snapshot_scans += 1;
                    if (contains_bytes(snapshot, row_key)) {
                        fail(report.scan_violations, "row key bytes survive revocation");
                    }
                    auto row_entry = ledger.find(row_key);
                    if (row_entry != ledger.end()) {
                        for (const Bytes& pattern : row_entry->second.patterns) {
                            if (contains_bytes(snapshot, pattern)) {
                                fail(report.scan_violations,
                                     "derived entry bytes survive revocation");
                            }
                        }
                        ledger.erase(row_entry);
                    }
                    scan_seconds += seconds_since(s0);
                }
                break;
            }
            case Op::search: {
                const Bytes& kw = keywords[rng.uniform(keywords.size())];
                auto t0 = Clock::now();
                auto token = dep.vetter.issue_search(kw);
                IdSet got;
                uint64_t hits = 0;
                if (token) {
                    Server::SearchOutcome outcome = dep.server.search(*token);
                    hits = outcome.results.size();
                    got = dep.vetter.decrypt_results(kw, outcome.results);
                    report.slots_skipped += outcome.skipped;
                    if (outcome.iterations != token->count) {
                        fail(report.structural_failures, "iterations differ from chain counter");
                    }
                    if (outcome.skipped != token->count - hits) {
                        fail(report.structural_failures, "skip accounting broken");
                    }
                    if (config.record_transcript) {
                        report.transcript.record_search(encode_search_token(*token), hits);
                    }
                }
                protocol_seconds += seconds_since(t0);

                IdSet expected = oracle.search(kw);
                report.searches_checked += 1;
                if (got != expected) {
                    fail(report.divergences,
                         "search divergence on keyword " + to_string(kw) + ": got " +
                             std::to_string(got.size()) + ", expected " +
                             std::to_string(expected.size()));
                }
                break;
            }
        }
    }

    report.protocol_seconds = protocol_seconds;
    report.scan_seconds = scan_seconds;
    return report;
}

}  // namespace ace
