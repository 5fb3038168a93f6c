#include "ace/lab/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <vector>

#include "ace/errors.hpp"
#include "ace/protocol/setup.hpp"
#include "ace/storage/snapshot.hpp"
#include "ace/wire/codec.hpp"
#include "ace/wire/csv.hpp"

namespace ace {

namespace {

using Clock = std::chrono::steady_clock;

uint64_t ns_since(Clock::time_point start) {
    return static_cast<uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
}

struct Row {
    std::string scenario;
    uint64_t param;
    std::vector<uint64_t> samples_ns;
    uint64_t bytes;
};

void emit(std::ostream& out, const Row& row) {
    std::vector<uint64_t> sorted = row.samples_ns;
    std::sort(sorted.begin(), sorted.end());
    uint64_t mean = 0;
    for (uint64_t s : sorted) mean += s;
    if (!sorted.empty()) mean /= sorted.size();
    uint64_t p95 = sorted.empty()
                       ? 0
                       : sorted[std::min(sorted.size() - 1, (sorted.size() * 95) / 100)];
    out << row.scenario << "," << row.param << "," << sorted.size() << "," << mean << "," << p95
        << "," << row.bytes << "\n";
}

uint64_t scaled(uint64_t value, double scale) {
    return std::max<uint64_t>(1, static_cast<uint64_t>(std::llround(value * scale)));
}

Deployment make_deployment(const BenchOptions& options, uint64_t salt) {
    Trustee::Config config;
    config.perm_modulus_bits = options.perm_modulus_bits;
    config.add_workers = options.add_workers;
    return setup(config, std::make_unique<DeterministicRandom>(options.seed ^ salt));
}

std::vector<AddRecord> ids_with_fresh_keywords(uint64_t ids, uint64_t keywords, uint64_t tag) {
    std::vector<AddRecord> records;
    for (uint64_t i = 0; i < ids; ++i) {
        AddRecord rec;
        rec.id = to_bytes("BID" + std::to_string(tag) + "_" + std::to_string(i));
        for (uint64_t k = 0; k < keywords; ++k) {
            rec.keywords.insert(
                to_bytes("bkw" + std::to_string(tag) + "_" + std::to_string(k)));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void bench_add(const BenchOptions& options, std::ostream& out) {
    Deployment dep = make_deployment(options, 0xADD);
    for (uint64_t x = 100; x <= 1000; x += 100) {
        uint64_t keywords = scaled(x, options.scale);
        auto records = ids_with_fresh_keywords(2, keywords, x);
        auto t0 = Clock::now();
        auto [batch, delta] = dep.trustee.add_batch(records);
        dep.server.apply_add(batch);
        uint64_t elapsed = ns_since(t0);
        dep.vetter.apply_delta(delta);
        emit(out, {"add", keywords, {elapsed}, encode_add_batch(batch).size()});
    }
}

void bench_revoke(const BenchOptions& options, std::ostream& out) {
    Deployment dep = make_deployment(options, 0xDE1);
    const int reps = 3;
    for (uint64_t x : {1ULL, 10ULL, 100ULL, 1000ULL}) {
        uint64_t keywords = scaled(x, options.scale);
        Row row{"revoke", keywords, {}, 0};
        for (int rep = 0; rep < reps; ++rep) {
            auto records =
                ids_with_fresh_keywords(1, keywords, x * 10 + static_cast<uint64_t>(rep));
            records[0].id = to_bytes("RVK" + std::to_string(x) + "_" + std::to_string(rep));
            auto [batch, delta] = dep.trustee.add_batch(records);
            dep.server.apply_add(batch);

            DeleteToken token = dep.trustee.issue_delete(records[0].id);
            Bytes encoded = encode_delete_token(token);
            row.bytes = encoded.size();
            auto t0 = Clock::now();
            DeletionReport report = dep.server.apply_delete(token);
            row.samples_ns.push_back(ns_since(t0));
            if (report.removed != keywords) {
                throw Error("revocation removed an unexpected entry count");
            }
        }
        emit(out, row);
    }
}

void bench_search(const BenchOptions& options, std::ostream& out) {
    Deployment dep = make_deployment(options, 0x5EA);
    const int reps = 5;
    for (uint64_t alpha : {10ULL, 20ULL, 50ULL, 100ULL, 200ULL, 500ULL, 1000ULL, 2000ULL}) {
        uint64_t matches = scaled(alpha, options.scale);
        Bytes keyword = to_bytes("match_" + std::to_string(alpha));
        std::vector<AddRecord> records;
        for (uint64_t i = 0; i < matches; ++i) {
            records.push_back(
                {to_bytes("SID" + std::to_string(alpha) + "_" + std::to_string(i)), {keyword}});
        }
        auto [batch, delta] = dep.trustee.add_batch(records);
        dep.server.apply_add(batch);
        dep.vetter.apply_delta(delta);

        auto token = dep.vetter.issue_search(keyword);
        Row row{"search", matches, {}, 0};
        for (int rep = 0; rep < reps; ++rep) {
            auto t0 = Clock::now();
            Server::SearchOutcome outcome = dep.server.search(*token);
            row.samples_ns.push_back(ns_since(t0));
            if (outcome.results.size() != matches) {
                throw Error("search returned an unexpected match count");
            }
            if (rep == 0) {
                row.bytes = encode_search_token(*token).size() +
                            encode_rset(outcome.results).size();
            }
        }
        emit(out, row);
    }
}

void bench_storage(const BenchOptions& options, std::ostream& out) {
    Deployment dep = make_deployment(options, 0x570);
    uint64_t ids = scaled(1000, options.scale);
    uint64_t previous_keywords = 0;
    for (uint64_t x : {500ULL, 1000ULL}) {
        uint64_t keywords = scaled(x, options.scale);
        // Extend every identifier's keyword set to the next size; chains do
        // not care about batch boundaries, so the result matches a fresh
        // build of the same shape.
        auto t0 = Clock::now();
        SyntheticSpec spec;
        spec.ids = ids;
        spec.keywords_per_id = keywords - previous_keywords;
        spec.vocabulary = 2 * (keywords - previous_keywords);
        spec.seed = options.seed ^ x;
        std::vector<AddRecord> records = synthetic_records(spec);
        for (auto& rec : records) {
            std::set<Bytes> shifted;
            for (const Bytes& kw : rec.keywords) {
                Bytes tagged = to_bytes("x" + std::to_string(x) + "_");
                tagged.insert(tagged.end(), kw.begin(), kw.end());
                shifted.insert(std::move(tagged));
            }
            rec.keywords = std::move(shifted);
        }
        // Chunked insertion keeps batch memory bounded.
        const size_t chunk = 100;
        for (size_t start = 0; start < records.size(); start += chunk) {
            std::vector<AddRecord> slice(
                records.begin() + static_cast<std::ptrdiff_t>(start),
                records.begin() +
                    static_cast<std::ptrdiff_t>(std::min(records.size(), start + chunk)));
            auto [batch, delta] = dep.trustee.add_batch(slice);
            dep.server.apply_add(batch);
            dep.vetter.apply_delta(delta);
        }
        uint64_t elapsed = ns_since(t0);
        previous_keywords = keywords;

        StorageMetrics metrics = storage_metrics(dep.server.store());
        emit(out, {"storage_fset", keywords, {elapsed}, metrics.fset_bytes});
        emit(out, {"storage_iset", keywords, {0}, metrics.iset_bytes});

        // Keyword-state map size on the vetter side.
        MemoryStore wstore;
        std::vector<Mutation> mutations;
        for (const auto& [kw, state] : dep.vetter.keyword_states()) {
            Bytes value(state.st.be.begin(), state.st.be.end());
            append_u64_be(state.count, value);
            mutations.push_back(Mutation::put(Namespace::wmap, kw, value));
        }
        wstore.apply_atomic(mutations);
        emit(out, {"storage_wmap", keywords, {0}, storage_metrics(wstore).wmap_bytes});
    }
}

}  // namespace

void bench_scenarios(const std::string& scenario, const BenchOptions& options,
                     std::ostream& csv_out) {
    csv_out << "scenario,param,repetitions,mean_ns,p95_ns,bytes\n";
    bool all = scenario == "all";
    bool known = all;
    if (scenario == "add" || all) {
        bench_add(options, csv_out);
        known = true;
    }
    if (scenario == "revoke" || all) {
        bench_revoke(options, csv_out);
        known = true;
    }
    if (scenario == "search" || all) {
        bench_search(options, csv_out);
        known = true;
    }
    if (scenario == "storage" || all) {
        bench_storage(options, csv_out);
        known = true;
    }
    if (!known) {
        throw Error("unknown bench scenario: " + scenario +
                    " (expected add, revoke, search, storage or all)");
    }
}

}  // namespace ace
