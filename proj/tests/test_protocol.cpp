#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <thread>

#include "ace/crypto/counters.hpp"
#include "ace/crypto/keyed_hash.hpp"
#include "ace/crypto/prf.hpp"
#include "ace/errors.hpp"
#include "ace/protocol/setup.hpp"
#include "ace/storage/snapshot.hpp"

using namespace ace;

namespace {

Bytes b(std::string_view s) { return to_bytes(s); }

// One 2048-bit key generation for the whole suite; each test re-imports the
// trustee snapshot and gets a fresh vetter and server.
Deployment make_deployment(uint64_t seed, size_t workers = 1) {
    static const Bytes trustee_snapshot = [] {
        Trustee::Config config;
        config.add_workers = 1;
        Trustee t = Trustee::create(config, std::make_unique<DeterministicRandom>(0xACE0ULL));
        return t.export_snapshot();
    }();
    Trustee trustee = Trustee::import_snapshot(trustee_snapshot, workers,
                                               std::make_unique<DeterministicRandom>(seed));
    Vetter vetter(trustee.vetter_key_material());
    Server server(trustee.server_public_params(), std::make_unique<MemoryStore>());
    return Deployment{std::move(trustee), std::move(vetter), std::move(server)};
}

std::vector<AddRecord> table2_records() {
    return {
        {b("ID1"), {b("w1"), b("w2")}},
        {b("ID2"), {b("w1"), b("w3")}},
        {b("ID3"), {b("w1"), b("w3")}},
    };
}

void add_and_sync(Deployment& dep, const std::vector<AddRecord>& records) {
    auto [batch, delta] = dep.trustee.add_batch(records);
    dep.server.apply_add(batch);
    dep.vetter.apply_delta(delta);
}

IdSet run_search(const Deployment& dep, std::string_view keyword) {
    auto token = dep.vetter.issue_search(b(keyword));
    if (!token) return {};
    auto outcome = dep.server.search(*token);
    return dep.vetter.decrypt_results(b(keyword), outcome.results);
}

uint64_t total_fset_deltas(const Server& server) {
    uint64_t total = 0;
    server.store().scan(Namespace::fset, [&](ByteView, ByteView value) {
        total += list_value_parse(value).size();
    });
    return total;
}

}  // namespace

TEST_CASE("setup produces empty index and disjoint keys") {
    Trustee::Config config;
    config.perm_modulus_bits = 1024;  // keygen speed; key roles unaffected
    config.add_workers = 1;
    Deployment a = setup(config, std::make_unique<DeterministicRandom>(1));
    Deployment bdep = setup(config, std::make_unique<DeterministicRandom>(2));

    CHECK(a.server.iset_size() == 0);
    CHECK(a.server.fset_rows() == 0);
    CHECK(a.trustee.keyword_states().empty());

    CHECK_FALSE(a.trustee.keys().k_s == bdep.trustee.keys().k_s);
    CHECK_FALSE(a.trustee.keys().k_1 == bdep.trustee.keys().k_1);
    CHECK_FALSE(a.trustee.keys().k_t == bdep.trustee.keys().k_t);
    CHECK_FALSE(a.trustee.keys().k_2 == bdep.trustee.keys().k_2);
    CHECK_FALSE(a.trustee.keys().k_h == bdep.trustee.keys().k_h);
    CHECK(a.trustee.keys().perm_sk.modulus_be() != bdep.trustee.keys().perm_sk.modulus_be());

    CHECK_THROWS_AS(setup(Trustee::Config{.security_bits = 64},
                          std::make_unique<DeterministicRandom>(3)),
                    ProtocolError);
}

TEST_CASE("role projections exclude secret material") {
    Deployment dep = make_deployment(4);
    add_and_sync(dep, table2_records());

    // Pull the individual secret fields out of the trustee's own export.
    const TrusteeKeyMaterial& keys = dep.trustee.keys();
    Bytes sk_blob = keys.perm_sk.serialize();
    size_t off = 0;
    read_sized(sk_blob, off, kPermDomainBytes, "n");
    read_sized(sk_blob, off, kPermDomainBytes, "e");
    Bytes private_exponent = read_sized(sk_blob, off, kPermDomainBytes, "d");
    Bytes prime1 = read_sized(sk_blob, off, kPermDomainBytes, "p");

    Bytes vetter_state = dep.vetter.export_snapshot();
    Bytes server_state = dep.server.export_snapshot();

    for (const Bytes* state : {&vetter_state, &server_state}) {
        CHECK_FALSE(contains_bytes(*state, keys.k_1.bytes()));
        CHECK_FALSE(contains_bytes(*state, keys.k_2.bytes()));
        CHECK_FALSE(contains_bytes(*state, private_exponent));
        CHECK_FALSE(contains_bytes(*state, prime1));
    }
    // The server additionally never sees the search keys.
    CHECK_FALSE(contains_bytes(server_state, keys.k_s.bytes()));
    CHECK_FALSE(contains_bytes(server_state, keys.k_t.bytes()));

    // The vetter legitimately holds the search keys.
    CHECK(contains_bytes(vetter_state, keys.k_s.bytes()));
    CHECK(contains_bytes(vetter_state, keys.k_t.bytes()));
}

TEST_CASE("worked three-identifier example") {
    Deployment dep = make_deployment(5);
    auto [batch, delta] = dep.trustee.add_batch(table2_records());

    CHECK(batch.iset_inserts.size() == 6);
    CHECK(batch.fset_appends.size() == 6);

    dep.server.apply_add(batch);
    dep.vetter.apply_delta(delta);

    CHECK(dep.server.fset_rows() == 3);
    CHECK(dep.server.iset_size() == 6);
    dep.server.store().scan(Namespace::fset, [&](ByteView, ByteView value) {
        CHECK(list_value_parse(value).size() == 2);
    });

    CHECK(dep.trustee.keyword_states().at(b("w1")).count == 3);
    CHECK(dep.trustee.keyword_states().at(b("w2")).count == 1);
    CHECK(dep.trustee.keyword_states().at(b("w3")).count == 2);
    CHECK(dep.vetter.keyword_states() == std::map(dep.trustee.keyword_states()));

    auto token_w1 = dep.vetter.issue_search(b("w1"));
    REQUIRE(token_w1.has_value());
    CHECK(token_w1->count == 3);

    CHECK(run_search(dep, "w1") == IdSet{b("ID1"), b("ID2"), b("ID3")});
    CHECK(run_search(dep, "w2") == IdSet{b("ID1")});
    CHECK(run_search(dep, "w3") == IdSet{b("ID2"), b("ID3")});

    // Revoke ID2 and observe physical removal.
    DeleteToken revoke = dep.trustee.issue_delete(b("ID2"));
    DeletionReport report = dep.server.apply_delete(revoke);
    CHECK(report.removed == 2);
    CHECK(dep.server.iset_size() == 4);
    CHECK(dep.server.fset_rows() == 2);

    CHECK(run_search(dep, "w1") == IdSet{b("ID1"), b("ID3")});
    CHECK(run_search(dep, "w3") == IdSet{b("ID3")});

    // Index-count conservation: one live index entry per stored delta.
    CHECK(total_fset_deltas(dep.server) == dep.server.iset_size());
}

TEST_CASE("empty batch changes nothing") {
    Deployment dep = make_deployment(6);
    auto [batch, delta] = dep.trustee.add_batch({});
    CHECK(batch.empty());
    CHECK(delta.entries.empty());
    CHECK(dep.trustee.keyword_states().empty());
    dep.server.apply_add(batch);
    CHECK(dep.server.iset_size() == 0);
}

TEST_CASE("record validation") {
    Deployment dep = make_deployment(7);
    CHECK_THROWS_AS(dep.trustee.add_batch({{b(""), {b("w1")}}}), ProtocolError);
    CHECK_THROWS_AS(dep.trustee.add_batch({{b("ID1"), {}}}), ProtocolError);
    CHECK_THROWS_AS(dep.trustee.add_batch({{b("ID1"), {b("")}}}), ProtocolError);
}

TEST_CASE("duplicate records within one batch collapse") {
    Deployment dep = make_deployment(8);
    auto [batch, delta] =
        dep.trustee.add_batch({{b("ID1"), {b("w1")}}, {b("ID1"), {b("w1"), b("w2")}}});
    CHECK(batch.iset_inserts.size() == 2);  // (ID1,w1) and (ID1,w2)
    dep.server.apply_add(batch);
    dep.vetter.apply_delta(delta);
    CHECK(run_search(dep, "w1") == IdSet{b("ID1")});
}

TEST_CASE("re-inserting a pair across batches duplicates the slot") {
    Deployment dep = make_deployment(9);
    add_and_sync(dep, {{b("ID1"), {b("w1")}}});
    add_and_sync(dep, {{b("ID1"), {b("w1")}}});

    CHECK(dep.trustee.keyword_states().at(b("w1")).count == 2);
    CHECK(dep.server.iset_size() == 2);
    // The vetter de-duplicates at decryption time.
    CHECK(run_search(dep, "w1") == IdSet{b("ID1")});

    // Deletion removes both slots from the row.
    DeletionReport report = dep.server.apply_delete(dep.trustee.issue_delete(b("ID1")));
    CHECK(report.removed == 2);
    CHECK(dep.server.iset_size() == 0);
}

TEST_CASE("replaying a batch trips the duplicate-index fault") {
    Deployment dep = make_deployment(10);
    auto [batch, delta] = dep.trustee.add_batch(table2_records());
    dep.server.apply_add(batch);
    CHECK_THROWS_AS(dep.server.apply_add(batch), DuplicateIndexFault);
    // Nothing was partially applied by the failed replay.
    CHECK(dep.server.iset_size() == 6);
}

TEST_CASE("deletion is idempotent and total for unknown identifiers") {
    Deployment dep = make_deployment(11);
    add_and_sync(dep, table2_records());

    DeletionReport unknown = dep.server.apply_delete(dep.trustee.issue_delete(b("ghost")));
    CHECK(unknown.removed == 0);
    CHECK(dep.server.iset_size() == 6);

    dep.server.apply_delete(dep.trustee.issue_delete(b("ID1")));
    DeletionReport again = dep.server.apply_delete(dep.trustee.issue_delete(b("ID1")));
    CHECK(again.removed == 0);

    // Tokens are deterministic.
    DeleteToken t1 = dep.trustee.issue_delete(b("ID3"));
    DeleteToken t2 = dep.trustee.issue_delete(b("ID3"));
    CHECK(t1.row_key == t2.row_key);
    CHECK(t1.tag_id == t2.tag_id);
}

TEST_CASE("search walks dead slots without shrinking the chain") {
    Deployment dep = make_deployment(12);
    add_and_sync(dep, table2_records());
    dep.server.apply_delete(dep.trustee.issue_delete(b("ID2")));

    // Counters never decrement on deletion.
    CHECK(dep.trustee.keyword_states().at(b("w1")).count == 3);

    auto token = dep.vetter.issue_search(b("w1"));
    REQUIRE(token.has_value());
    auto outcome = dep.server.search(*token);
    CHECK(outcome.iterations == 3);
    CHECK(outcome.skipped == 1);
    CHECK(outcome.results.size() == 2);

    // Re-adding the identifier resumes from the existing counter.
    add_and_sync(dep, {{b("ID2"), {b("w1"), b("w3")}}});
    CHECK(dep.trustee.keyword_states().at(b("w1")).count == 4);
    auto outcome2 = dep.server.search(*dep.vetter.issue_search(b("w1")));
    CHECK(outcome2.iterations == 4);
    CHECK(outcome2.skipped == 1);
    CHECK(run_search(dep, "w1") == IdSet{b("ID1"), b("ID2"), b("ID3")});
}

TEST_CASE("search for an unknown keyword needs no server contact") {
    Deployment dep = make_deployment(13);
    add_and_sync(dep, table2_records());
    CHECK_FALSE(dep.vetter.issue_search(b("nope")).has_value());
    CHECK(run_search(dep, "nope").empty());
}

TEST_CASE("search token with counter one on an empty index") {
    Deployment dep = make_deployment(14);
    add_and_sync(dep, {{b("ID1"), {b("w1")}}});
    auto token = dep.vetter.issue_search(b("w1"));
    REQUIRE(token.has_value());
    CHECK(token->count == 1);

    dep.server.apply_delete(dep.trustee.issue_delete(b("ID1")));
    auto outcome = dep.server.search(*token);
    CHECK(outcome.results.empty());
    CHECK(outcome.iterations == 1);
    CHECK(outcome.skipped == 1);
}

TEST_CASE("malformed tokens raise protocol errors") {
    Deployment dep = make_deployment(15);
    add_and_sync(dep, {{b("ID1"), {b("w1")}}});
    auto token = dep.vetter.issue_search(b("w1"));
    REQUIRE(token.has_value());

    SearchToken zero_count = *token;
    zero_count.count = 0;
    CHECK_THROWS_AS(dep.server.search(zero_count), ProtocolError);

    SearchToken out_of_domain = *token;
    out_of_domain.st.be.assign(kPermDomainBytes, 0xFF);
    CHECK_THROWS_AS(dep.server.search(out_of_domain), ProtocolError);
}

TEST_CASE("result decryption authenticates every entry") {
    Deployment dep = make_deployment(16);
    add_and_sync(dep, table2_records());

    auto w1 = dep.server.search(*dep.vetter.issue_search(b("w1")));
    auto w2 = dep.server.search(*dep.vetter.issue_search(b("w2")));

    // A ciphertext produced under the w2 key cannot pass a w1 decryption.
    RSet mixed = w1.results;
    mixed.push_back(w2.results.at(0));
    CHECK_THROWS_AS(dep.vetter.decrypt_results(b("w1"), mixed), IntegrityError);

    CHECK(dep.vetter.decrypt_results(b("w1"), {}).empty());
}

TEST_CASE("keyword-state deltas apply strictly in order") {
    Deployment dep = make_deployment(17);
    auto [batch1, delta1] = dep.trustee.add_batch({{b("ID1"), {b("w1")}}});
    auto [batch2, delta2] = dep.trustee.add_batch({{b("ID2"), {b("w1")}}});
    dep.server.apply_add(batch1);
    dep.server.apply_add(batch2);

    CHECK_THROWS_AS(dep.vetter.apply_delta(delta2), StalenessError);
    dep.vetter.apply_delta(delta1);
    dep.vetter.apply_delta(delta2);
    CHECK_THROWS_AS(dep.vetter.apply_delta(delta2), StalenessError);
    CHECK(dep.vetter.keyword_states().at(b("w1")).count == 2);

    WDelta empty;
    empty.seq = dep.vetter.applied_seq() + 1;
    dep.vetter.apply_delta(empty);
    CHECK(dep.vetter.keyword_states().at(b("w1")).count == 2);
}

TEST_CASE("chain consistency is recoverable from the public permutation") {
    Deployment dep = make_deployment(18);
    add_and_sync(dep, {{b("ID1"), {b("w1")}}});

    // After the first insertion, walking forward once recovers the keyword's
    // starting point; record it.
    const TdpPublicKey pk = dep.trustee.keys().perm_sk.public_key();
    KeywordState first = dep.trustee.keyword_states().at(b("w1"));
    REQUIRE(first.count == 1);
    PermDomainValue st0 = pk.forward(first.st);

    add_and_sync(dep, {{b("ID2"), {b("w1")}}, {b("ID3"), {b("w1")}}});
    dep.server.apply_delete(dep.trustee.issue_delete(b("ID2")));
    add_and_sync(dep, {{b("ID4"), {b("w1")}}});

    KeywordState current = dep.trustee.keyword_states().at(b("w1"));
    CHECK(current.count == 4);
    PermDomainValue walked = current.st;
    for (uint64_t i = 0; i < current.count; ++i) walked = pk.forward(walked);
    CHECK(walked == st0);
}

TEST_CASE("zero-residue fault aborts a batch without state change") {
    // The brute-force group has order 1019, so roughly one insertion in a
    // thousand reduces to zero and must abort its whole batch.
    Trustee::Config config;
    config.perm_modulus_bits = 512;
    config.group = &tiny_group();
    config.add_workers = 1;
    Trustee trustee = Trustee::create(config, std::make_unique<DeterministicRandom>(99));

    std::vector<Bytes> keywords;
    for (int i = 0; i < 10; ++i) keywords.push_back(b("kw" + std::to_string(i)));

    bool faulted = false;
    for (int batch = 0; batch < 5000 && !faulted; ++batch) {
        AddRecord rec;
        rec.id = b("ID" + std::to_string(batch));
        rec.keywords.insert(keywords.begin(), keywords.end());

        KeywordStateMap before = trustee.keyword_states();
        uint64_t seq_before = trustee.delta_seq();
        try {
            trustee.add_batch({rec});
        } catch (const ZeroResidueFault&) {
            faulted = true;
            CHECK(trustee.keyword_states() == before);
            CHECK(trustee.delta_seq() == seq_before);
            // The trustee remains usable: the same record can be retried.
            CHECK_NOTHROW(trustee.issue_delete(rec.id));
        }
    }
    CHECK(faulted);
}

TEST_CASE("parallel batch production matches single-threaded output") {
    Deployment solo = make_deployment(20, 1);
    Deployment multi = make_deployment(20, 4);

    std::vector<AddRecord> records;
    for (int i = 0; i < 12; ++i) {
        AddRecord rec;
        rec.id = b("ID" + std::to_string(i));
        for (int k = 0; k < 7; ++k) {
            rec.keywords.insert(b("kw" + std::to_string((i + k) % 9)));
        }
        records.push_back(std::move(rec));
    }

    auto [batch_a, delta_a] = solo.trustee.add_batch(records);
    auto [batch_b, delta_b] = multi.trustee.add_batch(records);

    REQUIRE(batch_a.iset_inserts.size() == batch_b.iset_inserts.size());
    for (size_t i = 0; i < batch_a.iset_inserts.size(); ++i) {
        CHECK(batch_a.iset_inserts[i].index == batch_b.iset_inserts[i].index);
        CHECK(batch_a.iset_inserts[i].encrypted_id == batch_b.iset_inserts[i].encrypted_id);
        CHECK(batch_a.fset_appends[i].row_key == batch_b.fset_appends[i].row_key);
        CHECK(batch_a.fset_appends[i].delta == batch_b.fset_appends[i].delta);
    }
    REQUIRE(delta_a.entries.size() == delta_b.entries.size());
    for (size_t i = 0; i < delta_a.entries.size(); ++i) {
        CHECK(delta_a.entries[i].keyword == delta_b.entries[i].keyword);
        CHECK(delta_a.entries[i].st == delta_b.entries[i].st);
        CHECK(delta_a.entries[i].count == delta_b.entries[i].count);
    }
}

TEST_CASE("concurrent searches observe a stable index") {
    Deployment dep = make_deployment(21);
    std::vector<AddRecord> records;
    for (int i = 0; i < 20; ++i) {
        records.push_back({b("ID" + std::to_string(i)), {b("shared"), b("own" + std::to_string(i))}});
    }
    add_and_sync(dep, records);

    IdSet expected = run_search(dep, "shared");
    CHECK(expected.size() == 20);

    std::atomic<int> mismatches{0};
    auto reader = [&] {
        for (int i = 0; i < 25; ++i) {
            if (run_search(dep, "shared") != expected) mismatches.fetch_add(1);
        }
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) threads.emplace_back(reader);
    for (auto& t : threads) t.join();
    CHECK(mismatches.load() == 0);
}

TEST_CASE("every stored delta maps to exactly one live index entry") {
    // Key-holding harness check: walking FSet with each identifier's tag
    // must hit a distinct live ISet entry, and cover all of them.
    Deployment dep = make_deployment(24);
    add_and_sync(dep, table2_records());
    add_and_sync(dep, {{b("ID4"), {b("w1"), b("w4")}}});
    dep.server.apply_delete(dep.trustee.issue_delete(b("ID3")));

    const TrusteeKeyMaterial& keys = dep.trustee.keys();
    const PrimeOrderGroup& group = *keys.group;
    std::map<Bytes, Scalar> tag_by_row;
    for (const char* id : {"ID1", "ID2", "ID3", "ID4"}) {
        RowKey row = prf_bytes(keys.k_1, b(id));
        tag_by_row.emplace(Bytes(row.begin(), row.end()), prf_scalar(keys.k_2, b(id), group));
    }

    std::set<Bytes> seen_indices;
    dep.server.store().scan(Namespace::fset, [&](ByteView row_key, ByteView value) {
        auto tag = tag_by_row.find(Bytes(row_key.begin(), row_key.end()));
        REQUIRE(tag != tag_by_row.end());
        for (const Bytes& delta_bytes : list_value_parse(value)) {
            GroupElement delta = group.element_from_bytes(delta_bytes);
            HashOutput index = keyed_hash(keys.k_h, group.exp(delta, tag->second));
            CHECK(dep.server.store().get(Namespace::iset, index).has_value());
            CHECK(seen_indices.insert(Bytes(index.begin(), index.end())).second);
        }
    });
    CHECK(seen_indices.size() == dep.server.iset_size());
}

TEST_CASE("role state snapshots round-trip") {
    Deployment dep = make_deployment(22);
    add_and_sync(dep, table2_records());
    dep.server.apply_delete(dep.trustee.issue_delete(b("ID2")));

    Trustee trustee2 = Trustee::import_snapshot(dep.trustee.export_snapshot(), 1,
                                                std::make_unique<DeterministicRandom>(23));
    Vetter vetter2 = Vetter::import_snapshot(dep.vetter.export_snapshot());
    Server server2 = Server::attach(
        std::make_unique<MemoryStore>(snapshot_import(dep.server.export_snapshot())));

    Deployment dep2{std::move(trustee2), std::move(vetter2), std::move(server2)};
    CHECK(dep2.trustee.keyword_states() == std::map(dep.trustee.keyword_states()));
    CHECK(run_search(dep2, "w1") == IdSet{b("ID1"), b("ID3")});

    // The restored trustee continues the protocol seamlessly.
    add_and_sync(dep2, {{b("ID9"), {b("w1")}}});
    CHECK(run_search(dep2, "w1") == IdSet{b("ID1"), b("ID3"), b("ID9")});
}
