#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ace/crypto/random.hpp"
#include "ace/errors.hpp"
#include "ace/wire/codec.hpp"
#include "ace/wire/csv.hpp"

using namespace ace;

namespace {

Bytes b(std::string_view s) { return to_bytes(s); }

const TdpSecretKey& wire_key() {
    static TdpSecretKey key = [] {
        DeterministicRandom rng(0x31415);
        return tdp_keygen(2048, rng);
    }();
    return key;
}

DeleteToken sample_delete_token(RandomSource& rng) {
    const PrimeOrderGroup& g = ristretto_group();
    RowKey row{};
    rng.fill(row.data(), row.size());
    return DeleteToken{g.random_scalar(rng), row};
}

SearchToken sample_search_token(RandomSource& rng) {
    const PrimeOrderGroup& g = ristretto_group();
    return SearchToken{g.exp_base(g.random_scalar(rng)),
                       tdp_sample_domain(wire_key().public_key(), rng), 1 + rng.uniform(1000)};
}

AddBatch sample_add_batch(RandomSource& rng, size_t entries) {
    const PrimeOrderGroup& g = ristretto_group();
    AddBatch batch;
    for (size_t i = 0; i < entries; ++i) {
        IndexKey index{};
        rng.fill(index.data(), index.size());
        batch.iset_inserts.push_back({index, rng.bytes(20 + rng.uniform(20))});
        RowKey row{};
        rng.fill(row.data(), row.size());
        batch.fset_appends.push_back({row, g.random_element(rng)});
    }
    return batch;
}

void check_every_mutation_rejected(const Bytes& message, const std::function<void(ByteView)>& decode) {
    for (size_t i = 0; i < message.size(); ++i) {
        Bytes bad = message;
        bad[i] ^= 0x01;
        CHECK_THROWS_AS(decode(bad), CodecError);
    }
}

}  // namespace

TEST_CASE("delete token encoding is constant size") {
    DeterministicRandom rng(1);
    const PrimeOrderGroup& g = ristretto_group();

    DeleteToken token = sample_delete_token(rng);
    Bytes encoded = encode_delete_token(token);
    CHECK(encoded.size() == kWireOverheadBytes + kDeleteTokenBodyBytes);
    CHECK(kDeleteTokenBodyBytes == 48);

    DeleteToken decoded = decode_delete_token(encoded, g);
    CHECK(decoded.tag_id == token.tag_id);
    CHECK(decoded.row_key == token.row_key);

    // Token size never varies: one hundred random tokens, one length.
    for (int i = 0; i < 100; ++i) {
        CHECK(encode_delete_token(sample_delete_token(rng)).size() == encoded.size());
    }
}

TEST_CASE("search token encoding round-trips") {
    DeterministicRandom rng(2);
    const PrimeOrderGroup& g = ristretto_group();
    TdpPublicKey pk = wire_key().public_key();

    SearchToken token = sample_search_token(rng);
    Bytes encoded = encode_search_token(token);
    CHECK(encoded.size() == kWireOverheadBytes + g.element_width() + kPermDomainBytes + 8);

    SearchToken decoded = decode_search_token(encoded, g, pk);
    CHECK(decoded.tk == token.tk);
    CHECK(decoded.st == token.st);
    CHECK(decoded.count == token.count);
}

TEST_CASE("add batch encoding round-trips") {
    DeterministicRandom rng(3);
    const PrimeOrderGroup& g = ristretto_group();

    AddBatch batch = sample_add_batch(rng, 5);
    AddBatch decoded = decode_add_batch(encode_add_batch(batch), g);
    REQUIRE(decoded.iset_inserts.size() == 5);
    REQUIRE(decoded.fset_appends.size() == 5);
    for (size_t i = 0; i < 5; ++i) {
        CHECK(decoded.iset_inserts[i].index == batch.iset_inserts[i].index);
        CHECK(decoded.iset_inserts[i].encrypted_id == batch.iset_inserts[i].encrypted_id);
        CHECK(decoded.fset_appends[i].row_key == batch.fset_appends[i].row_key);
        CHECK(decoded.fset_appends[i].delta == batch.fset_appends[i].delta);
    }

    // The zero-entry batch is a minimal valid message.
    AddBatch empty;
    Bytes encoded_empty = encode_add_batch(empty);
    CHECK(encoded_empty.size() == kWireOverheadBytes + 8);
    CHECK(decode_add_batch(encoded_empty, g).empty());
}

TEST_CASE("remaining message types round-trip") {
    DeterministicRandom rng(4);
    TdpPublicKey pk = wire_key().public_key();

    RSet rset = {b("ct-one"), b("ct-two"), Bytes{}};
    CHECK(decode_rset(encode_rset(rset)) == rset);
    CHECK(decode_rset(encode_rset({})).empty());

    WDelta delta;
    delta.seq = 7;
    delta.entries.push_back({b("kw-a"), tdp_sample_domain(pk, rng), 3});
    delta.entries.push_back({b("kw-b"), tdp_sample_domain(pk, rng), 12});
    WDelta decoded = decode_w_delta(encode_w_delta(delta), pk);
    CHECK(decoded.seq == 7);
    REQUIRE(decoded.entries.size() == 2);
    CHECK(decoded.entries[0].keyword == b("kw-a"));
    CHECK(decoded.entries[1].st == delta.entries[1].st);
    CHECK(decoded.entries[1].count == 12);

    DeletionReport report{41};
    CHECK(decode_deletion_report(encode_deletion_report(report)).removed == 41);
}

TEST_CASE("every single-byte mutation is rejected") {
    DeterministicRandom rng(5);
    const PrimeOrderGroup& g = ristretto_group();
    TdpPublicKey pk = wire_key().public_key();

    check_every_mutation_rejected(encode_delete_token(sample_delete_token(rng)),
                                  [&](ByteView m) { decode_delete_token(m, g); });
    check_every_mutation_rejected(encode_search_token(sample_search_token(rng)),
                                  [&](ByteView m) { decode_search_token(m, g, pk); });
    check_every_mutation_rejected(encode_add_batch(sample_add_batch(rng, 2)),
                                  [&](ByteView m) { decode_add_batch(m, g); });
    check_every_mutation_rejected(encode_rset({b("ct")}), [&](ByteView m) { decode_rset(m); });
    check_every_mutation_rejected(encode_deletion_report({5}),
                                  [&](ByteView m) { decode_deletion_report(m); });
}

TEST_CASE("framing failure modes") {
    DeterministicRandom rng(6);
    const PrimeOrderGroup& g = ristretto_group();
    Bytes good = encode_delete_token(sample_delete_token(rng));

    Bytes truncated(good.begin(), good.end() - 1);
    CHECK_THROWS_AS(wire_unframe(truncated), CodecError);

    Bytes bad_magic = good;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(wire_unframe(bad_magic), CodecError);

    Bytes short_frame(good.begin(), good.begin() + 10);
    CHECK_THROWS_AS(wire_unframe(short_frame), CodecError);

    // A frame of one type fed to another decoder is rejected.
    CHECK_THROWS_AS(decode_rset(good), CodecError);
    CHECK_THROWS_AS(decode_search_token(good, g, wire_key().public_key()), CodecError);
}

TEST_CASE("csv ingestion mirrors the dataset") {
    std::string csv =
        "id,gender,phenotype\n"
        "ID000001,F,Hypertension\n"
        "ID000002,M,Hypertension\n"
        "ID000003,M,Diabetes\n";
    std::vector<AddRecord> records = ingest_csv_text(csv);
    REQUIRE(records.size() == 3);
    for (const AddRecord& rec : records) {
        CHECK(rec.keywords.size() == 2);
    }
    CHECK(records[0].id == b("ID000001"));
    CHECK(records[0].keywords.count(b("gender:F")) == 1);
    CHECK(records[0].keywords.count(b("phenotype:Hypertension")) == 1);
    CHECK(records[2].keywords.count(b("phenotype:Diabetes")) == 1);
}

TEST_CASE("csv ingestion error paths") {
    // Empty cells are skipped; a row with only empty cells has no keywords.
    CHECK_THROWS_AS(ingest_csv_text("id,a,b\nID1,,\n"), IngestError);

    // Duplicate identifiers are rejected.
    CHECK_THROWS_AS(ingest_csv_text("id,a\nID1,x\nID1,y\n"), IngestError);

    // Wrong cell count names the line.
    try {
        ingest_csv_text("id,a,b\nID1,x\nID2,x,y\n");
        FAIL("expected IngestError");
    } catch (const IngestError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    CHECK_THROWS_AS(ingest_csv_text(""), IngestError);
    CHECK_THROWS_AS(ingest_csv_text("id\nID1\n"), IngestError);

    // Empty cells mixed with real ones are skipped silently.
    auto records = ingest_csv_text("id,a,b\nID1,,y\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0].keywords == std::set<Bytes>{b("b:y")});
}

TEST_CASE("keyword canonicalization is idempotent") {
    Bytes kw = canonical_keyword(" SNP_rs4477212 ", " AA");
    CHECK(kw == b("snp_rs4477212:AA"));

    // Re-canonicalizing the parts of a canonical keyword changes nothing.
    std::string s = to_string(kw);
    size_t colon = s.find(':');
    CHECK(canonical_keyword(s.substr(0, colon), s.substr(colon + 1)) == kw);

    // Field is lowercased, value case preserved.
    CHECK(canonical_keyword("Phenotype", "Hypertension") == b("phenotype:Hypertension"));
}

TEST_CASE("synthetic datasets have exact pair counts") {
    SyntheticSpec spec;
    spec.ids = 50;
    spec.keywords_per_id = 20;
    spec.seed = 9;
    std::vector<AddRecord> records = synthetic_records(spec);
    REQUIRE(records.size() == 50);
    uint64_t pairs = 0;
    for (const AddRecord& rec : records) {
        CHECK(rec.keywords.size() == 20);
        CHECK(rec.id.size() >= 8);
        pairs += rec.keywords.size();
    }
    CHECK(pairs == 1000);

    // Deterministic under the seed.
    std::vector<AddRecord> again = synthetic_records(spec);
    CHECK(again[17].id == records[17].id);
    CHECK(again[17].keywords == records[17].keywords);

    spec.seed = 10;
    std::vector<AddRecord> other = synthetic_records(spec);
    bool any_difference = false;
    for (size_t i = 0; i < records.size(); ++i) {
        if (other[i].keywords != records[i].keywords) any_difference = true;
    }
    CHECK(any_difference);
}
