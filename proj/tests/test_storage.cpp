#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "ace/errors.hpp"
#include "ace/storage/journal.hpp"
#include "ace/storage/kv.hpp"
#include "ace/storage/snapshot.hpp"

using namespace ace;

namespace {

Bytes b(std::string_view s) { return to_bytes(s); }

Bytes fixed_key(Namespace ns, uint8_t fill) {
    return Bytes(namespace_key_width(ns), fill);
}

std::filesystem::path temp_dir(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "ace_storage_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("map semantics") {
    MemoryStore store;
    Bytes key = fixed_key(Namespace::iset, 0xAB);

    CHECK_FALSE(store.get(Namespace::iset, key).has_value());
    store.put(Namespace::iset, key, b("value1"));
    CHECK(store.get(Namespace::iset, key) == b("value1"));
    store.put(Namespace::iset, key, b("value2"));
    CHECK(store.get(Namespace::iset, key) == b("value2"));
    store.del(Namespace::iset, key);
    CHECK_FALSE(store.get(Namespace::iset, key).has_value());
    // Deleting an absent key is a no-op, not an error.
    CHECK_NOTHROW(store.del(Namespace::iset, key));
}

TEST_CASE("append preserves list order") {
    MemoryStore store;
    Bytes row = fixed_key(Namespace::fset, 0x01);
    store.append(Namespace::fset, row, b("delta-a"));
    store.append(Namespace::fset, row, b("delta-b"));
    store.append(Namespace::fset, row, b("delta-c"));

    auto value = store.get(Namespace::fset, row);
    REQUIRE(value.has_value());
    std::vector<Bytes> items = list_value_parse(*value);
    REQUIRE(items.size() == 3);
    CHECK(items[0] == b("delta-a"));
    CHECK(items[1] == b("delta-b"));
    CHECK(items[2] == b("delta-c"));
}

TEST_CASE("key width policy is enforced") {
    MemoryStore store;
    CHECK_THROWS_AS(store.put(Namespace::fset, b("short"), b("v")), StorageError);
    CHECK_THROWS_AS(store.put(Namespace::iset, Bytes(31, 0), b("v")), StorageError);
    CHECK_THROWS_AS(store.put(Namespace::wmap, Bytes{}, b("v")), StorageError);
    CHECK_NOTHROW(store.put(Namespace::wmap, b("any-length"), b("v")));
}

TEST_CASE("atomic batches apply fully or not at all") {
    MemoryStore store;
    std::vector<Mutation> batch;
    batch.push_back(Mutation::put(Namespace::iset, fixed_key(Namespace::iset, 1), b("a")));
    batch.push_back(Mutation::put(Namespace::iset, fixed_key(Namespace::iset, 2), b("b")));
    batch.push_back(Mutation::put(Namespace::fset, b("bad"), b("c")));  // width violation

    CHECK_THROWS_AS(store.apply_atomic(batch), StorageError);
    CHECK(store.count(Namespace::iset) == 0);

    CHECK_NOTHROW(store.apply_atomic({}));
}

TEST_CASE("snapshot export is canonical and lossless") {
    MemoryStore a;
    a.put(Namespace::wmap, b("kw-b"), b("2"));
    a.put(Namespace::wmap, b("kw-a"), b("1"));
    a.put(Namespace::keys, b("k"), b("v"));
    a.append(Namespace::fset, fixed_key(Namespace::fset, 9), b("d1"));

    // Same content inserted in a different order serializes identically.
    MemoryStore c;
    c.append(Namespace::fset, fixed_key(Namespace::fset, 9), b("d1"));
    c.put(Namespace::keys, b("k"), b("v"));
    c.put(Namespace::wmap, b("kw-a"), b("1"));
    c.put(Namespace::wmap, b("kw-b"), b("2"));

    Bytes snap_a = snapshot_export(a);
    CHECK(snap_a == snapshot_export(c));

    MemoryStore restored = snapshot_import(snap_a);
    CHECK(snapshot_export(restored) == snap_a);
    CHECK(restored.get(Namespace::wmap, b("kw-a")) == b("1"));

    // Every single-byte corruption is rejected.
    for (size_t i = 0; i < snap_a.size(); i += 7) {
        Bytes bad = snap_a;
        bad[i] ^= 0x01;
        CHECK_THROWS_AS(snapshot_import(bad), StorageError);
    }
}

TEST_CASE("metrics account for serialized section bytes exactly") {
    MemoryStore store;
    StorageMetrics empty = storage_metrics(store);
    // An empty section is tag byte + u64 count.
    CHECK(empty.fset_bytes == 9);
    CHECK(empty.iset_bytes == 9);
    CHECK(empty.fset_entries == 0);

    Bytes key = fixed_key(Namespace::iset, 3);
    Bytes value = b("0123456789");
    store.put(Namespace::iset, key, value);
    StorageMetrics m = storage_metrics(store);
    CHECK(m.iset_entries == 1);
    CHECK(m.iset_bytes == 9 + 4 + key.size() + 4 + value.size());
    CHECK(m.total_bytes() ==
          m.fset_bytes + m.iset_bytes + m.wmap_bytes + m.keys_bytes);
}

TEST_CASE("mutation record codec round-trips") {
    std::vector<Mutation> batch;
    batch.push_back(Mutation::put(Namespace::iset, fixed_key(Namespace::iset, 1), b("v")));
    batch.push_back(Mutation::del(Namespace::wmap, b("kw")));
    batch.push_back(Mutation::append(Namespace::fset, fixed_key(Namespace::fset, 2), b("d")));

    Bytes payload = encode_mutations(batch);
    std::vector<Mutation> decoded = decode_mutations(payload);
    REQUIRE(decoded.size() == 3);
    CHECK(decoded[0].op == Mutation::Op::put);
    CHECK(decoded[1].op == Mutation::Op::del);
    CHECK(decoded[2].op == Mutation::Op::append);
    CHECK(decoded[0].key == batch[0].key);
    CHECK(decoded[2].value == b("d"));

    Bytes truncated(payload.begin(), payload.end() - 1);
    CHECK_THROWS_AS(decode_mutations(truncated), CodecError);
}

TEST_CASE("journal store survives reopen") {
    auto dir = temp_dir("reopen");
    std::string path = (dir / "db").string();
    {
        JournalStore store(path);
        store.put(Namespace::wmap, b("kw"), b("state1"));
        store.append(Namespace::fset, fixed_key(Namespace::fset, 1), b("d1"));
    }
    {
        JournalStore store(path);
        CHECK(store.recovered_batches() == 2);
        CHECK(store.get(Namespace::wmap, b("kw")) == b("state1"));
        store.put(Namespace::wmap, b("kw"), b("state2"));
        store.compact();
    }
    {
        JournalStore store(path);
        CHECK(store.recovered_batches() == 0);  // folded into the base
        CHECK(store.get(Namespace::wmap, b("kw")) == b("state2"));
    }
}

TEST_CASE("journal recovery is all-or-nothing at every truncation offset") {
    auto dir = temp_dir("faults");
    std::string origin = (dir / "origin").string();

    // Three batches with recognizable effects.
    {
        JournalStore store(origin);
        std::vector<Mutation> batch1;
        batch1.push_back(Mutation::put(Namespace::wmap, b("a"), b("1")));
        batch1.push_back(Mutation::put(Namespace::wmap, b("b"), b("1")));
        store.apply_atomic(batch1);

        std::vector<Mutation> batch2;
        for (int i = 0; i < 10; ++i) {
            batch2.push_back(Mutation::put(Namespace::wmap, b("k" + std::to_string(i)), b("2")));
        }
        store.apply_atomic(batch2);

        std::vector<Mutation> batch3;
        batch3.push_back(Mutation::del(Namespace::wmap, b("a")));
        store.apply_atomic(batch3);
    }

    Bytes journal = read_file(origin + ".journal");
    const uint64_t expected_by_batches[4][2] = {
        // {count of wmap entries, "a" present}
        {0, 0},   // nothing applied
        {2, 1},   // batch1
        {12, 1},  // batch1+2
        {11, 0},  // all three
    };

    for (size_t cut = 0; cut <= journal.size(); ++cut) {
        std::string path = (dir / ("cut" + std::to_string(cut))).string();
        write_file_atomic(path + ".journal", ByteView(journal.data(), cut));
        JournalStore store(path);
        uint64_t batches = store.recovered_batches();
        REQUIRE(batches <= 3);
        CHECK(store.count(Namespace::wmap) == expected_by_batches[batches][0]);
        CHECK(store.get(Namespace::wmap, b("a")).has_value() ==
              (expected_by_batches[batches][1] == 1));
        // A batch is recovered only once its final checksum byte is on disk.
        if (cut < journal.size()) {
            CHECK(batches < 3);
        } else {
            CHECK(batches == 3);
        }
    }

    // An injected failure mid-batch (torn record for a 10-mutation batch)
    // applies none of the ten mutations.
    {
        std::string path = (dir / "midbatch").string();
        // Find where batch2's record begins: after batch1's record.
        size_t off = 0;
        uint32_t len1 = read_u32_be(journal, off);
        size_t batch2_start = off + len1 + 32;
        size_t cut = batch2_start + 20;  // inside batch2's record
        write_file_atomic(path + ".journal", ByteView(journal.data(), cut));
        JournalStore store(path);
        CHECK(store.recovered_batches() == 1);
        CHECK(store.count(Namespace::wmap) == 2);
    }
}

TEST_CASE("journal appends continue after a torn tail") {
    auto dir = temp_dir("tailwrite");
    std::string origin = (dir / "db").string();
    {
        JournalStore store(origin);
        store.put(Namespace::wmap, b("x"), b("1"));
    }
    // Tear the tail by appending garbage.
    Bytes journal = read_file(origin + ".journal");
    journal.push_back(0x00);
    journal.push_back(0x00);
    journal.push_back(0x00);
    write_file_atomic(origin + ".journal", journal);
    {
        JournalStore store(origin);
        CHECK(store.recovered_batches() == 1);
        store.put(Namespace::wmap, b("y"), b("2"));
    }
    {
        JournalStore store(origin);
        CHECK(store.recovered_batches() == 2);
        CHECK(store.get(Namespace::wmap, b("y")) == b("2"));
    }
}
