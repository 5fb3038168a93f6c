#pragma once

#include "ace/bytes.hpp"
#include "ace/storage/kv.hpp"

namespace ace {

// Snapshot file layout:
//   magic "ACEDB" | version byte | four sections | 32-byte SHA-256 checksum
// Each section: namespace tag byte | u64 big-endian entry count | entries as
// (u32-length-prefixed key, u32-length-prefixed value) in lexicographic key
// order. The canonical ordering makes exports byte-deterministic for equal
// state.
constexpr char kSnapshotMagic[] = "ACEDB";
constexpr uint8_t kSnapshotVersion = 1;

Bytes snapshot_export(const KvStore& store);

// Verifies magic, version and checksum; throws StorageError on mismatch.
MemoryStore snapshot_import(ByteView data);

struct StorageMetrics {
    uint64_t fset_bytes = 0;
    uint64_t iset_bytes = 0;
    uint64_t wmap_bytes = 0;
    uint64_t keys_bytes = 0;
    uint64_t fset_entries = 0;
    uint64_t iset_entries = 0;
    uint64_t wmap_entries = 0;
    uint64_t keys_entries = 0;

    uint64_t total_bytes() const { return fset_bytes + iset_bytes + wmap_bytes + keys_bytes; }
};

// Exact byte accounting of the serialized sections.
StorageMetrics storage_metrics(const KvStore& store);

// Persistence helpers: atomic write via temp file + rename.
void write_file_atomic(const std::string& path, ByteView data);
Bytes read_file(const std::string& path);
bool file_exists(const std::string& path);

}  // namespace ace
