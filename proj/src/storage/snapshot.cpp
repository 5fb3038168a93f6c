#include "ace/storage/snapshot.hpp"

#include <sodium.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "ace/errors.hpp"

namespace ace {

namespace {

std::array<uint8_t, 32> sha256(ByteView data) {
    std::array<uint8_t, 32> out{};
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}

Bytes encode_section(const KvStore& store, Namespace ns) {
    Bytes out;
    out.push_back(static_cast<uint8_t>(ns));
    append_u64_be(store.count(ns), out);
    store.scan(ns, [&](ByteView key, ByteView value) {
        append_sized(key, out);
        append_sized(value, out);
    });
    return out;
}

}  // namespace

Bytes snapshot_export(const KvStore& store) {
    Bytes out(kSnapshotMagic, kSnapshotMagic + 5);
    out.push_back(kSnapshotVersion);
    for (Namespace ns : kAllNamespaces) {
        Bytes section = encode_section(store, ns);
        out.insert(out.end(), section.begin(), section.end());
    }
    auto digest = sha256(out);
    out.insert(out.end(), digest.begin(), digest.end());
    return out;
}

MemoryStore snapshot_import(ByteView data) {
    if (data.size() < 5 + 1 + 32) {
        throw StorageError("snapshot truncated");
    }
    if (std::memcmp(data.data(), kSnapshotMagic, 5) != 0) {
        throw StorageError("snapshot magic mismatch");
    }
    ByteView body(data.data(), data.size() - 32);
    ByteView checksum(data.data() + data.size() - 32, 32);
    auto digest = sha256(body);
    if (!std::equal(digest.begin(), digest.end(), checksum.begin())) {
        throw StorageError("snapshot checksum mismatch");
    }
    size_t off = 5;
    uint8_t version = body[off++];
    if (version != kSnapshotVersion) {
        throw StorageError("unsupported snapshot version");
    }

    MemoryStore store;
    std::vector<Mutation> mutations;
    for (Namespace ns : kAllNamespaces) {
        if (off >= body.size() || body[off] != static_cast<uint8_t>(ns)) {
            throw StorageError("snapshot section tag mismatch");
        }
        ++off;
        uint64_t count = read_u64_be(body, off);
        for (uint64_t i = 0; i < count; ++i) {
            Bytes key = read_sized(body, off, body.size(), "snapshot key");
            Bytes value = read_sized(body, off, body.size(), "snapshot value");
            mutations.push_back(Mutation::put(ns, std::move(key), std::move(value)));
        }
    }
    if (off != body.size()) {
        throw StorageError("trailing bytes in snapshot");
    }
    store.apply_atomic(mutations);
    return store;
}

StorageMetrics storage_metrics(const KvStore& store) {
    StorageMetrics m;
    m.fset_bytes = encode_section(store, Namespace::fset).size();
    m.iset_bytes = encode_section(store, Namespace::iset).size();
    m.wmap_bytes = encode_section(store, Namespace::wmap).size();
    m.keys_bytes = encode_section(store, Namespace::keys).size();
    m.fset_entries = store.count(Namespace::fset);
    m.iset_entries = store.count(Namespace::iset);
    m.wmap_entries = store.count(Namespace::wmap);
    m.keys_entries = store.count(Namespace::keys);
    return m;
}

void write_file_atomic(const std::string& path, ByteView data) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StorageError("cannot open " + tmp + " for writing");
        out.write(reinterpret_cast<const char*>(data.data()),
                  static_cast<std::streamsize>(data.size()));
        if (!out) throw StorageError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw StorageError("rename failed for " + path + ": " + ec.message());
}

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw StorageError("cannot open " + path);
    std::streamsize size = in.tellg();
    in.seekg(0);
    Bytes data(static_cast<size_t>(size));
    if (size > 0) {
        in.read(reinterpret_cast<char*>(data.data()), size);
        if (!in) throw StorageError("read failed for " + path);
    }
    return data;
}

bool file_exists(const std::string& path) {
    return std::filesystem::exists(path);
}

}  // namespace ace
