#include "ace/storage/journal.hpp"

#include <sodium.h>
#include <unistd.h>

#include <cstring>
#include <filesystem>

#include "ace/errors.hpp"
#include "ace/storage/snapshot.hpp"

namespace ace {

Bytes encode_mutations(const std::vector<Mutation>& mutations) {
    Bytes out;
    append_u32_be(static_cast<uint32_t>(mutations.size()), out);
    for (const Mutation& m : mutations) {
        out.push_back(static_cast<uint8_t>(m.op));
        out.push_back(static_cast<uint8_t>(m.ns));
        append_sized(m.key, out);
        append_sized(m.value, out);
    }
    return out;
}

std::vector<Mutation> decode_mutations(ByteView payload) {
    size_t off = 0;
    uint32_t count = read_u32_be(payload, off);
    std::vector<Mutation> out;
    out.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        if (off + 2 > payload.size()) throw CodecError("truncated mutation header");
        auto op = static_cast<Mutation::Op>(payload[off++]);
        auto ns = static_cast<Namespace>(payload[off++]);
        if (op != Mutation::Op::put && op != Mutation::Op::del && op != Mutation::Op::append) {
            throw CodecError("unknown mutation op");
        }
        Bytes key = read_sized(payload, off, payload.size(), "mutation key");
        Bytes value = read_sized(payload, off, payload.size(), "mutation value");
        out.push_back(Mutation{op, ns, std::move(key), std::move(value)});
    }
    if (off != payload.size()) throw CodecError("trailing bytes in mutation record");
    return out;
}

namespace {
std::array<uint8_t, 32> sha256(ByteView data) {
    std::array<uint8_t, 32> out{};
    crypto_hash_sha256(out.data(), data.data(), data.size());
    return out;
}
}  // namespace

JournalStore::JournalStore(const std::string& path)
    : base_path_(path + ".base"), journal_path_(path + ".journal") {
    if (file_exists(base_path_)) {
        memory_ = snapshot_import(read_file(base_path_));
    }
    if (file_exists(journal_path_)) {
        Bytes journal = read_file(journal_path_);
        size_t off = 0;
        size_t committed = 0;
        while (off + 4 <= journal.size()) {
            size_t record_start = off;
            uint32_t len = read_u32_be(journal, off);
            if (off + len + 32 > journal.size()) {
                off = record_start;  // torn tail record
                break;
            }
            ByteView payload(journal.data() + off, len);
            ByteView checksum(journal.data() + off + len, 32);
            auto digest = sha256(payload);
            if (!std::equal(digest.begin(), digest.end(), checksum.begin())) {
                off = record_start;
                break;
            }
            memory_.apply_atomic(decode_mutations(payload));
            ++recovered_;
            off += len + 32;
            committed = off;
        }
        if (committed < journal.size()) {
            // Drop the torn tail so later appends start from a clean record
            // boundary.
            std::filesystem::resize_file(journal_path_, committed);
        }
    }
    open_journal_for_append();
}

JournalStore::~JournalStore() {
    if (journal_ != nullptr) {
        fclose(journal_);
    }
}

void JournalStore::open_journal_for_append() {
    journal_ = fopen(journal_path_.c_str(), "ab");
    if (journal_ == nullptr) {
        throw StorageError("cannot open journal " + journal_path_);
    }
}

std::optional<Bytes> JournalStore::get(Namespace ns, ByteView key) const {
    return memory_.get(ns, key);
}

void JournalStore::apply_atomic(const std::vector<Mutation>& mutations) {
    validate_mutations(mutations);
    Bytes payload = encode_mutations(mutations);
    Bytes record;
    append_u32_be(static_cast<uint32_t>(payload.size()), record);
    record.insert(record.end(), payload.begin(), payload.end());
    auto digest = sha256(payload);
    record.insert(record.end(), digest.begin(), digest.end());

    if (fwrite(record.data(), 1, record.size(), journal_) != record.size() ||
        fflush(journal_) != 0 || fsync(fileno(journal_)) != 0) {
        throw StorageError("journal append failed");
    }
    memory_.apply_atomic(mutations);
}

void JournalStore::scan(Namespace ns,
                        const std::function<void(ByteView key, ByteView value)>& fn) const {
    memory_.scan(ns, fn);
}

uint64_t JournalStore::count(Namespace ns) const {
    return memory_.count(ns);
}

void JournalStore::compact() {
    write_file_atomic(base_path_, snapshot_export(memory_));
    fclose(journal_);
    journal_ = nullptr;
    std::error_code ec;
    std::filesystem::remove(journal_path_, ec);
    open_journal_for_append();
}

}  // namespace ace
