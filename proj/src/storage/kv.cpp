#include "ace/storage/kv.hpp"

#include "ace/errors.hpp"

namespace ace {

size_t namespace_key_width(Namespace ns) {
    switch (ns) {
        case Namespace::fset: return 16;
        case Namespace::iset: return 32;
        case Namespace::wmap: return 0;
        case Namespace::keys: return 0;
    }
    throw StorageError("unknown namespace");
}

const char* namespace_name(Namespace ns) {
    switch (ns) {
        case Namespace::fset: return "fset";
        case Namespace::iset: return "iset";
        case Namespace::wmap: return "wmap";
        case Namespace::keys: return "keys";
    }
    throw StorageError("unknown namespace");
}

void list_value_append(Bytes& list, ByteView item) {
    append_sized(item, list);
}

std::vector<Bytes> list_value_parse(ByteView value) {
    std::vector<Bytes> items;
    size_t off = 0;
    while (off < value.size()) {
        items.push_back(read_sized(value, off, value.size(), "list item"));
    }
    return items;
}

void validate_mutations(const std::vector<Mutation>& mutations) {
    for (const Mutation& m : mutations) {
        size_t width = namespace_key_width(m.ns);
        if (width != 0 && m.key.size() != width) {
            throw StorageError(std::string("key width violation in namespace ") +
                               namespace_name(m.ns));
        }
        if (width == 0 && m.key.empty()) {
            throw StorageError("empty key");
        }
    }
}

void KvStore::put(Namespace ns, ByteView key, ByteView value) {
    apply_atomic({Mutation::put(ns, Bytes(key.begin(), key.end()), Bytes(value.begin(), value.end()))});
}

void KvStore::del(Namespace ns, ByteView key) {
    apply_atomic({Mutation::del(ns, Bytes(key.begin(), key.end()))});
}

void KvStore::append(Namespace ns, ByteView key, ByteView value) {
    apply_atomic(
        {Mutation::append(ns, Bytes(key.begin(), key.end()), Bytes(value.begin(), value.end()))});
}

namespace {
size_t ns_index(Namespace ns) {
    return static_cast<size_t>(static_cast<uint8_t>(ns)) - 1;
}
}  // namespace

std::optional<Bytes> MemoryStore::get(Namespace ns, ByteView key) const {
    const auto& m = maps_[ns_index(ns)];
    auto it = m.find(Bytes(key.begin(), key.end()));
    if (it == m.end()) return std::nullopt;
    return it->second;
}

void MemoryStore::apply_atomic(const std::vector<Mutation>& mutations) {
    validate_mutations(mutations);
    // After validation no mutation can fail, so in-place application is
    // all-or-nothing.
    for (const Mutation& m : mutations) {
        auto& map = maps_[ns_index(m.ns)];
        switch (m.op) {
            case Mutation::Op::put:
                map[m.key] = m.value;
                break;
            case Mutation::Op::del:
                map.erase(m.key);
                break;
            case Mutation::Op::append: {
                Bytes& list = map[m.key];
                list_value_append(list, m.value);
                break;
            }
        }
    }
}

void MemoryStore::scan(Namespace ns,
                       const std::function<void(ByteView key, ByteView value)>& fn) const {
    for (const auto& [key, value] : maps_[ns_index(ns)]) {
        fn(key, value);
    }
}

uint64_t MemoryStore::count(Namespace ns) const {
    return maps_[ns_index(ns)].size();
}

}  // namespace ace
