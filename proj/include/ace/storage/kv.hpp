#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ace/bytes.hpp"

namespace ace {

// The four storage namespaces. fset and iset hold the server's encrypted
// index; wmap holds keyword state; keys holds key material and role
// bookkeeping. Tag values are the snapshot section tags.
enum class Namespace : uint8_t {
    fset = 0x01,
    iset = 0x02,
    wmap = 0x03,
    keys = 0x04,
};

constexpr Namespace kAllNamespaces[] = {Namespace::fset, Namespace::iset, Namespace::wmap,
                                        Namespace::keys};

// Fixed key width per namespace; 0 means variable (nonempty).
size_t namespace_key_width(Namespace ns);
const char* namespace_name(Namespace ns);

struct Mutation {
    enum class Op : uint8_t { put = 1, del = 2, append = 3 };

    Op op;
    Namespace ns;
    Bytes key;
    Bytes value;

    static Mutation put(Namespace ns, Bytes key, Bytes value) {
        return {Op::put, ns, std::move(key), std::move(value)};
    }
    static Mutation del(Namespace ns, Bytes key) { return {Op::del, ns, std::move(key), {}}; }
    static Mutation append(Namespace ns, Bytes key, Bytes value) {
        return {Op::append, ns, std::move(key), std::move(value)};
    }
};

// Ordered-list values (FSet rows): length-prefixed items, append-only.
void list_value_append(Bytes& list, ByteView item);
std::vector<Bytes> list_value_parse(ByteView value);

// Key-value store with atomic batch mutation. put overwrites, del of an
// absent key is a no-op, append extends an ordered list value.
class KvStore {
public:
    virtual ~KvStore() = default;

    virtual std::optional<Bytes> get(Namespace ns, ByteView key) const = 0;
    virtual void apply_atomic(const std::vector<Mutation>& mutations) = 0;

    // Visits entries in lexicographic key order.
    virtual void scan(Namespace ns,
                      const std::function<void(ByteView key, ByteView value)>& fn) const = 0;
    virtual uint64_t count(Namespace ns) const = 0;

    void put(Namespace ns, ByteView key, ByteView value);
    void del(Namespace ns, ByteView key);
    void append(Namespace ns, ByteView key, ByteView value);
};

class MemoryStore final : public KvStore {
public:
    std::optional<Bytes> get(Namespace ns, ByteView key) const override;
    void apply_atomic(const std::vector<Mutation>& mutations) override;
    void scan(Namespace ns,
              const std::function<void(ByteView key, ByteView value)>& fn) const override;
    uint64_t count(Namespace ns) const override;

private:
    friend class JournalStore;
    std::map<Bytes, Bytes> maps_[4];
};

// Validates widths; throws StorageError on violation. Shared by backends.
void validate_mutations(const std::vector<Mutation>& mutations);

}  // namespace ace
