#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "ace/bytes.hpp"
#include "ace/crypto/group.hpp"
#include "ace/crypto/keyed_hash.hpp"
#include "ace/crypto/prf.hpp"
#include "ace/crypto/tdp.hpp"

namespace ace {

using RowKey = PrfOutput;      // r_ID, 16 bytes
using IndexKey = HashOutput;   // searchable index, 32 bytes

// One identifier with its keyword set, as submitted for insertion.
struct AddRecord {
    Bytes id;
    std::set<Bytes> keywords;
};

// Per-keyword state held by trustee and vetter: the current chain value and
// how many entries were ever inserted for the keyword.
struct KeywordState {
    PermDomainValue st;
    uint64_t count = 0;

    bool operator==(const KeywordState&) const = default;
};
using KeywordStateMap = std::map<Bytes, KeywordState>;

// Everything the server stores for one insertion batch, in generation order.
struct AddBatch {
    struct IsetInsert {
        IndexKey index;
        Bytes encrypted_id;
    };
    struct FsetAppend {
        RowKey row_key;
        GroupElement delta;
    };

    std::vector<IsetInsert> iset_inserts;
    std::vector<FsetAppend> fset_appends;

    bool empty() const { return iset_inserts.empty() && fset_appends.empty(); }
};

// Keyword-state updates shipped from trustee to vetter, strictly ordered.
struct WDelta {
    struct Entry {
        Bytes keyword;
        PermDomainValue st;
        uint64_t count = 0;
    };
    uint64_t seq = 0;
    std::vector<Entry> entries;
};

struct SearchToken {
    GroupElement tk;
    PermDomainValue st;
    uint64_t count = 0;  // >= 1
};

// Constant-size revocation token: 32-byte tag scalar + 16-byte row key,
// independent of how many keywords the identifier has.
struct DeleteToken {
    Scalar tag_id;
    RowKey row_key;
};

struct DeletionReport {
    uint64_t removed = 0;
};

using RSet = std::vector<Bytes>;   // encrypted identifiers
using IdSet = std::set<Bytes>;     // decrypted, de-duplicated identifiers

}  // namespace ace
