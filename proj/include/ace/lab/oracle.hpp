#pragma once

#include <map>

#include "ace/protocol/messages.hpp"

namespace ace {

// Cleartext reference semantics: identifier -> keyword set, deletion-aware.
// Every encrypted-side operation is mirrored here and search results must
// agree exactly.
class PlainDatabase {
public:
    void apply_add(const std::vector<AddRecord>& records);
    void revoke(ByteView id);
    IdSet search(ByteView keyword) const;

    bool contains(ByteView id) const;
    const std::map<Bytes, std::set<Bytes>>& entries() const { return entries_; }

private:
    std::map<Bytes, std::set<Bytes>> entries_;
};

}  // namespace ace
