#include "ace/lab/oracle.hpp"

namespace ace {

void PlainDatabase::apply_add(const std::vector<AddRecord>& records) {
    for (const AddRecord& rec : records) {
        auto& keywords = entries_[rec.id];
        keywords.insert(rec.keywords.begin(), rec.keywords.end());
    }
}

void PlainDatabase::revoke(ByteView id) {
    entries_.erase(Bytes(id.begin(), id.end()));
}

IdSet PlainDatabase::search(ByteView keyword) const {
    Bytes kw(keyword.begin(), keyword.end());
    IdSet out;
    for (const auto& [id, keywords] : entries_) {
        if (keywords.contains(kw)) out.insert(id);
    }
    return out;
}

bool PlainDatabase::contains(ByteView id) const {
    return entries_.contains(Bytes(id.begin(), id.end()));
}

}  // namespace ace
