#pragma once

#include <string>
#include <vector>

#include "ace/protocol/messages.hpp"

namespace ace {

// Keyword-tagged identifier records from CSV datasets (SNP and phenotype
// columns). The first column is the identifier; every other non-empty cell
// becomes one keyword "field:value" with the field name lowercased and both
// parts trimmed. Canonicalization is idempotent.
Bytes canonical_keyword(std::string_view field, std::string_view value);

std::vector<AddRecord> ingest_csv_text(std::string_view text);
std::vector<AddRecord> ingest_csv(const std::string& path);

// Seeded synthetic dataset: `ids` identifiers with exactly `keywords_per_id`
// distinct keywords each, drawn from a shared vocabulary so keywords overlap
// across identifiers. vocabulary = 0 picks 2 * keywords_per_id.
struct SyntheticSpec {
    uint64_t ids = 0;
    uint64_t keywords_per_id = 0;
    uint64_t vocabulary = 0;
    uint64_t seed = 0;
};

std::vector<AddRecord> synthetic_records(const SyntheticSpec& spec);

}  // namespace ace
