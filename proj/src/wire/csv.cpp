#include "ace/wire/csv.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "ace/crypto/random.hpp"
#include "ace/errors.hpp"

namespace ace {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
    std::vector<std::string_view> cells;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            cells.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return cells;
}

}  // namespace

Bytes canonical_keyword(std::string_view field, std::string_view value) {
    std::string f(trim(field));
    std::transform(f.begin(), f.end(), f.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::string_view v = trim(value);
    Bytes out = to_bytes(f);
    out.push_back(':');
    out.insert(out.end(), v.begin(), v.end());
    return out;
}

std::vector<AddRecord> ingest_csv_text(std::string_view text) {
    std::vector<std::string_view> lines;
    size_t start = 0;
    for (size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            std::string_view line = text.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.push_back(line);
            start = i + 1;
        }
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) {
        throw IngestError("dataset is empty");
    }

    std::vector<std::string_view> header = split_row(lines[0]);
    if (header.size() < 2) {
        throw IngestError("header must name an identifier column and at least one field");
    }
    std::vector<std::string> fields;
    fields.reserve(header.size());
    for (std::string_view h : header) {
        fields.emplace_back(trim(h));
        if (fields.back().empty()) {
            throw IngestError("header has an empty field name");
        }
    }

    std::vector<AddRecord> records;
    std::set<Bytes> seen_ids;
    for (size_t row = 1; row < lines.size(); ++row) {
        size_t line_no = row + 1;
        std::vector<std::string_view> cells = split_row(lines[row]);
        if (cells.size() != fields.size()) {
            throw IngestError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(fields.size()) + " cells, got " +
                              std::to_string(cells.size()));
        }
        AddRecord rec;
        rec.id = to_bytes(trim(cells[0]));
        if (rec.id.empty()) {
            throw IngestError("line " + std::to_string(line_no) + ": empty identifier");
        }
        if (!seen_ids.insert(rec.id).second) {
            throw IngestError("line " + std::to_string(line_no) + ": duplicate identifier " +
                              to_string(rec.id));
        }
        for (size_t col = 1; col < cells.size(); ++col) {
            if (trim(cells[col]).empty()) continue;  // empty cells are skipped
            rec.keywords.insert(canonical_keyword(fields[col], cells[col]));
        }
        if (rec.keywords.empty()) {
            throw IngestError("line " + std::to_string(line_no) + ": record has no keywords");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<AddRecord> ingest_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestError("cannot open dataset " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return ingest_csv_text(buffer.str());
}

std::vector<AddRecord> synthetic_records(const SyntheticSpec& spec) {
    if (spec.ids == 0 || spec.keywords_per_id == 0) {
        throw IngestError("synthetic dataset needs positive sizes");
    }
    uint64_t vocabulary = spec.vocabulary != 0 ? spec.vocabulary : 2 * spec.keywords_per_id;
    if (vocabulary < spec.keywords_per_id) {
        throw IngestError("vocabulary smaller than keywords per identifier");
    }

    static const char* kAlleles[] = {"AA", "AC", "AG", "AT", "CC", "CG", "CT", "GG", "GT", "TT"};
    std::vector<Bytes> pool;
    pool.reserve(vocabulary);
    for (uint64_t k = 0; k < vocabulary; ++k) {
        std::string field = "snp_rs" + std::to_string(4000000 + k);
        pool.push_back(canonical_keyword(field, kAlleles[k % 10]));
    }

    DeterministicRandom rng(spec.seed);
    std::vector<AddRecord> records;
    records.reserve(spec.ids);
    std::vector<uint64_t> indices(vocabulary);
    for (uint64_t i = 0; i < vocabulary; ++i) indices[i] = i;

    for (uint64_t r = 0; r < spec.ids; ++r) {
        char id_buf[16];
        std::snprintf(id_buf, sizeof id_buf, "PID%07llu", static_cast<unsigned long long>(r));
        AddRecord rec;
        rec.id = to_bytes(id_buf);
        // Partial Fisher-Yates: the first keywords_per_id slots become the
        // record's distinct keyword sample.
        for (uint64_t k = 0; k < spec.keywords_per_id; ++k) {
            uint64_t j = k + rng.uniform(vocabulary - k);
            std::swap(indices[k], indices[j]);
            rec.keywords.insert(pool[indices[k]]);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace ace
