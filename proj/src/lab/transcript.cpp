#include "ace/lab/transcript.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>

#include "ace/errors.hpp"
#include "ace/wire/codec.hpp"

namespace ace {

void TranscriptRecorder::record_add(Bytes encoded_batch) {
    events_.push_back({next_++, TranscriptEvent::Kind::add, std::move(encoded_batch), 0});
}

void TranscriptRecorder::record_delete(Bytes encoded_token, uint64_t removed) {
    events_.push_back({next_++, TranscriptEvent::Kind::del, std::move(encoded_token), removed});
}

void TranscriptRecorder::record_search(Bytes encoded_token, uint64_t results) {
    events_.push_back({next_++, TranscriptEvent::Kind::search, std::move(encoded_token), results});
}

Bytes TranscriptRecorder::serialize() const {
    Bytes out;
    append_u64_be(next_, out);
    append_u64_be(events_.size(), out);
    for (const TranscriptEvent& ev : events_) {
        append_u64_be(ev.timestamp, out);
        out.push_back(static_cast<uint8_t>(ev.kind));
        append_u64_be(ev.response_count, out);
        append_sized(ev.payload, out);
    }
    return out;
}

TranscriptRecorder TranscriptRecorder::deserialize(ByteView data) {
    TranscriptRecorder rec;
    size_t off = 0;
    rec.next_ = read_u64_be(data, off);
    uint64_t count = read_u64_be(data, off);
    for (uint64_t i = 0; i < count; ++i) {
        TranscriptEvent ev;
        ev.timestamp = read_u64_be(data, off);
        if (off >= data.size()) throw CodecError("truncated transcript");
        ev.kind = static_cast<TranscriptEvent::Kind>(data[off++]);
        if (ev.kind != TranscriptEvent::Kind::add && ev.kind != TranscriptEvent::Kind::del &&
            ev.kind != TranscriptEvent::Kind::search) {
            throw CodecError("unknown transcript event kind");
        }
        ev.response_count = read_u64_be(data, off);
        ev.payload = read_sized(data, off, data.size(), "transcript payload");
        rec.events_.push_back(std::move(ev));
    }
    if (off != data.size()) throw CodecError("trailing bytes in transcript");
    return rec;
}

std::string AuditReport::to_text() const {
    std::ostringstream out;
    for (const std::string& f : findings) out << "VIOLATION " << f << "\n";
    for (const std::string& l : lines) out << l << "\n";
    return out.str();
}

AuditReport audit_transcript(const std::vector<TranscriptEvent>& events,
                             const PrimeOrderGroup& group, const TdpPublicKey& perm_pk,
                             const std::vector<Bytes>& plaintext_corpus) {
    AuditReport report;
    auto violation = [&](uint64_t u, const std::string& text) {
        report.findings.push_back("u=" + std::to_string(u) + " " + text);
    };
    auto line = [&](const std::string& text) { report.lines.push_back(text); };

    // Row-key history as the server sees it: which add batches touched a row
    // key, and which delete referenced it.
    std::map<Bytes, std::vector<uint64_t>> add_history;
    std::map<Bytes, std::vector<std::pair<uint64_t, uint64_t>>> delete_history;
    std::map<Bytes, std::vector<uint64_t>> search_pattern;  // tk bytes -> timestamps
    std::optional<size_t> delete_size;
    const size_t expected_search_size =
        kWireOverheadBytes + group.element_width() + kPermDomainBytes + 8;

    for (const TranscriptEvent& ev : events) {
        switch (ev.kind) {
            case TranscriptEvent::Kind::add: {
                AddBatch batch;
                try {
                    batch = decode_add_batch(ev.payload, group);
                } catch (const CodecError& e) {
                    violation(ev.timestamp, std::string("undecodable add message: ") + e.what());
                    continue;
                }
                // The message must be exactly its entries: re-encoding the
                // parsed batch reproduces the observed bytes.
                if (encode_add_batch(batch) != ev.payload) {
                    violation(ev.timestamp, "add message carries bytes beyond its entries");
                }
                std::map<Bytes, uint64_t> per_row;
                for (const auto& append : batch.fset_appends) {
                    Bytes row(append.row_key.begin(), append.row_key.end());
                    per_row[row] += 1;
                }
                for (const auto& [row, n] : per_row) {
                    add_history[row].push_back(ev.timestamp);
                }
                std::ostringstream nw;
                nw << "add u=" << ev.timestamp << " N_ID=" << per_row.size() << " NW_ID=[";
                bool first = true;
                for (const auto& [row, n] : per_row) {
                    nw << (first ? "" : ",") << n;
                    first = false;
                }
                nw << "] entries=" << batch.iset_inserts.size();
                line(nw.str());
                break;
            }
            case TranscriptEvent::Kind::del: {
                std::optional<DeleteToken> token;
                try {
                    token = decode_delete_token(ev.payload, group);
                } catch (const CodecError& e) {
                    violation(ev.timestamp, std::string("undecodable delete message: ") + e.what());
                    continue;
                }
                if (!delete_size) {
                    delete_size = ev.payload.size();
                } else if (*delete_size != ev.payload.size()) {
                    violation(ev.timestamp, "delete message size varies");
                }
                Bytes row(token->row_key.begin(), token->row_key.end());
                auto added = add_history.find(row);
                if (added != add_history.end()) {
                    for (uint64_t u_add : added->second) {
                        delete_history[row].push_back({u_add, ev.timestamp});
                    }
                }
                line("del u=" + std::to_string(ev.timestamp) + " removed=" +
                     std::to_string(ev.response_count) +
                     " delta_index_correlations=" + std::to_string(ev.response_count));
                break;
            }
            case TranscriptEvent::Kind::search: {
                SearchToken token;
                try {
                    token = decode_search_token(ev.payload, group, perm_pk);
                } catch (const CodecError& e) {
                    violation(ev.timestamp, std::string("undecodable search message: ") + e.what());
                    continue;
                }
                if (ev.payload.size() != expected_search_size) {
                    violation(ev.timestamp, "search message size beyond (tk, ST, c)");
                }
                if (ev.response_count > token.count) {
                    violation(ev.timestamp, "more results than chain slots");
                }
                search_pattern[token.tk.data].push_back(ev.timestamp);
                uint64_t skipped = token.count - ev.response_count;
                line("search u=" + std::to_string(ev.timestamp) + " c=" +
                     std::to_string(token.count) + " hits=" + std::to_string(ev.response_count) +
                     " skipped=" + std::to_string(skipped));
                break;
            }
        }
    }

    // Pseudorandomness smoke test: no server-visible byte sequence equals a
    // corpus plaintext.
    for (const TranscriptEvent& ev : events) {
        for (const Bytes& plain : plaintext_corpus) {
            if (contains_bytes(ev.payload, plain)) {
                violation(ev.timestamp, "payload contains plaintext bytes: " + to_string(plain));
            }
        }
    }

    size_t group_index = 0;
    for (const auto& [tk, stamps] : search_pattern) {
        std::ostringstream sp;
        sp << "sp token#" << group_index++ << " = [";
        for (size_t i = 0; i < stamps.size(); ++i) sp << (i ? "," : "") << stamps[i];
        sp << "]";
        line(sp.str());
    }
    for (const auto& [row, pairs] : delete_history) {
        std::ostringstream dh;
        dh << "del_hist row=" << hex_encode(ByteView(row.data(), 4)) << " pairs=[";
        for (size_t i = 0; i < pairs.size(); ++i) {
            dh << (i ? "," : "") << "(" << pairs[i].first << "," << pairs[i].second << ")";
        }
        dh << "]";
        line(dh.str());
    }
    return report;
}

}  // namespace ace
