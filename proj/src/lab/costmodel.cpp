#include "ace/lab/costmodel.hpp"

#include <string>

#include "ace/errors.hpp"
#include "ace/protocol/setup.hpp"

namespace ace {

namespace {

// One key generation shared by all measurements; fresh roles per call.
Deployment fresh_deployment(uint64_t seed) {
    static const Bytes trustee_snapshot = [] {
        Trustee::Config config;
        config.add_workers = 1;
        Trustee t = Trustee::create(config, std::make_unique<DeterministicRandom>(0xC057ULL));
        return t.export_snapshot();
    }();
    Trustee trustee =
        Trustee::import_snapshot(trustee_snapshot, 1, std::make_unique<DeterministicRandom>(seed));
    Vetter vetter(trustee.vetter_key_material());
    Server server(trustee.server_public_params(), std::make_unique<MemoryStore>());
    return Deployment{std::move(trustee), std::move(vetter), std::move(server)};
}

std::vector<AddRecord> one_id_with_keywords(uint64_t x) {
    if (x == 0) {
        throw ProtocolError("keyword count must be positive");
    }
    AddRecord rec;
    rec.id = to_bytes("COUNTED0");
    for (uint64_t k = 0; k < x; ++k) {
        rec.keywords.insert(to_bytes("kw" + std::to_string(k)));
    }
    return {std::move(rec)};
}

}  // namespace

RoleCounters count_operation(CountedOp op, uint64_t parameter, uint64_t seed) {
    Deployment dep = fresh_deployment(seed);
    CounterSink trustee_sink, vetter_sink, server_sink;
    RoleCounters out;

    switch (op) {
        case CountedOp::add_one_id: {
            auto records = one_id_with_keywords(parameter);
            auto [batch, delta] = [&] {
                counters::Scope scope(&trustee_sink);
                return dep.trustee.add_batch(records);
            }();
            dep.vetter.apply_delta(delta);
            counters::Scope scope(&server_sink);
            dep.server.apply_add(batch);
            break;
        }
        case CountedOp::delete_one_id: {
            auto [batch, delta] = dep.trustee.add_batch(one_id_with_keywords(parameter));
            dep.server.apply_add(batch);
            DeleteToken token = [&] {
                counters::Scope scope(&trustee_sink);
                return dep.trustee.issue_delete(to_bytes("COUNTED0"));
            }();
            counters::Scope scope(&server_sink);
            dep.server.apply_delete(token);
            break;
        }
        case CountedOp::search: {
            if (parameter == 0) {
                throw ProtocolError("match count must be positive");
            }
            Bytes keyword = to_bytes("shared");
            std::vector<AddRecord> records;
            for (uint64_t i = 0; i < parameter; ++i) {
                records.push_back({to_bytes("MATCH" + std::to_string(i)), {keyword}});
            }
            auto [batch, delta] = dep.trustee.add_batch(records);
            dep.server.apply_add(batch);
            dep.vetter.apply_delta(delta);

            auto token = [&] {
                counters::Scope scope(&vetter_sink);
                return dep.vetter.issue_search(keyword);
            }();
            Server::SearchOutcome outcome = [&] {
                counters::Scope scope(&server_sink);
                return dep.server.search(*token);
            }();
            counters::Scope scope(&vetter_sink);
            dep.vetter.decrypt_results(keyword, outcome.results);
            break;
        }
    }
    out.trustee = trustee_sink.snapshot();
    out.vetter = vetter_sink.snapshot();
    out.server = server_sink.snapshot();
    return out;
}

}  // namespace ace
