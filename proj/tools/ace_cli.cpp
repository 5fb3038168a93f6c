#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "ace/errors.hpp"
#include "ace/lab/bench.hpp"
#include "ace/lab/transcript.hpp"
#include "ace/protocol/setup.hpp"
#include "ace/storage/journal.hpp"
#include "ace/storage/snapshot.hpp"
#include "ace/wire/codec.hpp"
#include "ace/wire/csv.hpp"

namespace fs = std::filesystem;
using namespace ace;

namespace {

struct DbPaths {
    fs::path root;
    fs::path trustee_file;
    fs::path vetter_file;
    std::string server_prefix;
    fs::path transcript_file;
    fs::path audit_file;

    explicit DbPaths(const std::string& dir)
        : root(dir),
          trustee_file(root / "trustee" / "state.acedb"),
          vetter_file(root / "vetter" / "state.acedb"),
          server_prefix((root / "server" / "state").string()),
          transcript_file(root / "server" / "transcript.bin"),
          audit_file(root / "audit_report.txt") {}
};

std::unique_ptr<RandomSource> make_rng(bool seeded, uint64_t seed) {
    if (seeded) return std::make_unique<DeterministicRandom>(seed);
    return std::make_unique<OsRandom>();
}

Trustee load_trustee(const DbPaths& paths, bool seeded, uint64_t seed, size_t workers) {
    return Trustee::import_snapshot(read_file(paths.trustee_file.string()), workers,
                                    make_rng(seeded, seed));
}

Vetter load_vetter(const DbPaths& paths) {
    return Vetter::import_snapshot(read_file(paths.vetter_file.string()));
}

Server load_server(const DbPaths& paths) {
    return Server::attach(std::make_unique<JournalStore>(paths.server_prefix));
}

TranscriptRecorder load_transcript(const DbPaths& paths) {
    if (!file_exists(paths.transcript_file.string())) return {};
    return TranscriptRecorder::deserialize(read_file(paths.transcript_file.string()));
}

void save_transcript(const DbPaths& paths, const TranscriptRecorder& rec) {
    write_file_atomic(paths.transcript_file.string(), rec.serialize());
}

// Accepts either a canonical "field:value" keyword or one with an
// uncanonicalized field part.
Bytes keyword_argument(const std::string& raw) {
    size_t colon = raw.find(':');
    if (colon == std::string::npos) {
        Bytes kw = to_bytes(raw);
        if (kw.empty()) throw IngestError("keyword must be nonempty");
        return kw;
    }
    return canonical_keyword(raw.substr(0, colon), raw.substr(colon + 1));
}

int cmd_setup(const std::string& out_dir, bool seeded, uint64_t seed, unsigned perm_bits) {
    DbPaths paths(out_dir);
    if (fs::exists(paths.trustee_file)) {
        throw StorageError("state already exists under " + out_dir);
    }
    fs::create_directories(paths.root / "trustee");
    fs::create_directories(paths.root / "vetter");
    fs::create_directories(paths.root / "server");

    Trustee::Config config;
    config.perm_modulus_bits = perm_bits;
    Trustee trustee = Trustee::create(config, make_rng(seeded, seed));
    Vetter vetter(trustee.vetter_key_material());
    Server server(trustee.server_public_params(),
                  std::make_unique<JournalStore>(paths.server_prefix));

    write_file_atomic(paths.trustee_file.string(), trustee.export_snapshot());
    write_file_atomic(paths.vetter_file.string(), vetter.export_snapshot());
    std::cout << "initialized trustee, vetter and server state under " << out_dir << "\n";
    return 0;
}

int cmd_add(const std::string& db, const std::string& input, bool seeded, uint64_t seed,
            size_t workers) {
    DbPaths paths(db);
    Trustee trustee = load_trustee(paths, seeded, seed, workers);
    Vetter vetter = load_vetter(paths);
    Server server = load_server(paths);

    std::vector<AddRecord> records = ingest_csv(input);
    auto [batch, delta] = trustee.add_batch(records);
    server.apply_add(batch);
    vetter.apply_delta(delta);

    TranscriptRecorder transcript = load_transcript(paths);
    transcript.record_add(encode_add_batch(batch));
    save_transcript(paths, transcript);

    write_file_atomic(paths.trustee_file.string(), trustee.export_snapshot());
    write_file_atomic(paths.vetter_file.string(), vetter.export_snapshot());
    std::cout << "added " << records.size() << " records (" << batch.iset_inserts.size()
              << " keyword pairs)\n";
    return 0;
}

int cmd_revoke(const std::string& db, const std::string& id) {
    DbPaths paths(db);
    Trustee trustee = load_trustee(paths, false, 0, 1);
    Server server = load_server(paths);

    DeleteToken token = trustee.issue_delete(to_bytes(id));
    DeletionReport report = server.apply_delete(token);

    TranscriptRecorder transcript = load_transcript(paths);
    transcript.record_delete(encode_delete_token(token), report.removed);
    save_transcript(paths, transcript);

    write_file_atomic(paths.trustee_file.string(), trustee.export_snapshot());
    std::cout << "revoked " << id << ": removed " << report.removed << " entries\n";
    return 0;
}

int cmd_search(const std::string& db, const std::string& keyword) {
    DbPaths paths(db);
    Vetter vetter = load_vetter(paths);
    Bytes kw = keyword_argument(keyword);

    auto token = vetter.issue_search(kw);
    if (!token) {
        return 0;  // never-inserted keyword: empty result, no server contact
    }
    Server server = load_server(paths);
    Server::SearchOutcome outcome = server.search(*token);
    IdSet ids = vetter.decrypt_results(kw, outcome.results);

    TranscriptRecorder transcript = load_transcript(paths);
    transcript.record_search(encode_search_token(*token), outcome.results.size());
    save_transcript(paths, transcript);

    for (const Bytes& id : ids) {
        std::cout << to_string(id) << "\n";
    }
    return 0;
}

int cmd_stats(const std::string& db) {
    DbPaths paths(db);
    Server server = load_server(paths);
    StorageMetrics m = storage_metrics(server.store());
    std::cout << "fset_rows " << m.fset_entries << "\n"
              << "iset_entries " << m.iset_entries << "\n"
              << "fset_bytes " << m.fset_bytes << "\n"
              << "iset_bytes " << m.iset_bytes << "\n"
              << "total_bytes " << m.total_bytes() << "\n";
    return 0;
}

int cmd_bench(const std::string& scenario, uint64_t seed, const std::string& out_path,
              double scale, size_t workers) {
    BenchOptions options;
    options.seed = seed;
    options.scale = scale;
    options.add_workers = workers;
    if (out_path.empty() || out_path == "-") {
        bench_scenarios(scenario, options, std::cout);
    } else {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out) throw StorageError("cannot open " + out_path);
        bench_scenarios(scenario, options, out);
        std::cout << "wrote " << out_path << "\n";
    }
    return 0;
}

int cmd_audit(const std::string& db) {
    DbPaths paths(db);
    Server server = load_server(paths);
    TranscriptRecorder transcript = load_transcript(paths);

    AuditReport report = audit_transcript(transcript.events(), *server.params().group,
                                          server.params().perm_pk);
    std::string text = report.to_text();
    write_file_atomic(paths.audit_file.string(), to_bytes(text));
    std::cout << text;
    std::cout << (report.ok() ? "audit clean" : "audit found violations") << " ("
              << transcript.events().size() << " events)\n";
    return report.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Encrypted keyword search over identifier-tagged records with "
                 "constant-size revocation tokens and physical deletion"};
    app.require_subcommand(1);

    uint64_t seed = 0;
    bool seeded = false;
    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "deterministic randomness seed")
            ->each([&](const std::string&) { seeded = true; });
    };

    // setup
    std::string out_dir;
    unsigned perm_bits = 2048;
    CLI::App* setup_cmd = app.add_subcommand("setup", "initialize role state directories");
    setup_cmd->add_option("--out", out_dir, "state root directory")->required();
    setup_cmd->add_option("--perm-bits", perm_bits, "trapdoor permutation modulus bits");
    add_seed(setup_cmd);

    // trustee add / revoke
    std::string db_dir, input_csv, revoke_id;
    size_t workers = 0;
    CLI::App* trustee_cmd = app.add_subcommand("trustee", "trusted writer operations");
    trustee_cmd->require_subcommand(1);
    CLI::App* add_cmd = trustee_cmd->add_subcommand("add", "batch-insert records from a CSV");
    add_cmd->add_option("--db", db_dir, "state root directory")->required();
    add_cmd->add_option("--input", input_csv, "CSV dataset path")->required();
    add_cmd->add_option("--workers", workers, "parallel keyword chains (0 = cores)");
    add_seed(add_cmd);
    CLI::App* revoke_cmd =
        trustee_cmd->add_subcommand("revoke", "physically delete one identifier's data");
    revoke_cmd->add_option("--db", db_dir, "state root directory")->required();
    revoke_cmd->add_option("--id", revoke_id, "identifier to revoke")->required();

    // vetter search
    std::string keyword;
    CLI::App* vetter_cmd = app.add_subcommand("vetter", "query-token issuer operations");
    vetter_cmd->require_subcommand(1);
    CLI::App* search_cmd = vetter_cmd->add_subcommand("search", "search one keyword");
    search_cmd->add_option("--db", db_dir, "state root directory")->required();
    search_cmd->add_option("--keyword", keyword, "keyword (field:value)")->required();

    // server stats
    CLI::App* server_cmd = app.add_subcommand("server", "storage server operations");
    server_cmd->require_subcommand(1);
    CLI::App* stats_cmd = server_cmd->add_subcommand("stats", "print index size metrics");
    stats_cmd->add_option("--db", db_dir, "state root directory")->required();

    // bench
    std::string scenario, bench_out;
    double scale = 1.0;
    CLI::App* bench_cmd = app.add_subcommand("bench", "measurement scenarios (CSV output)");
    bench_cmd->add_option("scenario", scenario, "add | revoke | search | storage | all")
        ->required();
    bench_cmd->add_option("--out", bench_out, "output CSV path (default stdout)");
    bench_cmd->add_option("--scale", scale, "shrink size knobs for quick runs");
    bench_cmd->add_option("--workers", workers, "parallel keyword chains (0 = cores)");
    add_seed(bench_cmd);

    // audit
    CLI::App* audit_cmd = app.add_subcommand("audit", "transcript analysis");
    audit_cmd->require_subcommand(1);
    CLI::App* audit_tr_cmd =
        audit_cmd->add_subcommand("transcript", "structural audit of the server transcript");
    audit_tr_cmd->add_option("--db", db_dir, "state root directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(setup_cmd)) {
            return cmd_setup(out_dir, seeded, seed, perm_bits);
        }
        if (app.got_subcommand(trustee_cmd)) {
            if (trustee_cmd->got_subcommand(add_cmd)) {
                return cmd_add(db_dir, input_csv, seeded, seed, workers);
            }
            return cmd_revoke(db_dir, revoke_id);
        }
        if (app.got_subcommand(vetter_cmd)) {
            return cmd_search(db_dir, keyword);
        }
        if (app.got_subcommand(server_cmd)) {
            return cmd_stats(db_dir);
        }
        if (app.got_subcommand(bench_cmd)) {
            return cmd_bench(scenario, seeded ? seed : 1, bench_out, scale, workers);
        }
        if (app.got_subcommand(audit_cmd)) {
            return cmd_audit(db_dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
