// provql command-line tool.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "provql/bench.hpp"
#include "provql/cli.hpp"
#include "provql/ingest.hpp"
#include "provql/scenario.hpp"
#include "provql/server.hpp"

using namespace provql;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kRuntime = 3;

std::filesystem::path data_dir() {
    const char* env = std::getenv("PROVQL_DATA_DIR");
    return env ? std::filesystem::path(env) : std::filesystem::path("provql-data");
}

std::filesystem::path snapshot_path(const std::string& name) { return data_dir() / (name + ".snap"); }

std::map<std::string, std::string> parse_db_flags(const std::vector<std::string>& flags) {
    std::map<std::string, std::string> out;
    for (const auto& f : flags) {
        const auto eq = f.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == f.size()) {
            throw CLI::ValidationError("--db", "expected name=snapshot, got '" + f + "'");
        }
        out[f.substr(0, eq)] = f.substr(eq + 1);
    }
    return out;
}

int cmd_ingest(const std::string& file, const std::string& source, const std::string& threshold) {
    ReductionConfig cfg;
    try {
        cfg.threshold = parse_duration(threshold);
    } catch (const ValidationError& e) {
        throw CLI::ValidationError("--merge-threshold", e.what());
    }
    std::ifstream in(file);
    if (!in) throw NotFoundError("cannot open '" + file + "'");
    const auto path = snapshot_path(source);
    Store base(source, {}, {});
    if (std::filesystem::exists(path)) {
        base = Store::load_file(path.string());
        if (base.source() != source) base = Store(source, base.entities(), base.events());
    }
    Database db(std::move(base));
    const IngestStats st = ingest_stream(db, in, cfg);
    std::filesystem::create_directories(data_dir());
    db.snapshot()->save_file(path.string());
    std::cout << "source " << source << ": " << st.records << " records, " << st.malformed << " malformed, "
              << st.failed_filtered << " failed, " << st.unknown_syscall + st.inconsistent << " skipped\n"
              << "reduction: " << st.reduction.merged() << " merged, " << st.reduction.output << " kept\n"
              << "store: " << db.snapshot()->entity_count() << " entities, " << db.snapshot()->event_count()
              << " events (" << st.new_entities << " new entities)\n";
    for (const auto& e : st.errors) std::cerr << "  " << e << '\n';
    return kOk;
}

int cmd_gen(const std::string& tmpl, std::size_t noise, std::uint64_t seed, int hosts, const std::string& out) {
    const auto t = parse_template(tmpl);
    if (!t) throw CLI::ValidationError("--template", "unknown template '" + tmpl + "'");
    ScenarioSpec spec;
    spec.attack = *t;
    spec.noise_events = noise;
    spec.seed = seed;
    spec.hosts = hosts;
    const Scenario s = generate(spec);
    write_scenario(s, out);
    for (const auto& h : s.hosts) std::cout << out << "/" << h.host << ".jsonl: " << h.records.size() << " records\n";
    std::cout << out << "/ground_truth.json\n";
    return kOk;
}

int cmd_db_list() {
    const auto reg = load_sources(data_dir(), {});
    for (const auto& db : reg->list()) {
        const auto snap = db->snapshot();
        std::cout << db->name() << '\t' << snap->entity_count() << " entities\t" << snap->event_count() << " events\n";
    }
    return kOk;
}

int cmd_db_save(const std::string& name, const std::string& file) {
    const auto path = snapshot_path(name);
    if (!std::filesystem::exists(path)) throw NotFoundError("no source named '" + name + "'");
    Store::load_file(path.string()).save_file(file);
    std::cout << "saved " << name << " to " << file << '\n';
    return kOk;
}

int cmd_db_load(const std::string& file, std::string name) {
    Store s = Store::load_file(file);
    if (name.empty()) name = s.source();
    if (s.source() != name) s = Store(name, s.entities(), s.events());
    std::filesystem::create_directories(data_dir());
    s.save_file(snapshot_path(name).string());
    std::cout << "loaded " << file << " as " << name << '\n';
    return kOk;
}

SessionOptions session_options(double budget_s, const std::string& export_root) {
    SessionOptions opts;
    if (budget_s > 0) opts.statement_budget = std::chrono::milliseconds(static_cast<std::int64_t>(budget_s * 1000));
    if (!export_root.empty()) opts.export_root = export_root;
    return opts;
}

int cmd_run(const std::string& script, const std::vector<std::string>& dbs, double budget_s,
            const std::string& export_root) {
    std::ifstream in(script);
    if (!in) throw NotFoundError("cannot open '" + script + "'");
    std::stringstream text;
    text << in.rdbuf();
    Session session(load_sources(data_dir(), parse_db_flags(dbs)), session_options(budget_s, export_root));
    return report(session.run(text.str()), std::cout, std::cerr);
}

int cmd_repl(const std::vector<std::string>& dbs, double budget_s, const std::string& export_root) {
    Session session(load_sources(data_dir(), parse_db_flags(dbs)), session_options(budget_s, export_root));
    run_repl(session, std::cin, std::cout, std::cerr);
    return kOk;
}

int cmd_serve(const std::string& config, const std::string& listen, const std::vector<std::string>& dbs) {
    ServerConfig cfg = config.empty() ? ServerConfig{} : load_server_config(config);
    apply_env_overrides(cfg, [](const char* k) { return std::getenv(k); });
    if (!listen.empty()) {
        const auto colon = listen.rfind(':');
        if (colon == std::string::npos) throw CLI::ValidationError("--listen", "expected host:port");
        cfg.host = listen.substr(0, colon);
        cfg.port = std::stoi(listen.substr(colon + 1));
    }
    for (const auto& [name, file] : parse_db_flags(dbs)) cfg.snapshots[name] = file;
    Server server(load_sources(data_dir(), cfg.snapshots), cfg);
    std::cerr << "listening on " << cfg.host << ":" << cfg.port << '\n';
    if (!server.listen()) {
        std::cerr << "error: cannot listen on " << cfg.host << ":" << cfg.port << '\n';
        return kRuntime;
    }
    return kOk;
}

int cmd_bench(std::size_t noise, std::uint64_t seed, const BenchOptions& opts, const std::string& out_file) {
    ScenarioSpec spec;
    spec.hosts = 1;
    spec.noise_events = noise;
    spec.seed = seed;
    const Scenario s = generate(spec);
    auto reg = std::make_shared<SourceRegistry>();
    reg->add(std::make_shared<Database>(ingest_host(s.hosts.front())));
    const auto store = reg->get(s.hosts.front().host)->snapshot();
    std::cerr << "store: " << store->event_count() << " events\n";

    const auto queries = default_search_queries();
    auto rows = bench_search(*store, queries, opts);
    const auto tracks = default_track_queries(s.hosts.front().host);
    const auto track_rows = bench_track(reg, tracks, opts);
    rows.insert(rows.end(), track_rows.begin(), track_rows.end());
    const std::string csv = to_csv(rows);
    if (out_file.empty()) {
        std::cout << csv;
    } else {
        std::ofstream(out_file) << csv;
    }
    for (std::size_t i = 0; i + 1 < track_rows.size(); i += 2) {
        const double ratio = track_rows[i + 1].edges == 0 ? 0
                                                           : static_cast<double>(track_rows[i].edges) /
                                                                 static_cast<double>(track_rows[i + 1].edges);
        std::cerr << track_rows[i].query_id << ": " << ratio << "x fewer edges when constrained\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"provql: provenance queries over system audit logs"};
    app.require_subcommand(1);

    std::string file, source;
    std::string threshold = "1s";
    auto* ingest = app.add_subcommand("ingest", "Ingest a JSONL audit log into a named source");
    ingest->add_option("file", file, "JSONL records")->required();
    ingest->add_option("--source", source, "Source name")->required();
    ingest->add_option("--merge-threshold", threshold, "Reduction merge threshold, e.g. 1s, 500ms, 2m");

    std::string tmpl = "data-leakage", out = ".";
    std::size_t noise = 0;
    std::uint64_t seed = 1;
    int hosts = 2;
    auto* gen = app.add_subcommand("gen", "Generate a scenario with a planted attack");
    gen->add_option("--template", tmpl, "data-leakage, shellshock-penetration or wget-executable");
    gen->add_option("--noise", noise, "Background events per host");
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--hosts", hosts, "Number of hosts")->check(CLI::PositiveNumber);
    gen->add_option("--out", out, "Output directory")->required();

    auto* db = app.add_subcommand("db", "Manage stored sources");
    db->require_subcommand(1);
    db->add_subcommand("list", "List sources");
    std::string db_name, db_file;
    auto* db_save = db->add_subcommand("save", "Write a source snapshot to a file");
    db_save->add_option("name", db_name)->required();
    db_save->add_option("file", db_file)->required();
    auto* db_load = db->add_subcommand("load", "Register a snapshot file as a source");
    db_load->add_option("file", db_file)->required();
    db_load->add_option("--name", db_name, "Source name (default: the snapshot's own)");

    std::string script, export_root;
    std::vector<std::string> dbs;
    double budget = 0;
    auto* run = app.add_subcommand("run", "Execute a .tstl script");
    run->add_option("script", script)->required();
    run->add_option("--db", dbs, "name=snapshot, repeatable");
    run->add_option("--budget", budget, "Per-statement time budget in seconds");
    run->add_option("--export-root", export_root, "Confine exports to this directory");

    auto* repl = app.add_subcommand("repl", "Interactive session");
    repl->add_option("--db", dbs, "name=snapshot, repeatable");
    repl->add_option("--budget", budget, "Per-statement time budget in seconds");
    repl->add_option("--export-root", export_root, "Confine exports to this directory");

    std::string config, listen;
    auto* serve = app.add_subcommand("serve", "Start the HTTP API");
    serve->add_option("--config", config, "JSON config file");
    serve->add_option("--listen", listen, "host:port");
    serve->add_option("--db", dbs, "name=snapshot, repeatable");

    BenchOptions bench_opts;
    std::size_t bench_noise = 1000000;
    std::string bench_out;
    auto* bench = app.add_subcommand("bench", "Scheduled vs naive search, constrained vs unconstrained tracking");
    bench->add_option("--noise", bench_noise, "Background events in the generated store");
    bench->add_option("--seed", seed, "Random seed");
    bench->add_option("--iterations", bench_opts.iterations)->check(CLI::PositiveNumber);
    bench->add_option("--warmup", bench_opts.warmup)->check(CLI::NonNegativeNumber);
    bench->add_option("--out", bench_out, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*ingest) return cmd_ingest(file, source, threshold);
        if (*gen) return cmd_gen(tmpl, noise, seed, hosts, out);
        if (*db) {
            if (*db_save) return cmd_db_save(db_name, db_file);
            if (*db_load) return cmd_db_load(db_file, db_name);
            return cmd_db_list();
        }
        if (*run) return cmd_run(script, dbs, budget, export_root);
        if (*repl) return cmd_repl(dbs, budget, export_root);
        if (*serve) return cmd_serve(config, listen, dbs);
        if (*bench) return cmd_bench(bench_noise, seed, bench_opts, bench_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kUsage;
}
