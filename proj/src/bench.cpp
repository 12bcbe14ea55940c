#include "provql/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include "provql/search.hpp"
#include "provql/tstl/parser.hpp"

namespace provql {

namespace {

std::string fnv_hex(const std::vector<std::string>& items) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const auto& s : items) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        h ^= 0xff;  // item separator
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

template <typename Fn>
double timed(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

tstl::Statement single(const std::string& text) {
    auto stmts = tstl::parse(text);
    if (stmts.size() != 1) throw ValidationError("benchmark query must be one statement: " + text);
    return std::move(stmts.front());
}

void check_options(const BenchOptions& opts) {
    if (opts.iterations < 1 || opts.warmup < 0) throw ValidationError("benchmark needs at least one iteration");
}

}  // namespace

std::string result_hash(const Store& store, const RowSet& events) {
    std::vector<std::string> fps;
    fps.reserve(events.size());
    for (Row r : events) fps.push_back(fingerprint(store.event(r), store.entity(store.src(r)), store.entity(store.dst(r))));
    std::sort(fps.begin(), fps.end());
    return fnv_hex(fps);
}

std::string result_hash(const EventGraph& graph) { return fnv_hex(graph.fingerprints()); }

std::vector<BenchRow> bench_search(const Store& store, std::span<const SearchBench> queries, const BenchOptions& opts) {
    check_options(opts);
    std::vector<BenchRow> rows;
    for (const auto& q : queries) {
        const auto stmt = single(q.text);
        const auto* search = std::get_if<tstl::SearchStmt>(&stmt.node);
        if (!search) throw ValidationError("not a search statement: " + q.text);

        auto measure = [&](const std::string& mode, auto&& run) {
            RowSet result;
            for (int i = 0; i < opts.warmup; ++i) result = run();
            std::vector<double> ms;
            for (int i = 0; i < opts.iterations; ++i) ms.push_back(timed([&] { result = run(); }));
            std::unordered_set<Row> nodes;
            for (Row r : result) {
                nodes.insert(store.src(r));
                nodes.insert(store.dst(r));
            }
            return BenchRow{q.id, mode, median(ms), nodes.size(), result.size(), result_hash(store, result)};
        };
        BenchRow scheduled = measure("scheduled", [&] { return execute_search(*search, store).events; });
        BenchRow naive = measure("naive", [&] { return naive_search(*search, store).events; });
        if (scheduled.hash != naive.hash) {
            throw BenchMismatch("query " + q.id + ": scheduled and naive results differ (" + scheduled.hash + " vs " +
                                naive.hash + ")");
        }
        rows.push_back(std::move(scheduled));
        rows.push_back(std::move(naive));
    }
    return rows;
}

std::vector<BenchRow> bench_track(std::shared_ptr<SourceRegistry> sources, std::span<const TrackBench> queries,
                                  const BenchOptions& opts) {
    check_options(opts);
    std::vector<BenchRow> rows;
    for (const auto& q : queries) {
        Session session(sources);
        if (!q.setup.empty()) {
            const auto out = session.run(q.setup);
            if (!out.ok()) {
                throw ValidationError("benchmark setup for " + q.id + " failed: " +
                                      (out.error ? *out.error : out.diagnostics.front().format()));
            }
        }
        for (const auto& [mode, text] : {std::pair<std::string, std::string>{"unconstrained", q.unconstrained},
                                         std::pair<std::string, std::string>{"constrained", q.constrained}}) {
            const auto stmt = single(text);
            if (!std::holds_alternative<tstl::TrackStmt>(stmt.node)) {
                throw ValidationError("not a track statement: " + text);
            }
            auto schema = session.schema();
            const auto diags = tstl::analyze(stmt, schema);
            if (!diags.empty()) throw ValidationError(text + ": " + diags.front().format());
            StatementResult res;
            for (int i = 0; i < opts.warmup; ++i) res = session.execute(stmt);
            std::vector<double> ms;
            for (int i = 0; i < opts.iterations; ++i) ms.push_back(timed([&] { res = session.execute(stmt); }));
            rows.push_back({q.id, mode, median(ms), res.graph->node_count(), res.graph->edge_count(),
                            result_hash(*res.graph)});
        }
    }
    return rows;
}

std::string to_csv(std::span<const BenchRow> rows) {
    std::ostringstream out;
    out << "query-id,mode,ms-median,nodes,edges,hash\n";
    for (const auto& r : rows) {
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.3f", r.ms_median);
        out << r.query_id << ',' << r.mode << ',' << ms << ',' << r.nodes << ',' << r.edges << ',' << r.hash << '\n';
    }
    return out.str();
}

std::vector<SearchBench> default_search_queries() {
    return {
        {"tar-exfil",
         "search from db(x) where e1{name=\"curl\", type=process}, e2{path like \"%.tar\"}, e3{type=network} "
         "with e2[read]->e1 &&[<1s] e1[write]->e3 return *;"},
        {"scp-socket", "search from db(x) where e1{name=\"scp\"}, e2{type=network} with e2[read]->e1 return *;"},
        {"attacker-inbound",
         "search from db(x) where e1{srcip=\"20.69.152.188\" || dstip=\"20.69.152.188\"}, e2{type=process} "
         "with e1[read]->e2 return *;"},
        {"shell-from-web",
         "search from db(x) where e1{name=\"lighttpd\"}, e2{name=\"bash\"}, e3{name=\"curl\"} "
         "with e1[fork]->e2 && e2[fork]->e3 return *;"},
        {"passwd-to-net",
         "search from db(x) where e1{path=\"/etc/passwd\"}, e2{type=process}, e3{type=network} "
         "with e1[read]->e2 &&[<10s] e2[write]->e3 return *;"},
    };
}

std::vector<TrackBench> default_track_queries(const std::string& host) {
    const std::string db = "db(" + host + ")";
    const std::string poi = "search from " + db +
                            " where e1{name=\"curl\", type=process}, e2{path like \"%.tar\"}, e3{type=network}"
                            " with e2[read]->e1 &&[<1s] e1[write]->e3 return * as poi1;";
    return {
        {"poi1-back", poi, "t = back track poi1 from " + db + ";",
         "t = back track poi1 from " + db + " exclude nodes where name=\"vscode\" limit step 3;"},
        {"curl-back", "", "t = back track where exename=\"curl\" from " + db + ";",
         "t = back track where exename=\"curl\" from " + db + " exclude nodes where name=\"vscode\";"},
    };
}

}  // namespace provql
