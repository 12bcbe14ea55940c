// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>

#include "corpus.hpp"
#include "gen.hpp"
#include "oracles.hpp"
#include "provql/bench.hpp"
#include "provql/reduction.hpp"
#include "provql/runtime.hpp"
#include "provql/scenario.hpp"
#include "provql/search.hpp"
#include "provql/tracking.hpp"
#include "provql/tstl/parser.hpp"

using namespace provql;
using namespace provql::testing;

namespace {

// Pinned limits.
constexpr double kGrammarBudgetS = 60;
constexpr double kReductionBudgetS = 60;
constexpr double kTrackingBudgetS = 300;
constexpr double kSearchBudgetS = 600;
constexpr double kEndToEndBudgetS = 300;
constexpr double kExplosionBudgetS = 120;
constexpr double kSchedulerBudgetS = 600;
constexpr double kAlgebraBudgetS = 60;

constexpr std::size_t kFuzzInputs = 1'000'000;
constexpr std::size_t kRoundTripStatements = 20'000;
constexpr int kReductionTrials = 1000;
constexpr std::size_t kReductionMaxEvents = 30;
constexpr int kTrackingStores = 500;
constexpr std::size_t kTrackingMaxEvents = 300;
constexpr int kSearchStores = 500;
constexpr std::size_t kSearchMaxEvents = 3000;
constexpr int kSearchMaxRels = 3;
constexpr int kSearchQueriesPerStore = 4;
// Oracle overflows may skip at most this share of search trials.
constexpr double kSearchMaxSkipShare = 0.02;
constexpr std::size_t kScenarioNoise = 100'000;
constexpr std::uint64_t kScenarioSeed = 1;
constexpr double kExplosionMinRatio = 10.0;
constexpr std::size_t kSchedulerMinEvents = 1'000'000;
constexpr int kAlgebraPairs = 1000;

struct Outcome {
    bool ok = true;
    std::string detail;
    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

int g_failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget_s) {
        out.fail("runtime " + std::to_string(secs) + " s over budget " + std::to_string(budget_s) + " s");
    }
    if (!out.ok) ++g_failures;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.1f s / %.0f s", secs, budget_s);
    std::cout << (out.ok ? "PASS " : "FAIL ") << name << " [" << timing << "] " << out.detail << std::endl;
}

std::string show(const std::set<Row>& s) {
    std::ostringstream o;
    o << "{";
    for (Row r : s) o << r << " ";
    o << "}";
    return o.str();
}

// ---------------------------------------------------------------------------

std::string mutate(Rng& rng, std::string s) {
    static const std::vector<std::string> fragments = {
        "search", "from", "where", "with", "return", "*", "as", "db(", ")", "(", "{", "}", "[", "]",
        "->", "&&", "||", "!", "|", "&", "-", ";", ",", "=", "!=", "<", "<=", ">", ">=", "like",
        "back", "forward", "track", "include", "exclude", "nodes", "edges", "limit", "step", "time",
        "display", "export", "\"", "\"x\"", "1s", "500ms", "2m", "99999999999999999999", "e1", "//",
        "\n", " ", "read", "type", "process"};
    const int edits = static_cast<int>(rng.range(1, 6));
    for (int i = 0; i < edits; ++i) {
        const std::size_t pos = s.empty() ? 0 : rng.below(s.size() + 1);
        switch (rng.below(4)) {
            case 0:
                if (!s.empty() && pos < s.size()) s.erase(pos, rng.range(1, 8));
                break;
            case 1: s.insert(pos, fragments[rng.below(fragments.size())]); break;
            case 2:
                if (!s.empty() && pos < s.size()) s[pos] = static_cast<char>(rng.below(256));
                break;
            default: {
                if (s.empty()) break;
                const std::size_t from = rng.below(s.size());
                s.insert(pos, s.substr(from, rng.range(1, 20)));
            }
        }
    }
    return s;
}

Outcome grammar() {
    Outcome out;
    std::size_t parsed = 0;
    auto check_roundtrip = [&](std::string_view text) {
        const auto stmts = tstl::parse(text);
        const std::string printed = tstl::to_tstl(stmts);
        const auto again = tstl::parse(printed);
        if (!tstl::ast_equal(stmts, again)) out.fail("round-trip mismatch: " + std::string(text));
        ++parsed;
    };
    for (auto q : kInvestigation) check_roundtrip(q);
    for (auto q : kGrammarCorpus) check_roundtrip(q);
    const std::size_t fixed = parsed;

    Rng rng(20240601);
    for (std::size_t i = 0; i < kRoundTripStatements && out.ok; ++i) check_roundtrip(random_statement(rng));

    std::vector<std::string> seeds(kInvestigation.begin(), kInvestigation.end());
    seeds.insert(seeds.end(), kGrammarCorpus.begin(), kGrammarCorpus.end());
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    for (std::size_t i = 0; i < kFuzzInputs && out.ok; ++i) {
        std::string input;
        if (i % 10 == 0) {
            input.resize(rng.below(120));
            for (auto& c : input) c = static_cast<char>(rng.below(256));
        } else {
            input = mutate(rng, seeds[rng.below(seeds.size())]);
        }
        try {
            tstl::parse(input);
            ++accepted;
        } catch (const tstl::ParseError&) {
            ++rejected;
        } catch (const std::exception& e) {
            out.fail(std::string("fuzz input raised ") + e.what());
        }
    }
    out.detail = std::to_string(fixed) + " fixed statements, " + std::to_string(parsed - fixed) +
                 " generated round-trips, " + std::to_string(accepted + rejected) + " fuzz inputs (" +
                 std::to_string(accepted) + " accepted, " + std::to_string(rejected) + " rejected)";
    return out;
}

// ---------------------------------------------------------------------------

std::vector<Event> random_group_events(Rng& rng) {
    const std::size_t n = rng.range(0, kReductionMaxEvents);
    const int groups = static_cast<int>(rng.range(1, 3));
    std::vector<Nanos> cursor(groups, rng.range(0, kNanosPerSecond));
    std::vector<Event> out;
    for (std::size_t i = 0; i < n; ++i) {
        const int g = static_cast<int>(rng.below(groups));
        Event e;
        e.id = static_cast<EventId>(i);
        e.src = static_cast<EntityId>(g);
        e.dst = 10;
        e.op = g == 2 ? Op::Write : Op::Read;
        // Gaps straddle the 1 s threshold; negative gaps overlap the predecessor.
        const Nanos gap = rng.range(-kNanosPerSecond / 2, 2 * kNanosPerSecond);
        e.start = std::max<Nanos>(0, cursor[g] + gap);
        e.end = e.start + rng.range(0, kNanosPerSecond);
        cursor[g] = e.end;
        e.amount = rng.below(1000);
        out.push_back(e);
    }
    // Within a group, starts must be ordered; sort each group's starts.
    for (int g = 0; g < groups; ++g) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (out[i].src == static_cast<EntityId>(g)) idx.push_back(i);
        }
        std::vector<std::pair<Nanos, Nanos>> windows;
        for (auto i : idx) windows.emplace_back(out[i].start, out[i].end);
        std::sort(windows.begin(), windows.end());
        for (std::size_t k = 0; k < idx.size(); ++k) std::tie(out[idx[k]].start, out[idx[k]].end) = windows[k];
    }
    std::stable_sort(out.begin(), out.end(), [](const Event& a, const Event& b) { return a.start < b.start; });
    return out;
}

std::uint64_t total_amount(const std::vector<Event>& v) {
    std::uint64_t s = 0;
    for (const auto& e : v) s += e.amount;
    return s;
}

Outcome reduction() {
    Outcome out;
    const ReductionConfig defaults;
    if (defaults.threshold != kNanosPerSecond) out.fail("default threshold is not 1 s");
    Rng rng(77);
    std::size_t merged = 0;
    for (int t = 0; t < kReductionTrials && out.ok; ++t) {
        const auto events = random_group_events(rng);
        const auto got = provql::reduce(events, defaults);
        const auto want = reduce_fixpoint(events, defaults.threshold, rng);
        if (got != want) out.fail("oracle mismatch in trial " + std::to_string(t));
        if (total_amount(got) != total_amount(events)) out.fail("amount not conserved in trial " + std::to_string(t));
        if (provql::reduce(got, defaults) != got) out.fail("not idempotent in trial " + std::to_string(t));
        merged += events.size() - got.size();
    }
    if (out.ok) {
        out.detail = std::to_string(kReductionTrials) + " trials, " + std::to_string(merged) +
                     " merges, default threshold 1 s";
    }
    return out;
}

// ---------------------------------------------------------------------------

bool has_time_attr(const Expr* e) {
    for (Attr a : referenced_attrs(e)) {
        if (a == Attr::StartTime || a == Attr::EndTime) return true;
    }
    return false;
}

Outcome tracking() {
    Outcome out;
    Rng rng(4242);
    std::size_t total_events = 0;
    std::size_t nonempty = 0;
    for (int t = 0; t < kTrackingStores && out.ok; ++t) {
        StoreShape shape;
        shape.events = rng.range(1, kTrackingMaxEvents);
        shape.processes = rng.range(2, 15);
        shape.files = rng.range(1, 15);
        shape.sockets = rng.range(0, 5);
        shape.span = 1000;
        shape.max_duration = rng.range(0, 40);
        const Store store = random_store(rng, shape);
        const Store mirror = mirrored(store);

        for (auto dir : {tstl::TrackDir::Backward, tstl::TrackDir::Forward}) {
            ExprPtr inc_n, inc_e, exc_n, exc_e;
            auto node_pred = [&] { return tstl::parse_expr(random_entity_pred(rng, 1)); };
            auto edge_pred = [&] {
                for (;;) {
                    auto e = tstl::parse_expr(random_event_pred(rng, shape.span, 1));
                    if (!has_time_attr(e.get())) return e;
                }
            };
            if (rng.chance(0.3)) inc_n = node_pred();
            if (rng.chance(0.2)) inc_e = edge_pred();
            if (rng.chance(0.4)) exc_n = node_pred();
            if (rng.chance(0.3)) exc_e = edge_pred();

            TrackRequest req;
            req.dir = dir;
            req.include_nodes = inc_n.get();
            req.include_edges = inc_e.get();
            req.exclude_nodes = exc_n.get();
            req.exclude_edges = exc_e.get();
            if (rng.chance(0.5)) req.step_limit = rng.range(1, 5);
            if (rng.chance(0.5) && store.event_count() > 0) {
                const std::size_t k = rng.range(1, 3);
                for (std::size_t i = 0; i < k; ++i) req.seed_events.push_back(rng.below(store.event_count()));
                std::sort(req.seed_events.begin(), req.seed_events.end());
                req.seed_events.erase(std::unique(req.seed_events.begin(), req.seed_events.end()),
                                      req.seed_events.end());
                req.seeds = seeds_from_events(store, req.seed_events, dir);
            } else {
                const std::size_t k = rng.range(1, 3);
                for (std::size_t i = 0; i < k; ++i) {
                    const Nanos bound = rng.chance(0.3) ? (dir == tstl::TrackDir::Backward ? kMaxNanos : kMinNanos + 1)
                                                        : rng.range(0, shape.span);
                    req.seeds.push_back({static_cast<Row>(rng.below(store.entity_count())), bound});
                }
            }

            const auto got = track(store, req);
            const std::set<Row> engine(got.events.begin(), got.events.end());
            const auto oracle = track_closure(store, req);
            if (engine != oracle) {
                out.fail("store " + std::to_string(t) + ": engine " + show(engine) + " oracle " + show(oracle));
                break;
            }

            // Same request on the mirrored store, opposite direction.
            TrackRequest dual = req;
            dual.dir = dir == tstl::TrackDir::Backward ? tstl::TrackDir::Forward : tstl::TrackDir::Backward;
            for (auto& s : dual.seeds) s.bound = -s.bound;
            const auto mirrored_result = track(mirror, dual);
            if (mirrored_result.events != got.events) {
                out.fail("duality broken on store " + std::to_string(t));
                break;
            }
            total_events += engine.size();
            if (!engine.empty()) ++nonempty;
        }
    }
    if (out.ok) {
        out.detail = std::to_string(kTrackingStores) + " stores x 2 directions, " + std::to_string(nonempty) +
                     " non-empty results, " + std::to_string(total_events) + " events matched";
    }
    return out;
}

// ---------------------------------------------------------------------------

Outcome search() {
    Outcome out;
    Rng rng(9001);
    std::size_t skipped = 0;
    std::size_t queries = 0;
    std::size_t nonempty = 0;
    std::size_t matched = 0;
    for (int t = 0; t < kSearchStores && out.ok; ++t) {
        StoreShape shape;
        // Log-uniform sizes up to the cap.
        const double u = rng.unit();
        const double lo = std::log(20.0);
        const double hi = std::log(static_cast<double>(kSearchMaxEvents));
        shape.events = static_cast<std::size_t>(std::exp(lo + u * (hi - lo)));
        shape.processes = rng.range(4, 40);
        shape.files = rng.range(4, 60);
        shape.sockets = rng.range(1, 12);
        shape.span = 60 * kNanosPerSecond;
        shape.max_duration = rng.range(0, 3 * kNanosPerSecond);
        const Store store = random_store(rng, shape, "r");
        for (int q = 0; q < kSearchQueriesPerStore && out.ok; ++q) {
            const std::string text = random_search(rng, "r", kSearchMaxRels, shape.span);
            const auto stmts = tstl::parse(text);
            const auto& stmt = std::get<tstl::SearchStmt>(stmts.front().node);

            std::set<Row> oracle;
            try {
                oracle = nested_loop_search(stmt, store);
            } catch (const std::length_error&) {
                ++skipped;
                continue;
            }
            auto as_set = [](const SearchResult& r) { return std::set<Row>(r.events.begin(), r.events.end()); };

            SearchOptions scheduled;
            const auto a = as_set(execute_search(stmt, store, scheduled));
            SearchOptions plain;
            plain.propagate = false;
            const auto b = as_set(execute_search(stmt, store, plain));
            SearchOptions shuffled;
            const std::size_t n = decompose(stmt).components.size();
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
            shuffled.order = order;
            const auto c = as_set(execute_search(stmt, store, shuffled));

            if (a != oracle) out.fail("store " + std::to_string(t) + " scheduled != oracle for " + text);
            if (b != oracle) out.fail("store " + std::to_string(t) + " unpropagated != oracle for " + text);
            if (c != oracle) out.fail("store " + std::to_string(t) + " permuted order != oracle for " + text);
            if (!oracle.empty()) ++nonempty;
            matched += oracle.size();
            ++queries;
        }
    }
    if (out.ok && static_cast<double>(skipped) > kSearchMaxSkipShare * (queries + skipped)) {
        out.fail(std::to_string(skipped) + " trials skipped on oracle overflow");
    }
    if (out.ok) {
        out.detail = std::to_string(kSearchStores) + " stores, " + std::to_string(queries) + " queries compared (" +
                     std::to_string(skipped) + " skipped on oracle overflow), " + std::to_string(nonempty) +
                     " non-empty, " + std::to_string(matched) + " events matched";
    }
    return out;
}

// ---------------------------------------------------------------------------

struct PlantedCase {
    Scenario scenario;
    std::shared_ptr<SourceRegistry> registry;
};

PlantedCase& planted() {
    static PlantedCase c = [] {
        PlantedCase p;
        ScenarioSpec spec;
        spec.seed = kScenarioSeed;
        spec.hosts = 2;
        spec.noise_events = kScenarioNoise;
        p.scenario = generate(spec);
        p.registry = std::make_shared<SourceRegistry>();
        for (const auto& h : p.scenario.hosts) p.registry->add(std::make_shared<Database>(ingest_host(h)));
        return p;
    }();
    return c;
}

Outcome end_to_end() {
    Outcome out;
    auto& p = planted();
    const auto& truth = p.scenario.truth.hosts.at(p.scenario.truth.investigated_host);
    Session session(p.registry);
    const auto result = session.run(investigation_script(p.scenario.truth.investigated_host));
    if (!result.ok()) {
        out.fail("script failed: " + (result.error ? *result.error : result.diagnostics.front().format()));
        return out;
    }
    const auto g5 = session.var("g5");
    const auto got = g5->fingerprints();
    std::vector<std::string> missing, extra;
    std::set_difference(truth.events.begin(), truth.events.end(), got.begin(), got.end(), std::back_inserter(missing));
    std::set_difference(got.begin(), got.end(), truth.events.begin(), truth.events.end(), std::back_inserter(extra));
    if (!missing.empty() || !extra.empty()) {
        out.fail(std::to_string(missing.size()) + " missing, " + std::to_string(extra.size()) + " extra");
    }
    std::size_t store_events = 0;
    for (const auto& db : p.registry->list()) store_events += db->snapshot()->event_count();
    out.detail += (out.ok ? "" : "; ") + std::string("g5 ") + std::to_string(g5->node_count()) + " nodes, " +
                  std::to_string(g5->edge_count()) + " edges; ground truth " + std::to_string(truth.events.size()) +
                  " events; 0 missing, 0 extra; " + std::to_string(store_events) + " stored events across hosts";
    if (!out.ok) out.detail = out.detail.substr(0, out.detail.find("; 0 missing"));
    return out;
}

Outcome explosion() {
    Outcome out;
    auto& p = planted();
    const std::string host = p.scenario.truth.investigated_host;
    const auto& truth = p.scenario.truth.hosts.at(host);
    const std::string db = "db(" + host + ")";
    Session session(p.registry);
    const std::string script = std::string(kInvestigation[0]) + "\n" +
                               "wide = back track poi1 from " + db + ";\n" +
                               "narrow = back track poi1 from " + db +
                               " exclude nodes where name=\"vscode\" limit step 3;\n";
    const auto result = session.run(script);
    if (!result.ok()) {
        out.fail("script failed");
        return out;
    }
    const auto wide = session.var("wide");
    const auto narrow = session.var("narrow");
    const double ratio = static_cast<double>(wide->edge_count()) / std::max<std::size_t>(1, narrow->edge_count());
    // The chain reaching the POI: every ground-truth event that precedes
    // the exfiltration write.
    const auto poi = session.var("poi1");
    Nanos poi_end = kMinNanos;
    for (const auto& [k, e] : poi->events()) poi_end = std::max(poi_end, e.end);
    std::size_t contained = 0;
    const auto fps = narrow->fingerprints();
    const std::set<std::string> have(fps.begin(), fps.end());
    const auto wide_fps = wide->fingerprints();
    const std::set<std::string> wide_have(wide_fps.begin(), wide_fps.end());
    std::size_t in_wide = 0;
    for (const auto& fp : truth.events) {
        if (wide_have.count(fp)) {
            ++in_wide;
            if (have.count(fp)) ++contained;
        }
    }
    if (ratio < kExplosionMinRatio) out.fail("reduction ratio below 10x");
    if (contained != in_wide) out.fail("constrained graph lost ground-truth events");
    if (in_wide == 0) out.fail("no ground-truth event reachable from the POI");
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "unconstrained %zu edges / %zu nodes, constrained %zu edges / %zu nodes, ratio %.1fx; "
                  "%zu/%zu reachable ground-truth events kept",
                  wide->edge_count(), wide->node_count(), narrow->edge_count(), narrow->node_count(), ratio, contained,
                  in_wide);
    out.detail = out.ok ? buf : out.detail + "; " + buf;
    return out;
}

// ---------------------------------------------------------------------------

Outcome scheduler() {
    Outcome out;
    ScenarioSpec spec;
    spec.seed = 7;
    spec.hosts = 1;
    spec.noise_events = kSchedulerMinEvents;
    Store store;
    // Reduction merges some noise; grow the budget until the store holds 1M events.
    for (;;) {
        Scenario s = generate(spec);
        store = ingest_host(s.hosts.front());
        if (store.event_count() >= kSchedulerMinEvents) break;
        spec.noise_events = spec.noise_events * 5 / 4;
    }
    const auto queries = default_search_queries();
    BenchOptions opts;
    const auto rows = bench_search(store, queries, opts);
    std::string table;
    for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
        const auto& s = rows[i];
        const auto& n = rows[i + 1];
        if (s.hash != n.hash) out.fail("hash mismatch on " + s.query_id);
        if (s.ms_median > n.ms_median) out.fail(s.query_id + " scheduled slower than naive");
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s%s %.2f/%.2f ms (%zu edges)", table.empty() ? "" : "; ", s.query_id.c_str(), s.ms_median, n.ms_median,
                      s.edges);
        table += buf;
    }
    out.detail = (out.ok ? "" : out.detail + "; ") + std::to_string(store.event_count()) +
                 " events; scheduled/naive medians: " + table;
    return out;
}

// ---------------------------------------------------------------------------

Outcome algebra() {
    Outcome out;
    Rng rng(31337);
    StoreShape shape;
    shape.events = 200;
    const Store s1 = random_store(rng, shape, "h1");
    const Store s2 = random_store(rng, shape, "h2");
    auto pick = [&]() {
        const Store& s = rng.chance(0.5) ? s1 : s2;
        EventGraph g = random_subgraph(rng, s, rng.unit() * 0.3, rng.unit() * 0.05);
        if (rng.chance(0.3)) {
            const Store& o = &s == &s1 ? s2 : s1;
            g = graph_union(g, random_subgraph(rng, o, 0.05, 0.01));
        }
        return g;
    };
    for (int t = 0; t < kAlgebraPairs && out.ok; ++t) {
        const EventGraph a = pick();
        const EventGraph b = pick();
        const EventGraph c = pick();
        const auto u = graph_union(a, b);
        const auto i = graph_intersection(a, b);
        const auto d = graph_difference(a, b);
        const std::string at = " (pair " + std::to_string(t) + ")";
        for (const auto* g : {&u, &i, &d}) {
            if (!g->closed()) out.fail("open graph" + at);
        }
        if (graph_union(a, a) != a) out.fail("a|a != a" + at);
        if (to_sets(graph_intersection(a, a)).events != to_sets(a).events) out.fail("a&a events != a" + at);
        if (!graph_difference(a, a).empty()) out.fail("a-a not empty" + at);
        if (u != graph_union(b, a)) out.fail("| not commutative" + at);
        if (i != graph_intersection(b, a)) out.fail("& not commutative" + at);
        if (graph_union(graph_union(a, b), c) != graph_union(a, graph_union(b, c))) out.fail("| not associative" + at);
        if (graph_intersection(graph_intersection(a, b), c) != graph_intersection(a, graph_intersection(b, c))) {
            out.fail("& not associative" + at);
        }
        const auto sa = to_sets(a);
        const auto sb = to_sets(b);
        if (to_sets(u) != sets_union(sa, sb)) out.fail("| differs from set model" + at);
        if (to_sets(i) != sets_intersection(sa, sb)) out.fail("& differs from set model" + at);
        if (to_sets(d) != sets_difference(sa, sb)) out.fail("- differs from set model" + at);
        const auto sd = to_sets(d);
        if (!std::includes(sa.events.begin(), sa.events.end(), sd.events.begin(), sd.events.end())) {
            out.fail("a-b not within a" + at);
        }
    }
    if (out.ok) out.detail = std::to_string(kAlgebraPairs) + " random graph triples";
    return out;
}

}  // namespace

int main() {
    criterion("grammar-conformance", kGrammarBudgetS, grammar);
    criterion("reduction-correctness", kReductionBudgetS, reduction);
    criterion("tracking-oracle", kTrackingBudgetS, tracking);
    criterion("search-oracle", kSearchBudgetS, search);
    criterion("end-to-end-planted-attack", kEndToEndBudgetS, end_to_end);
    criterion("explosion-mitigation", kExplosionBudgetS, explosion);
    criterion("scheduler-sanity", kSchedulerBudgetS, scheduler);
    criterion("graph-algebra", kAlgebraBudgetS, algebra);
    std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
