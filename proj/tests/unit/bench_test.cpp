#include <gtest/gtest.h>

#include "gen.hpp"
#include "provql/bench.hpp"
#include "provql/scenario.hpp"

using namespace provql;

namespace {

const BenchOptions kQuick{0, 1};

}  // namespace

TEST(Bench, EmptyQuerySet) {
    const Store s = provql::testing::planted_query_one();
    EXPECT_TRUE(bench_search(s, {}, kQuick).empty());
    EXPECT_EQ(to_csv({}), "query-id,mode,ms-median,nodes,edges,hash\n");
}

TEST(Bench, HashIsFnvOverSortedFingerprints) {
    // Expected values from a separate script over the fingerprint strings.
    const Store s = provql::testing::planted_query_one();
    EXPECT_EQ(result_hash(s, RowSet{}), "cbf29ce484222325");
    EXPECT_EQ(result_hash(EventGraph{}), "cbf29ce484222325");
    const RowSet rows({1, 0});
    EXPECT_EQ(result_hash(s, rows), "d23f86a7711a6fd7");
    const std::vector<Row> v = {0, 1};
    EXPECT_EQ(result_hash(s.subgraph(v)), "d23f86a7711a6fd7");
}

TEST(Bench, SearchRowsPairUp) {
    const Store s = provql::testing::planted_query_one();
    const std::vector<SearchBench> qs = {
        {"q1",
         "search from db(x) where e1{name=\"curl\", type=process}, e2{path like \"%.tar\"}, e3{type=network} "
         "with e2[read]->e1 &&[<1s] e1[write]->e3 return *;"},
        {"none", "search from db(x) where a{name=\"wget\"}, b{type=file} with b[read]->a return *;"},
    };
    const auto rows = bench_search(s, qs, kQuick);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].mode, "scheduled");
    EXPECT_EQ(rows[1].mode, "naive");
    EXPECT_EQ(rows[0].query_id, "q1");
    EXPECT_EQ(rows[0].edges, 2u);
    EXPECT_EQ(rows[0].nodes, 3u);
    EXPECT_EQ(rows[0].hash, "d23f86a7711a6fd7");
    EXPECT_EQ(rows[0].hash, rows[1].hash);
    EXPECT_EQ(rows[2].edges, 0u);
    EXPECT_EQ(rows[2].hash, rows[3].hash);

    const std::string csv = to_csv(rows);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
    EXPECT_NE(csv.find("\nq1,scheduled,"), std::string::npos);
    EXPECT_NE(csv.find(",3,2,d23f86a7711a6fd7\n"), std::string::npos);
}

TEST(Bench, RejectsBadInput) {
    const Store s = provql::testing::planted_query_one();
    const std::vector<SearchBench> track = {{"t", "back track where name=\"curl\" from db(x);"}};
    EXPECT_THROW(bench_search(s, track, kQuick), ValidationError);
    const std::vector<SearchBench> ok = {{"q", "search from db(x) where a{type=file}, b{type=process} with a->b return *;"}};
    EXPECT_THROW(bench_search(s, ok, BenchOptions{0, 0}), ValidationError);
}

TEST(Bench, ConstrainedTrackingIsSmaller) {
    ScenarioSpec spec;
    spec.hosts = 1;
    spec.noise_events = 20000;
    spec.seed = 5;
    const Scenario sc = generate(spec);
    auto reg = std::make_shared<SourceRegistry>();
    reg->add(std::make_shared<Database>(ingest_host(sc.hosts.front())));
    const auto qs = default_track_queries(sc.hosts.front().host);
    const auto rows = bench_track(reg, qs, kQuick);
    ASSERT_EQ(rows.size(), 2 * qs.size());
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        EXPECT_EQ(rows[i].mode, "unconstrained");
        EXPECT_EQ(rows[i + 1].mode, "constrained");
        EXPECT_GT(rows[i + 1].edges, 0u) << rows[i].query_id;
        EXPECT_LT(rows[i + 1].edges, rows[i].edges) << rows[i].query_id;
        EXPECT_NE(rows[i + 1].hash, rows[i].hash);
    }
}

TEST(Bench, DefaultSearchQueriesAgreeOnScenario) {
    ScenarioSpec spec;
    spec.hosts = 1;
    spec.noise_events = 20000;
    spec.seed = 6;
    const Store s = ingest_host(generate(spec).hosts.front());
    const auto qs = default_search_queries();
    ASSERT_FALSE(qs.empty());
    const auto rows = bench_search(s, qs, kQuick);
    ASSERT_EQ(rows.size(), 2 * qs.size());
    EXPECT_GT(rows[0].edges, 0u);
}
