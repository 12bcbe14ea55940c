#include <gtest/gtest.h>

#include <sstream>

#include "gen.hpp"
#include "provql/store.hpp"
#include "provql/tstl/parser.hpp"

using namespace provql;

namespace {

Store small_store() {
    Rng rng(2);
    provql::testing::StoreShape shape;
    shape.events = 400;
    return provql::testing::random_store(rng, shape, "s");
}

std::vector<Row> brute_neighbors(const Store& s, Row entity, Direction dir, std::optional<TimeBound> b) {
    std::vector<Row> out;
    for (Row r = 0; r < s.event_count(); ++r) {
        if ((dir == Direction::In ? s.dst(r) : s.src(r)) != entity) continue;
        if (b && !b->admits(s.event(r))) continue;
        out.push_back(r);
    }
    std::stable_sort(out.begin(), out.end(), [&](Row a, Row c) { return s.event(a).start < s.event(c).start; });
    return out;
}

}  // namespace

TEST(Store, IndexedAndLinearScansAgree) {
    Rng rng(8);
    for (int t = 0; t < 40; ++t) {
        provql::testing::StoreShape shape;
        shape.events = rng.range(0, 5000);
        shape.processes = rng.range(1, 30);
        shape.files = rng.range(1, 30);
        const Store s = provql::testing::random_store(rng, shape);
        for (int q = 0; q < 25; ++q) {
            const auto pred = tstl::parse_expr(provql::testing::random_entity_pred(rng, 2));
            for (auto kind : {std::optional<EntityKind>{}, std::optional{EntityKind::Process}}) {
                EXPECT_EQ(s.scan_entities(kind, pred.get()), s.scan_entities_linear(kind, pred.get()));
            }
            const auto epred = tstl::parse_expr(provql::testing::random_event_pred(rng, shape.span, 1));
            const RowSet src = s.scan_entities(std::nullopt, pred.get());
            std::optional<TimeWindow> w;
            if (rng.chance(0.5)) w = TimeWindow{rng.range(0, 500), rng.range(500, 1000)};
            EXPECT_EQ(s.scan_events(epred.get(), &src, nullptr, w), s.scan_events_linear(epred.get(), &src, nullptr, w));
            EXPECT_EQ(s.scan_events(epred.get(), nullptr, &src), s.scan_events_linear(epred.get(), nullptr, &src));
        }
    }
}

TEST(Store, IpIndexServesEquality) {
    const Store s = small_store();
    const auto pred = tstl::parse_expr("dstip=\"20.69.152.188\"");
    const RowSet rows = s.scan_entities(std::nullopt, pred.get());
    for (Row r : rows) EXPECT_EQ(s.entity(r).network()->dstip, "20.69.152.188");
    EXPECT_EQ(rows, s.scan_entities_linear(std::nullopt, pred.get()));
    EXPECT_EQ(s.selectivity_count(pred.get()), rows.size());
}

TEST(Store, ScanEdgeCases) {
    const Store s = small_store();
    const RowSet empty;
    EXPECT_TRUE(s.scan_events(nullptr, &empty).empty());
    EXPECT_EQ(s.scan_events(nullptr).size(), s.event_count());
    EXPECT_TRUE(s.scan_entities(std::nullopt, tstl::parse_expr("name=\"nope\"").get()).empty());
    EXPECT_EQ(s.selectivity_count(tstl::parse_expr("pid > 3").get()), s.entity_count());
    EXPECT_EQ(Store("e", {}, {}).selectivity_count(tstl::parse_expr("name=\"curl\"").get()), 0u);
}

TEST(Store, NeighborsMatchBruteForce) {
    const Store s = small_store();
    Rng rng(4);
    for (Row e = 0; e < s.entity_count(); ++e) {
        for (auto dir : {Direction::In, Direction::Out}) {
            EXPECT_EQ(s.neighbors(e, dir), brute_neighbors(s, e, dir, std::nullopt));
            TimeBound b{rng.chance(0.5) ? TimeBound::Field::Start : TimeBound::Field::End,
                        rng.chance(0.5) ? TimeBound::Cmp::Less : TimeBound::Cmp::Greater,
                        static_cast<Nanos>(rng.below(1000))};
            EXPECT_EQ(s.neighbors(e, dir, b), brute_neighbors(s, e, dir, b));
        }
        const auto before = s.in_started_before(e, 500);
        const auto all_in = s.in_edges(e);
        ASSERT_LE(before.size(), all_in.size());
        EXPECT_TRUE(std::equal(before.begin(), before.end(), all_in.begin()));
    }
    EXPECT_THROW(s.neighbors(static_cast<Row>(s.entity_count()), Direction::In), NotFoundError);
}

TEST(Store, EveryEventInOneInListAndOneOutList) {
    const Store s = small_store();
    std::vector<int> in(s.event_count()), out(s.event_count());
    for (Row e = 0; e < s.entity_count(); ++e) {
        for (Row r : s.in_edges(e)) ++in[r];
        for (Row r : s.out_edges(e)) ++out[r];
    }
    for (Row r = 0; r < s.event_count(); ++r) {
        EXPECT_EQ(in[r], 1);
        EXPECT_EQ(out[r], 1);
    }
}

TEST(Store, SnapshotRoundTrip) {
    const Store s = small_store();
    std::stringstream buf;
    s.save(buf);
    EXPECT_EQ(buf.str().substr(0, 4), "PQL1");
    const Store back = Store::load(buf);
    EXPECT_EQ(back.source(), "s");
    EXPECT_EQ(back.entities(), s.entities());
    EXPECT_EQ(back.events(), s.events());
    std::stringstream bad("XXXX");
    EXPECT_THROW(Store::load(bad), Error);
}

TEST(Store, GraphViewKeepsIdsAndSources) {
    const Store s = small_store();
    std::vector<Row> rows = {3, 10, 42};
    const EventGraph g = s.subgraph(rows);
    const Store view = Store::from_graph(g);
    EXPECT_EQ(view.event_count(), 3u);
    const auto r = view.find_event("s", 10);
    ASSERT_TRUE(r);
    EXPECT_EQ(view.event(*r).id, 10u);
    EXPECT_EQ(view.to_graph(), g);
}

TEST(Database, SnapshotsAreStableAcrossReplace) {
    Database db(small_store());
    const auto before = db.snapshot();
    db.update([](const Store& cur) { return cur.appended({}, {}); });
    EXPECT_EQ(before->event_count(), db.snapshot()->event_count());
    EXPECT_NE(before.get(), db.snapshot().get());
}
