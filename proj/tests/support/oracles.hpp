#pragma once
// Brute-force reference implementations. Deliberately simple and slow; they
// share no code with the engine beyond the data model and expression eval.

#include <map>
#include <set>
#include <vector>

#include "provql/scenario.hpp"
#include "provql/store.hpp"
#include "provql/tracking.hpp"
#include "provql/tstl/ast.hpp"

namespace provql::testing {

/// Merges time-adjacent pairs of a (src, dst, op, note) group in random
/// order until no pair qualifies. Output sorted by (start, first input index).
std::vector<Event> reduce_fixpoint(const std::vector<Event>& events, Nanos threshold, Rng& rng);

/// Round-based closure: round k admits every event whose sink (backward) or
/// source (forward) carries a bound from rounds < k that the event respects.
/// Unlimited rounds without a step limit.
std::set<Row> track_closure(const Store& store, const TrackRequest& req);

/// Recursive match sets over the relation tree: leaves scan the full event
/// table, And joins on shared variables and checks windows pairwise, Or
/// unions. Throws std::length_error when a match set outgrows `cap`.
std::set<Row> nested_loop_search(const tstl::SearchStmt& stmt, const Store& store, std::size_t cap = 2'000'000);

/// Set model of an EventGraph.
struct GraphSets {
    std::set<GraphKey> entities;
    std::set<GraphKey> events;
    // Endpoints per event, for the closure check and intersections.
    std::map<GraphKey, std::pair<GraphKey, GraphKey>> ends;

    bool operator==(const GraphSets& o) const { return entities == o.entities && events == o.events; }
};

GraphSets to_sets(const EventGraph& g);
GraphSets sets_union(const GraphSets& a, const GraphSets& b);
GraphSets sets_intersection(const GraphSets& a, const GraphSets& b);
GraphSets sets_difference(const GraphSets& a, const GraphSets& b);
bool sets_closed(const GraphSets& g);

/// Store with every event reversed and time mirrored (t -> -t).
Store mirrored(const Store& store);

}  // namespace provql::testing
