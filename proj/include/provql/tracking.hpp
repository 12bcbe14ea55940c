#pragma once
// Backward and forward causal dependency tracking.
//
// An event e1 feeds e2 when dst(e1) = src(e2) and ts(e1) < te(e2). Tracking
// walks this relation breadth-first from a set of seed entities, each
// carrying a time bound: backward expansion of u under bound B admits
// in-edges starting before B, forward expansion admits out-edges ending
// after B.

#include <chrono>
#include <optional>
#include <vector>

#include "provql/store.hpp"
#include "provql/tstl/ast.hpp"

namespace provql {

struct TrackSeed {
    Row entity = 0;
    Nanos bound = 0;
};

struct TrackRequest {
    tstl::TrackDir dir = tstl::TrackDir::Backward;
    std::vector<TrackSeed> seeds;
    // Events included in the result as given (graph-variable POIs).
    std::vector<Row> seed_events;
    const Expr* include_nodes = nullptr;
    const Expr* include_edges = nullptr;
    const Expr* exclude_nodes = nullptr;
    const Expr* exclude_edges = nullptr;
    std::optional<std::int64_t> step_limit;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct TrackResult {
    RowSet events;
    bool truncated = false;
    std::size_t expansions = 0;
    std::size_t max_depth = 0;
};

/// Seeds from an entity predicate: every match, unbounded in time.
std::vector<TrackSeed> seeds_from_entities(const Store& store, const Expr& pred, tstl::TrackDir dir);

/// Seeds from events: backward uses each source endpoint bounded by the
/// event's end, forward each sink bounded by the event's start.
std::vector<TrackSeed> seeds_from_events(const Store& store, std::span<const Row> events, tstl::TrackDir dir);

/// Builds a request from a POI expression (entity or event scope) or from
/// the events of a graph. Graph events absent from `store` are skipped.
TrackRequest make_request(const tstl::TrackStmt& stmt, const Store& store, const EventGraph* poi_graph);

TrackResult track(const Store& store, const TrackRequest& req);

}  // namespace provql
