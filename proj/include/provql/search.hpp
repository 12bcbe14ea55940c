#pragma once
// Component-based execution of search statements.
//
// A statement is split into one component per relation. Components run in
// schedule order, each scanning the store with its endpoint predicates;
// entity bindings found by one component narrow later scans where that is
// sound. A final join enforces variable consistency and temporal windows.

#include <chrono>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "provql/store.hpp"
#include "provql/tstl/ast.hpp"

namespace provql {

using Clock = std::chrono::steady_clock;

struct Component {
    std::size_t index = 0;  // textual position
    const tstl::RelExpr* rel = nullptr;
    const Expr* src_pred = nullptr;
    const Expr* dst_pred = nullptr;
    std::optional<Op> op;
    int score = 0;
};

struct Decomposition {
    std::vector<Component> components;
    // Pairs (i, j), i < j, of components sharing an entity variable.
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Throws ValidationError when a relation names an undeclared variable.
Decomposition decompose(const tstl::SearchStmt& stmt);

struct ScheduleOptions {
    // Break score ties by estimated index cardinality (smaller first).
    bool selectivity_tiebreak = false;
    const Store* store = nullptr;
};

/// Groups connected components; groups run in textual order of their first
/// member, members by descending score, then textual order.
std::vector<std::size_t> schedule(const Decomposition& d, const ScheduleOptions& opts = {});

struct SearchOptions {
    bool propagate = true;
    bool selectivity_tiebreak = false;
    // Explicit component order; must be a permutation.
    std::optional<std::vector<std::size_t>> order;
    std::optional<Clock::time_point> deadline;
};

struct SearchStats {
    std::vector<std::size_t> order;
    std::vector<std::size_t> matches;  // per component, textual index
    std::size_t terms = 0;
    std::size_t join_steps = 0;
};

struct SearchResult {
    RowSet events;
    SearchStats stats;
};

/// Throws ValidationError for malformed statements, TimeoutError past the deadline.
SearchResult execute_search(const tstl::SearchStmt& stmt, const Store& store, const SearchOptions& opts = {});

/// Baseline for benchmarking: each relation is matched by a full scan of
/// the event table, then every tuple of matches is checked.
SearchResult naive_search(const tstl::SearchStmt& stmt, const Store& store,
                          std::optional<Clock::time_point> deadline = std::nullopt);

/// Temporal distance between two events; 0 when they overlap.
Nanos event_gap(const Event& a, const Event& b);

}  // namespace provql
