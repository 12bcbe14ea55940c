#include "provql/tracking.hpp"

#include <deque>
#include <unordered_set>

#include "provql/tstl/analyzer.hpp"

namespace provql {

using tstl::TrackDir;

std::vector<TrackSeed> seeds_from_entities(const Store& store, const Expr& pred, TrackDir dir) {
    const Nanos bound = dir == TrackDir::Backward ? kMaxNanos : kMinNanos;
    std::vector<TrackSeed> out;
    for (Row r : store.scan_entities(std::nullopt, &pred)) out.push_back({r, bound});
    return out;
}

std::vector<TrackSeed> seeds_from_events(const Store& store, std::span<const Row> events, TrackDir dir) {
    std::vector<TrackSeed> out;
    for (Row r : events) {
        const Event& e = store.event(r);
        if (dir == TrackDir::Backward) {
            out.push_back({store.src(r), e.end});
        } else {
            out.push_back({store.dst(r), e.start});
        }
    }
    return out;
}

TrackRequest make_request(const tstl::TrackStmt& stmt, const Store& store, const EventGraph* poi_graph) {
    TrackRequest req;
    req.dir = stmt.dir;
    if (stmt.poi_expr) {
        if (tstl::poi_scope(*stmt.poi_expr) == tstl::PoiScope::Entities) {
            req.seeds = seeds_from_entities(store, *stmt.poi_expr, stmt.dir);
        } else {
            const RowSet evs = store.scan_events(stmt.poi_expr.get());
            req.seed_events = evs.rows();
        }
    } else if (poi_graph != nullptr) {
        for (const auto& [key, ev] : poi_graph->events()) {
            if (auto row = store.find_event(key.source, key.id)) req.seed_events.push_back(*row);
        }
    }
    if (!req.seed_events.empty()) {
        auto extra = seeds_from_events(store, req.seed_events, stmt.dir);
        req.seeds.insert(req.seeds.end(), extra.begin(), extra.end());
    }
    req.include_nodes = stmt.include.nodes.get();
    req.include_edges = stmt.include.edges.get();
    req.exclude_nodes = stmt.exclude.nodes.get();
    req.exclude_edges = stmt.exclude.edges.get();
    req.step_limit = stmt.step;
    return req;
}

TrackResult track(const Store& store, const TrackRequest& req) {
    const bool backward = req.dir == TrackDir::Backward;
    // Backward bounds grow weaker upwards, forward bounds downwards.
    auto weaker = [backward](Nanos a, Nanos b) { return backward ? a > b : a < b; };

    struct Item {
        Row entity;
        Nanos bound;
        std::size_t depth;
    };

    const std::size_t n = store.entity_count();
    std::vector<char> reached(n, 0);
    std::vector<Nanos> best(n, 0);
    std::vector<std::size_t> best_depth(n, 0);
    std::vector<char> is_seed(n, 0);
    std::vector<char> admitted(store.event_count(), 0);
    std::deque<Item> queue;

    auto offer = [&](Row entity, Nanos bound, std::size_t depth) {
        if (reached[entity] && !weaker(bound, best[entity])) return;
        reached[entity] = 1;
        best[entity] = bound;
        best_depth[entity] = depth;
        queue.push_back({entity, bound, depth});
    };

    for (const auto& s : req.seeds) {
        if (s.entity >= n) throw NotFoundError("tracking seed is not in the source");
        is_seed[s.entity] = 1;
    }
    for (const auto& s : req.seeds) offer(s.entity, s.bound, 0);
    for (Row r : req.seed_events) admitted.at(r) = 1;

    auto node_ok = [&](Row entity) {
        if (is_seed[entity]) return true;
        const Entity& e = store.entity(entity);
        if (req.include_nodes && !eval(*req.include_nodes, e)) return false;
        if (req.exclude_nodes && eval(*req.exclude_nodes, e)) return false;
        return true;
    };
    auto edge_ok = [&](const Event& e) {
        if (req.include_edges && !eval(*req.include_edges, e)) return false;
        if (req.exclude_edges && eval(*req.exclude_edges, e)) return false;
        return true;
    };

    TrackResult result;
    std::size_t polls = 0;
    while (!queue.empty()) {
        if (req.deadline && (++polls & 255) == 0 && std::chrono::steady_clock::now() > *req.deadline) {
            result.truncated = true;
            break;
        }
        const Item item = queue.front();
        queue.pop_front();
        // A weaker bound reached at no greater depth supersedes this item.
        if (best[item.entity] != item.bound && weaker(best[item.entity], item.bound) &&
            best_depth[item.entity] <= item.depth) {
            continue;
        }
        ++result.expansions;
        const auto edges = backward ? store.in_started_before(item.entity, item.bound)
                                    : store.out_ending_after(item.entity, item.bound);
        const std::size_t depth = item.depth + 1;
        for (Row r : edges) {
            const Event& e = store.event(r);
            if (!edge_ok(e)) continue;
            const Row far = backward ? store.src(r) : store.dst(r);
            if (!node_ok(far)) continue;
            if (!admitted[r]) {
                admitted[r] = 1;
                result.max_depth = std::max(result.max_depth, depth);
            }
            if (req.step_limit && static_cast<std::int64_t>(depth) >= *req.step_limit) continue;
            offer(far, backward ? e.end : e.start, depth);
        }
    }

    std::vector<Row> rows;
    for (Row r = 0; r < admitted.size(); ++r) {
        if (admitted[r]) rows.push_back(r);
    }
    result.events = RowSet(std::move(rows));
    return result;
}

}  // namespace provql
