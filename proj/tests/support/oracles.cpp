#include "oracles.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <tuple>

namespace provql::testing {

std::vector<Event> reduce_fixpoint(const std::vector<Event>& events, Nanos threshold, Rng& rng) {
    struct Item {
        Event ev;
        std::size_t first;
    };
    using GroupKey = std::tuple<EntityId, EntityId, Op, std::string>;
    std::map<GroupKey, std::vector<Item>> groups;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        groups[{e.src, e.dst, e.op, e.note}].push_back({e, i});
    }
    std::vector<Item> out;
    for (auto& [key, items] : groups) {
        for (;;) {
            std::vector<std::size_t> candidates;
            for (std::size_t i = 0; i + 1 < items.size(); ++i) {
                const Nanos gap = items[i + 1].ev.start - items[i].ev.end;
                if (gap >= 0 && gap <= threshold) candidates.push_back(i);
            }
            if (candidates.empty()) break;
            const std::size_t i = candidates[rng.below(candidates.size())];
            items[i].ev.end = items[i + 1].ev.end;
            items[i].ev.amount += items[i + 1].ev.amount;
            items.erase(items.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        }
        out.insert(out.end(), items.begin(), items.end());
    }
    std::sort(out.begin(), out.end(), [](const Item& a, const Item& b) {
        return std::tie(a.ev.start, a.first) < std::tie(b.ev.start, b.first);
    });
    std::vector<Event> result;
    for (auto& it : out) result.push_back(std::move(it.ev));
    return result;
}

std::set<Row> track_closure(const Store& store, const TrackRequest& req) {
    const bool backward = req.dir == tstl::TrackDir::Backward;
    const std::size_t n = store.entity_count();
    std::vector<std::optional<Nanos>> bound(n);
    auto relax = [&](Row entity, Nanos b) {
        auto& cur = bound[entity];
        if (!cur || (backward ? b > *cur : b < *cur)) cur = b;
    };
    std::vector<bool> seed(n, false);
    for (const auto& s : req.seeds) {
        seed[s.entity] = true;
        relax(s.entity, s.bound);
    }
    std::vector<bool> in(store.event_count(), false);
    for (Row r : req.seed_events) in[r] = true;

    auto edge_ok = [&](const Event& e) {
        if (req.include_edges && !eval(*req.include_edges, e)) return false;
        return !(req.exclude_edges && eval(*req.exclude_edges, e));
    };
    auto node_ok = [&](Row r) {
        if (seed[r]) return true;
        const Entity& e = store.entity(r);
        if (req.include_nodes && !eval(*req.include_nodes, e)) return false;
        return !(req.exclude_nodes && eval(*req.exclude_nodes, e));
    };

    const std::int64_t rounds = req.step_limit ? *req.step_limit : std::numeric_limits<std::int64_t>::max();
    for (std::int64_t round = 1; round <= rounds; ++round) {
        std::vector<Row> fresh;
        for (Row r = 0; r < store.event_count(); ++r) {
            if (in[r]) continue;
            const Event& e = store.event(r);
            const Row near = backward ? store.dst(r) : store.src(r);
            const Row far = backward ? store.src(r) : store.dst(r);
            if (!bound[near]) continue;
            const bool depends = backward ? e.start < *bound[near] : e.end > *bound[near];
            if (depends && edge_ok(e) && node_ok(far)) fresh.push_back(r);
        }
        if (fresh.empty()) break;
        // Bounds only take effect in the next round.
        for (Row r : fresh) {
            in[r] = true;
            const Event& e = store.event(r);
            relax(backward ? store.src(r) : store.dst(r), backward ? e.end : e.start);
        }
    }
    std::set<Row> out;
    for (Row r = 0; r < in.size(); ++r) {
        if (in[r]) out.insert(r);
    }
    return out;
}

namespace {

struct Partial {
    std::map<std::string, Row> bind;
    std::vector<Row> events;
    bool operator<(const Partial& o) const { return std::tie(bind, events) < std::tie(o.bind, o.events); }
    bool operator==(const Partial& o) const { return bind == o.bind && events == o.events; }
};

class Matcher {
public:
    Matcher(const tstl::SearchStmt& stmt, const Store& store, std::size_t cap) : store_(store), cap_(cap) {
        for (const auto& d : stmt.nodes) {
            auto& ok = ok_[d.var];
            ok.resize(store.entity_count());
            for (Row r = 0; r < store.entity_count(); ++r) ok[r] = eval(*d.pred, store.entity(r));
        }
    }

    std::vector<Partial> match(const tstl::RelExpr& node) {
        std::vector<Partial> out;
        switch (node.kind) {
            case tstl::RelExpr::Kind::Rel:
                for (Row r = 0; r < store_.event_count(); ++r) {
                    if (node.op && store_.event(r).op != *node.op) continue;
                    const Row s = store_.src(r);
                    const Row d = store_.dst(r);
                    if (!ok_.at(node.from)[s] || !ok_.at(node.to)[d]) continue;
                    out.push_back({{{node.from, s}, {node.to, d}}, {r}});
                }
                break;
            case tstl::RelExpr::Kind::Or: {
                out = match(*node.lhs);
                auto rhs = match(*node.rhs);
                out.insert(out.end(), rhs.begin(), rhs.end());
                break;
            }
            case tstl::RelExpr::Kind::And: {
                const auto lhs = match(*node.lhs);
                const auto rhs = match(*node.rhs);
                for (const auto& l : lhs) {
                    for (const auto& r : rhs) {
                        if (!consistent(l, r)) continue;
                        if (node.window && !within(l, r, *node.window)) continue;
                        Partial p = l;
                        p.bind.insert(r.bind.begin(), r.bind.end());
                        p.events.insert(p.events.end(), r.events.begin(), r.events.end());
                        std::sort(p.events.begin(), p.events.end());
                        out.push_back(std::move(p));
                        if (out.size() > cap_) throw std::length_error("match set too large");
                    }
                }
                break;
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        if (out.size() > cap_) throw std::length_error("match set too large");
        return out;
    }

private:
    static bool consistent(const Partial& a, const Partial& b) {
        for (const auto& [var, row] : a.bind) {
            auto it = b.bind.find(var);
            if (it != b.bind.end() && it->second != row) return false;
        }
        return true;
    }

    bool within(const Partial& a, const Partial& b, const tstl::Window& w) const {
        for (Row x : a.events) {
            for (Row y : b.events) {
                const Event& ex = store_.event(x);
                const Event& ey = store_.event(y);
                const Nanos gap = std::max<Nanos>(0, std::max(ex.start, ey.start) - std::min(ex.end, ey.end));
                if (!w.admits(gap)) return false;
            }
        }
        return true;
    }

    const Store& store_;
    std::size_t cap_;
    std::map<std::string, std::vector<bool>> ok_;
};

}  // namespace

std::set<Row> nested_loop_search(const tstl::SearchStmt& stmt, const Store& store, std::size_t cap) {
    Matcher m(stmt, store, cap);
    std::set<Row> out;
    for (const auto& p : m.match(*stmt.rels)) out.insert(p.events.begin(), p.events.end());
    return out;
}

GraphSets to_sets(const EventGraph& g) {
    GraphSets s;
    for (const auto& [k, e] : g.entities()) s.entities.insert(k);
    for (const auto& [k, e] : g.events()) {
        s.events.insert(k);
        s.ends[k] = {GraphKey{k.source, e.src}, GraphKey{k.source, e.dst}};
    }
    return s;
}

namespace {

GraphSets with_endpoints(std::set<GraphKey> events, const GraphSets& a, const GraphSets& b) {
    GraphSets out;
    for (const auto& k : events) {
        auto it = a.ends.find(k);
        const auto& ends = it != a.ends.end() ? it->second : b.ends.at(k);
        out.ends[k] = ends;
        out.entities.insert(ends.first);
        out.entities.insert(ends.second);
    }
    out.events = std::move(events);
    return out;
}

}  // namespace

GraphSets sets_union(const GraphSets& a, const GraphSets& b) {
    GraphSets out = a;
    out.entities.insert(b.entities.begin(), b.entities.end());
    out.events.insert(b.events.begin(), b.events.end());
    out.ends.insert(b.ends.begin(), b.ends.end());
    return out;
}

GraphSets sets_intersection(const GraphSets& a, const GraphSets& b) {
    std::set<GraphKey> ev;
    std::set_intersection(a.events.begin(), a.events.end(), b.events.begin(), b.events.end(),
                          std::inserter(ev, ev.end()));
    return with_endpoints(std::move(ev), a, b);
}

GraphSets sets_difference(const GraphSets& a, const GraphSets& b) {
    std::set<GraphKey> ev;
    std::set_difference(a.events.begin(), a.events.end(), b.events.begin(), b.events.end(),
                        std::inserter(ev, ev.end()));
    return with_endpoints(std::move(ev), a, b);
}

bool sets_closed(const GraphSets& g) {
    for (const auto& k : g.events) {
        const auto& [s, d] = g.ends.at(k);
        if (!g.entities.count(s) || !g.entities.count(d)) return false;
    }
    return true;
}

Store mirrored(const Store& store) {
    std::vector<Event> events = store.events();
    for (auto& e : events) {
        std::swap(e.src, e.dst);
        const Nanos start = -e.end;
        e.end = -e.start;
        e.start = start;
        e.category = derive_category(store.entity(e.src).kind(), store.entity(e.dst).kind());
    }
    return Store(store.source(), store.entities(), std::move(events));
}

}  // namespace provql::testing
