#include "provql/search.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>

namespace provql {

using tstl::RelExpr;
using tstl::SearchStmt;
using tstl::Window;

namespace {

constexpr std::size_t kMaxRelations = 64;
constexpr std::size_t kMaxTerms = 4096;

struct WindowCheck {
    std::uint64_t left = 0;
    std::uint64_t right = 0;
    Window window;
};

// One conjunctive alternative of the relation tree.
struct Term {
    std::uint64_t mask = 0;
    std::vector<WindowCheck> checks;
};

std::vector<Term> expand(const RelExpr& node, const std::map<const RelExpr*, std::size_t>& leaf_index) {
    switch (node.kind) {
        case RelExpr::Kind::Rel: return {Term{std::uint64_t{1} << leaf_index.at(&node), {}}};
        case RelExpr::Kind::Or: {
            auto out = expand(*node.lhs, leaf_index);
            auto rhs = expand(*node.rhs, leaf_index);
            out.insert(out.end(), rhs.begin(), rhs.end());
            if (out.size() > kMaxTerms) throw ValidationError("relation pattern has too many alternatives");
            return out;
        }
        case RelExpr::Kind::And: {
            const auto lhs = expand(*node.lhs, leaf_index);
            const auto rhs = expand(*node.rhs, leaf_index);
            if (lhs.size() * rhs.size() > kMaxTerms) throw ValidationError("relation pattern has too many alternatives");
            std::vector<Term> out;
            for (const auto& a : lhs) {
                for (const auto& b : rhs) {
                    Term t{a.mask | b.mask, a.checks};
                    t.checks.insert(t.checks.end(), b.checks.begin(), b.checks.end());
                    if (node.window) t.checks.push_back({a.mask, b.mask, *node.window});
                    out.push_back(std::move(t));
                }
            }
            return out;
        }
    }
    return {};
}

class Deadline {
public:
    explicit Deadline(std::optional<Clock::time_point> at) : at_(at) {}
    void poll() {
        if (at_ && (++ticks_ & 1023) == 0 && Clock::now() > *at_) throw TimeoutError("search exceeded its time budget");
    }
    void check() const {
        if (at_ && Clock::now() > *at_) throw TimeoutError("search exceeded its time budget");
    }

private:
    std::optional<Clock::time_point> at_;
    std::uint64_t ticks_ = 0;
};

// Shared statement layout used by both executors.
struct Plan {
    std::vector<const RelExpr*> leaves;
    std::map<std::string, std::size_t> var_index;
    std::vector<std::pair<std::size_t, std::size_t>> leaf_vars;  // (from, to)
    std::vector<Term> terms;
};

Plan make_plan(const SearchStmt& stmt) {
    if (!stmt.rels) throw ValidationError("search statement has no relations");
    Plan p;
    p.leaves = tstl::rel_leaves(*stmt.rels);
    if (p.leaves.size() > kMaxRelations) throw ValidationError("search statement has too many relations");
    std::map<const RelExpr*, std::size_t> leaf_index;
    for (std::size_t i = 0; i < p.leaves.size(); ++i) {
        const RelExpr* r = p.leaves[i];
        leaf_index[r] = i;
        auto var = [&](const std::string& name) {
            if (stmt.node(name) == nullptr) throw ValidationError("undeclared entity variable " + name);
            return p.var_index.emplace(name, p.var_index.size()).first->second;
        };
        const std::size_t from = var(r->from);
        const std::size_t to = var(r->to);
        p.leaf_vars.emplace_back(from, to);
    }
    p.terms = expand(*stmt.rels, leaf_index);
    return p;
}

ExprPtr op_pred(Op op) { return make_compare(Attr::Optype, CmpOp::Eq, string_literal(std::string(to_string(op)))); }

bool shares_var(const Component& a, const Component& b) {
    return a.rel->from == b.rel->from || a.rel->from == b.rel->to || a.rel->to == b.rel->from ||
           a.rel->to == b.rel->to;
}

// Root-to-leaf ancestor chains, used to decide when narrowing is sound.
std::vector<std::vector<const RelExpr*>> ancestor_paths(const RelExpr& root) {
    std::vector<std::vector<const RelExpr*>> out;
    std::vector<const RelExpr*> path;
    std::function<void(const RelExpr&)> walk = [&](const RelExpr& n) {
        if (n.kind == RelExpr::Kind::Rel) {
            out.push_back(path);
            return;
        }
        path.push_back(&n);
        walk(*n.lhs);
        walk(*n.rhs);
        path.pop_back();
    };
    walk(root);
    return out;
}

// Bindings found by component a constrain component b only when every
// alternative using b also uses a: their lowest common ancestor is an And
// and a hangs below it through Ands only.
bool can_narrow(const std::vector<const RelExpr*>& pa, const std::vector<const RelExpr*>& pb) {
    std::size_t common = 0;
    while (common < pa.size() && common < pb.size() && pa[common] == pb[common]) ++common;
    if (common == 0) return false;
    for (std::size_t i = common - 1; i < pa.size(); ++i) {
        if (pa[i]->kind != RelExpr::Kind::And) return false;
    }
    return true;
}

// Backtracking join over one term at a time. Every event that is part of
// at least one full assignment gets marked.
class Joiner {
public:
    Joiner(const Store& store, const Plan& plan, const std::vector<RowSet>& matches, Deadline& deadline)
        : store_(store), plan_(plan), matches_(matches), deadline_(deadline),
          marked_(store.event_count(), 0), unmarked_(matches.size()),
          by_src_(matches.size()), by_dst_(matches.size()), indexed_(matches.size(), 0) {
        for (std::size_t c = 0; c < matches.size(); ++c) unmarked_[c] = matches[c].size();
        binding_.assign(plan.var_index.size(), 0);
        bound_count_.assign(plan.var_index.size(), 0);
    }

    void run(const Term& term, const std::vector<std::size_t>& order) {
        levels_.clear();
        for (std::size_t c : order) {
            if (term.mask >> c & 1) levels_.push_back(c);
        }
        for (std::size_t c : levels_) {
            if (matches_[c].empty()) return;
        }
        checks_.assign(levels_.size(), {});
        for (std::size_t i = 0; i < levels_.size(); ++i) {
            const std::uint64_t bit = std::uint64_t{1} << levels_[i];
            for (const auto& wc : term.checks) {
                for (std::size_t j = 0; j < i; ++j) {
                    const std::uint64_t other = std::uint64_t{1} << levels_[j];
                    if (((wc.left & bit) && (wc.right & other)) || ((wc.right & bit) && (wc.left & other))) {
                        checks_[i].push_back({j, wc.window});
                    }
                }
            }
        }
        assigned_.assign(levels_.size(), 0);
        dfs(0);
    }

    RowSet result() const {
        std::vector<Row> out;
        for (Row r = 0; r < marked_.size(); ++r) {
            if (marked_[r]) out.push_back(r);
        }
        return RowSet(std::move(out));
    }

    std::size_t steps = 0;

private:
    struct LevelCheck {
        std::size_t level;
        Window window;
    };

    bool nothing_left(std::size_t level) const {
        for (std::size_t j = level; j < levels_.size(); ++j) {
            if (unmarked_[levels_[j]] != 0) return false;
        }
        for (std::size_t j = 0; j < level; ++j) {
            if (!marked_[assigned_[j]]) return false;
        }
        return true;
    }

    void mark(Row ev) {
        if (marked_[ev]) return;
        marked_[ev] = 1;
        for (std::size_t c = 0; c < matches_.size(); ++c) {
            if (matches_[c].contains(ev)) --unmarked_[c];
        }
    }

    void build_index(std::size_t c) {
        if (indexed_[c]) return;
        indexed_[c] = 1;
        for (Row r : matches_[c]) {
            by_src_[c][store_.src(r)].push_back(r);
            by_dst_[c][store_.dst(r)].push_back(r);
        }
    }

    std::span<const Row> candidates(std::size_t c) {
        const auto [from, to] = plan_.leaf_vars[c];
        if (bound_count_[from] == 0 && bound_count_[to] == 0) return matches_[c].rows();
        build_index(c);
        const auto& index = bound_count_[from] != 0 ? by_src_[c] : by_dst_[c];
        const Row key = binding_[bound_count_[from] != 0 ? from : to];
        auto it = index.find(key);
        if (it == index.end()) return {};
        return it->second;
    }

    bool consistent(std::size_t var, Row entity) const {
        return bound_count_[var] == 0 || binding_[var] == entity;
    }

    void bind(std::size_t var, Row entity) {
        binding_[var] = entity;
        ++bound_count_[var];
    }

    void dfs(std::size_t level) {
        if (level == levels_.size()) {
            for (Row ev : assigned_) mark(ev);
            return;
        }
        const std::size_t c = levels_[level];
        const auto [from, to] = plan_.leaf_vars[c];
        for (Row r : candidates(c)) {
            deadline_.poll();
            ++steps;
            if (nothing_left(level)) return;
            const Row s = store_.src(r);
            const Row d = store_.dst(r);
            if (!consistent(from, s) || !consistent(to, d)) continue;
            if (from == to && s != d) continue;
            bool ok = true;
            for (const auto& chk : checks_[level]) {
                if (!chk.window.admits(event_gap(store_.event(r), store_.event(assigned_[chk.level])))) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            bind(from, s);
            bind(to, d);
            assigned_[level] = r;
            dfs(level + 1);
            --bound_count_[from];
            --bound_count_[to];
        }
    }

    const Store& store_;
    const Plan& plan_;
    const std::vector<RowSet>& matches_;
    Deadline& deadline_;
    std::vector<char> marked_;
    std::vector<std::size_t> unmarked_;
    std::vector<std::unordered_map<Row, std::vector<Row>>> by_src_;
    std::vector<std::unordered_map<Row, std::vector<Row>>> by_dst_;
    std::vector<char> indexed_;
    std::vector<Row> binding_;
    std::vector<std::size_t> bound_count_;
    std::vector<std::size_t> levels_;
    std::vector<std::vector<LevelCheck>> checks_;
    std::vector<Row> assigned_;
};

}  // namespace

Nanos event_gap(const Event& a, const Event& b) {
    const Nanos later_start = std::max(a.start, b.start);
    const Nanos earlier_end = std::min(a.end, b.end);
    return later_start > earlier_end ? later_start - earlier_end : 0;
}

Decomposition decompose(const SearchStmt& stmt) {
    if (!stmt.rels) throw ValidationError("search statement has no relations");
    Decomposition d;
    const auto leaves = tstl::rel_leaves(*stmt.rels);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        const RelExpr* r = leaves[i];
        const auto* from = stmt.node(r->from);
        const auto* to = stmt.node(r->to);
        if (from == nullptr) throw ValidationError("undeclared entity variable " + r->from);
        if (to == nullptr) throw ValidationError("undeclared entity variable " + r->to);
        Component c;
        c.index = i;
        c.rel = r;
        c.src_pred = from->pred.get();
        c.dst_pred = to->pred.get();
        c.op = r->op;
        c.score = count_atoms(c.src_pred) + count_atoms(c.dst_pred) + (c.op ? 1 : 0);
        d.components.push_back(c);
    }
    for (std::size_t i = 0; i < d.components.size(); ++i) {
        for (std::size_t j = i + 1; j < d.components.size(); ++j) {
            if (shares_var(d.components[i], d.components[j])) d.edges.emplace_back(i, j);
        }
    }
    return d;
}

std::vector<std::size_t> schedule(const Decomposition& d, const ScheduleOptions& opts) {
    const std::size_t n = d.components.size();
    std::vector<std::size_t> group(n);
    std::iota(group.begin(), group.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return group[x] == x ? x : group[x] = find(group[x]);
    };
    for (auto [a, b] : d.edges) {
        const std::size_t ra = find(a);
        const std::size_t rb = find(b);
        group[std::max(ra, rb)] = std::min(ra, rb);
    }

    std::vector<std::size_t> estimate(n, 0);
    if (opts.selectivity_tiebreak && opts.store != nullptr) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto& c = d.components[i];
            std::size_t best = std::min(opts.store->selectivity_count(c.src_pred, false),
                                        opts.store->selectivity_count(c.dst_pred, false));
            if (c.op) best = std::min(best, opts.store->selectivity_count(op_pred(*c.op).get(), true));
            estimate[i] = best;
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const std::size_t ga = find(a);
        const std::size_t gb = find(b);
        if (ga != gb) return ga < gb;  // a group's root is its first member
        if (d.components[a].score != d.components[b].score) return d.components[a].score > d.components[b].score;
        if (estimate[a] != estimate[b]) return estimate[a] < estimate[b];
        return a < b;
    });
    return order;
}

SearchResult execute_search(const SearchStmt& stmt, const Store& store, const SearchOptions& opts) {
    const Plan plan = make_plan(stmt);
    const Decomposition d = decompose(stmt);
    Deadline deadline(opts.deadline);

    SearchResult result;
    auto& stats = result.stats;
    if (opts.order) {
        auto sorted = *opts.order;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] != i || sorted.size() != d.components.size()) {
                throw ValidationError("component order is not a permutation");
            }
        }
        stats.order = *opts.order;
    } else {
        stats.order = schedule(d, {opts.selectivity_tiebreak, &store});
    }

    // Entity candidates per variable, from the node declarations.
    std::map<std::string, RowSet> base;
    auto base_set = [&](const std::string& var) -> const RowSet& {
        auto it = base.find(var);
        if (it == base.end()) it = base.emplace(var, store.scan_entities(std::nullopt, stmt.node(var)->pred.get())).first;
        return it->second;
    };

    const auto paths = ancestor_paths(*stmt.rels);
    const std::size_t n = d.components.size();
    // Narrowed variable sets per component.
    std::vector<std::map<std::string, RowSet>> narrowed(n);
    std::vector<RowSet> matches(n);
    std::vector<char> done(n, 0);

    for (std::size_t c : stats.order) {
        deadline.check();
        const auto& comp = d.components[c];
        auto set_for = [&](const std::string& var) -> const RowSet& {
            auto it = narrowed[c].find(var);
            return it != narrowed[c].end() ? it->second : base_set(var);
        };
        const RowSet& src_in = set_for(comp.rel->from);
        const RowSet& dst_in = set_for(comp.rel->to);
        ExprPtr pred = comp.op ? op_pred(*comp.op) : nullptr;
        matches[c] = store.scan_events(pred.get(), &src_in, &dst_in);
        done[c] = 1;

        if (!opts.propagate) continue;
        std::vector<Row> srcs;
        std::vector<Row> dsts;
        for (Row r : matches[c]) {
            srcs.push_back(store.src(r));
            dsts.push_back(store.dst(r));
        }
        const RowSet src_bound(std::move(srcs));
        const RowSet dst_bound(std::move(dsts));
        for (std::size_t o = 0; o < n; ++o) {
            if (done[o] || !can_narrow(paths[c], paths[o])) continue;
            const auto& other = d.components[o];
            for (const std::string* var : {&other.rel->from, &other.rel->to}) {
                const bool as_src = *var == comp.rel->from;
                const bool as_dst = *var == comp.rel->to;
                if (!as_src && !as_dst) continue;
                RowSet bound = as_src ? src_bound : dst_bound;
                if (as_src && as_dst) bound = bound.intersect(dst_bound);
                auto it = narrowed[o].find(*var);
                const RowSet& current = it != narrowed[o].end() ? it->second : base_set(*var);
                narrowed[o][*var] = current.intersect(bound);
            }
        }
    }

    stats.matches.resize(n);
    for (std::size_t c = 0; c < n; ++c) stats.matches[c] = matches[c].size();
    stats.terms = plan.terms.size();

    Joiner join(store, plan, matches, deadline);
    for (const auto& term : plan.terms) join.run(term, stats.order);
    stats.join_steps = join.steps;
    result.events = join.result();
    return result;
}

SearchResult naive_search(const SearchStmt& stmt, const Store& store, std::optional<Clock::time_point> deadline_at) {
    const Plan plan = make_plan(stmt);
    Deadline deadline(deadline_at);
    const std::size_t n = plan.leaves.size();

    SearchResult result;
    std::vector<std::vector<Row>> matches(n);
    for (std::size_t c = 0; c < n; ++c) {
        const RelExpr* rel = plan.leaves[c];
        const Expr* sp = stmt.node(rel->from)->pred.get();
        const Expr* dp = stmt.node(rel->to)->pred.get();
        for (Row r = 0; r < store.event_count(); ++r) {
            deadline.poll();
            const Event& e = store.event(r);
            if (rel->op && e.op != *rel->op) continue;
            if (!eval_opt(sp, store.entity(store.src(r))) || !eval_opt(dp, store.entity(store.dst(r)))) continue;
            matches[c].push_back(r);
        }
        result.stats.order.push_back(c);
        result.stats.matches.push_back(matches[c].size());
    }
    result.stats.terms = plan.terms.size();

    std::vector<char> marked(store.event_count(), 0);
    for (const auto& term : plan.terms) {
        std::vector<std::size_t> leaves;
        for (std::size_t c = 0; c < n; ++c) {
            if (term.mask >> c & 1) leaves.push_back(c);
        }
        std::vector<std::size_t> pick(leaves.size(), 0);
        bool any_empty = false;
        for (std::size_t c : leaves) any_empty = any_empty || matches[c].empty();
        if (any_empty) continue;

        std::vector<Row> tuple(n);
        std::vector<std::optional<Row>> binding(plan.var_index.size());
        for (;;) {
            deadline.poll();
            ++result.stats.join_steps;
            for (std::size_t k = 0; k < leaves.size(); ++k) tuple[leaves[k]] = matches[leaves[k]][pick[k]];

            std::fill(binding.begin(), binding.end(), std::nullopt);
            bool ok = true;
            for (std::size_t c : leaves) {
                const auto [from, to] = plan.leaf_vars[c];
                for (auto [var, ent] : {std::pair{from, store.src(tuple[c])}, std::pair{to, store.dst(tuple[c])}}) {
                    if (binding[var] && *binding[var] != ent) ok = false;
                    binding[var] = ent;
                }
            }
            for (const auto& wc : term.checks) {
                for (std::size_t a : leaves) {
                    if (!(wc.left >> a & 1)) continue;
                    for (std::size_t b : leaves) {
                        if (!(wc.right >> b & 1)) continue;
                        if (!wc.window.admits(event_gap(store.event(tuple[a]), store.event(tuple[b])))) ok = false;
                    }
                }
            }
            if (ok) {
                for (std::size_t c : leaves) marked[tuple[c]] = 1;
            }

            std::size_t k = 0;
            while (k < leaves.size() && ++pick[k] == matches[leaves[k]].size()) pick[k++] = 0;
            if (k == leaves.size()) break;
        }
    }
    std::vector<Row> rows;
    for (Row r = 0; r < marked.size(); ++r) {
        if (marked[r]) rows.push_back(r);
    }
    result.events = RowSet(std::move(rows));
    return result;
}

}  // namespace provql
