#include "provql/tstl/ast.hpp"

#include <functional>

namespace provql::tstl {

std::string Diagnostic::format() const {
    return std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message;
}

ParseError::ParseError(Diagnostic d) : Error(d.format()), diag_(std::move(d)) {}

std::string_view to_string(TimeUnit unit) {
    switch (unit) {
        case TimeUnit::Minutes: return "m";
        case TimeUnit::Seconds: return "s";
        case TimeUnit::Millis: return "ms";
    }
    return "?";
}

Nanos Window::nanos() const {
    Nanos scale = kNanosPerSecond;
    if (unit == TimeUnit::Minutes) scale = kNanosPerMinute;
    if (unit == TimeUnit::Millis) scale = kNanosPerMs;
    if (amount > kMaxNanos / scale) return kMaxNanos;
    return amount * scale;
}

std::vector<const RelExpr*> rel_leaves(const RelExpr& root) {
    std::vector<const RelExpr*> out;
    std::function<void(const RelExpr&)> walk = [&](const RelExpr& r) {
        if (r.kind == RelExpr::Kind::Rel) {
            out.push_back(&r);
            return;
        }
        walk(*r.lhs);
        walk(*r.rhs);
    };
    walk(root);
    return out;
}

const NodeDecl* SearchStmt::node(const std::string& var) const {
    for (const auto& n : nodes) {
        if (n.var == var) return &n;
    }
    return nullptr;
}

namespace {

bool rel_equal(const RelExpr* a, const RelExpr* b) {
    if (a == nullptr || b == nullptr) return a == b;
    if (a->kind != b->kind) return false;
    if (a->kind == RelExpr::Kind::Rel) return a->from == b->from && a->op == b->op && a->to == b->to;
    return a->window == b->window && rel_equal(a->lhs.get(), b->lhs.get()) && rel_equal(a->rhs.get(), b->rhs.get());
}

bool graph_equal(const GraphExpr* a, const GraphExpr* b) {
    if (a == nullptr || b == nullptr) return a == b;
    if (a->kind != b->kind) return false;
    if (a->kind == GraphExpr::Kind::Var) return a->var == b->var;
    return graph_equal(a->lhs.get(), b->lhs.get()) && graph_equal(a->rhs.get(), b->rhs.get());
}

bool source_equal(const DataSource& a, const DataSource& b) { return a.kind == b.kind && a.name == b.name; }

bool filter_equal(const TrackFilter& a, const TrackFilter& b) {
    return expr_equal(a.nodes, b.nodes) && expr_equal(a.edges, b.edges);
}

bool node_equal(const SearchStmt& a, const SearchStmt& b) {
    if (!source_equal(a.source, b.source) || a.bind != b.bind || a.nodes.size() != b.nodes.size()) return false;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        if (a.nodes[i].var != b.nodes[i].var || !expr_equal(a.nodes[i].pred, b.nodes[i].pred)) return false;
    }
    return rel_equal(a.rels.get(), b.rels.get());
}

bool node_equal(const TrackStmt& a, const TrackStmt& b) {
    return a.bind == b.bind && a.dir == b.dir && expr_equal(a.poi_expr, b.poi_expr) && a.poi_var == b.poi_var &&
           source_equal(a.source, b.source) && filter_equal(a.include, b.include) &&
           filter_equal(a.exclude, b.exclude) && a.step == b.step && a.time_seconds == b.time_seconds;
}

bool node_equal(const GraphOpStmt& a, const GraphOpStmt& b) {
    return a.var == b.var && graph_equal(a.expr.get(), b.expr.get());
}

bool node_equal(const DisplayStmt& a, const DisplayStmt& b) { return graph_equal(a.expr.get(), b.expr.get()); }

bool node_equal(const ExportStmt& a, const ExportStmt& b) {
    return a.path == b.path && graph_equal(a.expr.get(), b.expr.get());
}

}  // namespace

bool ast_equal(const Statement& a, const Statement& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            return node_equal(x, std::get<T>(b.node));
        },
        a.node);
}

bool ast_equal(const std::vector<Statement>& a, const std::vector<Statement>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!ast_equal(a[i], b[i])) return false;
    }
    return true;
}

}  // namespace provql::tstl
