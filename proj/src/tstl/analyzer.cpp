#include "provql/tstl/analyzer.hpp"

#include <functional>
#include <set>

namespace provql::tstl {

namespace {

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

SourceLoc expr_loc(const Expr& e) {
    const Expr* p = &e;
    while (p->kind != Expr::Kind::Compare) p = p->lhs.get();
    return p->loc;
}

class Checker {
public:
    explicit Checker(const Schema& schema) : schema_(schema) {}

    std::vector<Diagnostic> diags;

    void error(SourceLoc loc, std::string msg) { diags.push_back({loc, std::move(msg)}); }

    void source(const DataSource& s) {
        if (s.kind == DataSource::Kind::Db) {
            if (!schema_.sources.contains(s.name)) error(s.loc, "unknown data source " + quoted(s.name));
        } else if (!schema_.vars.contains(s.name)) {
            error(s.loc, "unbound graph variable " + quoted(s.name));
        }
    }

    void graph(const GraphExpr& g) {
        if (g.kind == GraphExpr::Kind::Var) {
            if (!schema_.vars.contains(g.var)) error(g.loc, "unbound graph variable " + quoted(g.var));
            return;
        }
        graph(*g.lhs);
        graph(*g.rhs);
    }

    // Predicate over entities. A top-level `type = k` narrows the kinds whose
    // attributes are allowed.
    void entity_pred(const Expr& e) {
        std::optional<EntityKind> kind;
        for (const Expr* c : top_conjuncts(&e)) {
            if (c->attr == Attr::Type && c->op == CmpOp::Eq) {
                if (auto k = parse_entity_kind(c->value.text)) kind = k;
            }
        }
        visit(e, [&](const Expr& c) {
            if (!is_entity_attr(c.attr)) {
                error(c.loc, "attribute " + quoted(to_string(c.attr)) + " is not defined on entities");
                return;
            }
            type_literal_check(c);
            if (kind && !entity_has_attr(*kind, c.attr)) {
                error(c.loc, "attribute " + quoted(to_string(c.attr)) + " is never defined on " +
                                 std::string(to_string(*kind)) + " entities");
            }
        });
    }

    void event_pred(const Expr& e) {
        visit(e, [&](const Expr& c) {
            if (!is_event_attr(c.attr)) {
                error(c.loc, "attribute " + quoted(to_string(c.attr)) + " is not defined on events");
            }
        });
    }

    void poi_pred(const Expr& e) {
        bool entity_only = true;
        bool event_only = true;
        for (Attr a : referenced_attrs(&e)) {
            entity_only = entity_only && is_entity_attr(a);
            event_only = event_only && is_event_attr(a);
        }
        if (entity_only) {
            entity_pred(e);
        } else if (event_only) {
            event_pred(e);
        } else {
            error(expr_loc(e), "point-of-interest constraint mixes entity and event attributes");
        }
    }

private:
    void type_literal_check(const Expr& c) {
        if (c.attr != Attr::Type || c.op == CmpOp::Like) return;
        if (!parse_entity_kind(c.value.text)) error(c.loc, "unknown entity type " + quoted(c.value.text));
    }

    static void visit(const Expr& e, const std::function<void(const Expr&)>& fn) {
        if (e.kind == Expr::Kind::Compare) {
            fn(e);
            return;
        }
        visit(*e.lhs, fn);
        if (e.rhs) visit(*e.rhs, fn);
    }

    const Schema& schema_;
};

}  // namespace

PoiScope poi_scope(const Expr& expr) {
    for (Attr a : referenced_attrs(&expr)) {
        if (!is_entity_attr(a)) return PoiScope::Events;
    }
    return PoiScope::Entities;
}

std::vector<Diagnostic> analyze(const Statement& stmt, Schema& schema) {
    Checker ck(schema);
    std::optional<std::string> bind;

    if (const auto* s = std::get_if<SearchStmt>(&stmt.node)) {
        ck.source(s->source);
        std::set<std::string> declared;
        for (const auto& n : s->nodes) {
            if (!declared.insert(n.var).second) ck.error(n.loc, "duplicate declaration of entity variable " + quoted(n.var));
            ck.entity_pred(*n.pred);
        }
        for (const RelExpr* r : rel_leaves(*s->rels)) {
            for (const std::string* v : {&r->from, &r->to}) {
                if (!declared.contains(*v)) ck.error(r->loc, "undeclared entity variable " + *v);
            }
            if (r->from == r->to) ck.error(r->loc, "relation " + quoted(r->from) + " -> itself cannot match");
        }
        bind = s->bind;
    } else if (const auto* t = std::get_if<TrackStmt>(&stmt.node)) {
        if (t->poi_var) {
            if (!schema.vars.contains(*t->poi_var)) ck.error(t->poi_loc, "unbound graph variable " + quoted(*t->poi_var));
        } else {
            ck.poi_pred(*t->poi_expr);
        }
        ck.source(t->source);
        for (const TrackFilter* f : {&t->include, &t->exclude}) {
            if (f->nodes) ck.entity_pred(*f->nodes);
            if (f->edges) ck.event_pred(*f->edges);
        }
        bind = t->bind;
    } else if (const auto* g = std::get_if<GraphOpStmt>(&stmt.node)) {
        ck.graph(*g->expr);
        bind = g->var;
    } else if (const auto* d = std::get_if<DisplayStmt>(&stmt.node)) {
        ck.graph(*d->expr);
    } else if (const auto* x = std::get_if<ExportStmt>(&stmt.node)) {
        ck.graph(*x->expr);
        if (x->path.empty()) ck.error(stmt.loc, "export path is empty");
    }

    if (bind && schema.sources.contains(*bind)) {
        ck.error(stmt.loc, "variable " + quoted(*bind) + " shadows data source " + quoted(*bind));
    }
    if (ck.diags.empty() && bind) schema.vars.insert(*bind);
    return std::move(ck.diags);
}

std::vector<Diagnostic> analyze(const std::vector<Statement>& stmts, Schema& schema) {
    std::vector<Diagnostic> out;
    for (const auto& s : stmts) {
        auto d = analyze(s, schema);
        // Keep later statements checkable: assume the failed binding exists.
        if (!d.empty()) {
            if (const auto* t = std::get_if<TrackStmt>(&s.node); t && t->bind) schema.vars.insert(*t->bind);
            if (const auto* q = std::get_if<SearchStmt>(&s.node); q && q->bind) schema.vars.insert(*q->bind);
            if (const auto* g = std::get_if<GraphOpStmt>(&s.node)) schema.vars.insert(g->var);
        }
        out.insert(out.end(), d.begin(), d.end());
    }
    return out;
}

}  // namespace provql::tstl
