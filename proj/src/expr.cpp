#include "provql/expr.hpp"

#include <algorithm>

namespace provql {

std::string_view to_string(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Like: return "like";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
    }
    return "?";
}

ExprPtr make_compare(Attr attr, CmpOp op, Literal value, SourceLoc loc) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Compare;
    e->attr = attr;
    e->op = op;
    e->value = std::move(value);
    e->loc = loc;
    return e;
}

namespace {

ExprPtr make_binary(Expr::Kind kind, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->loc = lhs ? lhs->loc : SourceLoc{};
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

}  // namespace

ExprPtr make_and(ExprPtr lhs, ExprPtr rhs) { return make_binary(Expr::Kind::And, std::move(lhs), std::move(rhs)); }
ExprPtr make_or(ExprPtr lhs, ExprPtr rhs) { return make_binary(Expr::Kind::Or, std::move(lhs), std::move(rhs)); }

ExprPtr make_not(ExprPtr inner) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Not;
    e->loc = inner ? inner->loc : SourceLoc{};
    e->lhs = std::move(inner);
    return e;
}

Literal string_literal(std::string text) { return Literal{Literal::Kind::String, std::move(text), 0}; }
Literal type_literal(EntityKind kind) { return Literal{Literal::Kind::TypeId, std::string(to_string(kind)), 0}; }
Literal int_literal(std::int64_t value) { return Literal{Literal::Kind::Int, {}, value}; }

bool expr_equal(const Expr* a, const Expr* b) {
    if (a == nullptr || b == nullptr) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Expr::Kind::Compare:
            return a->attr == b->attr && a->op == b->op && a->value == b->value;
        case Expr::Kind::Not:
            return expr_equal(a->lhs.get(), b->lhs.get());
        default:
            return expr_equal(a->lhs.get(), b->lhs.get()) && expr_equal(a->rhs.get(), b->rhs.get());
    }
}

int count_atoms(const Expr* expr) {
    if (expr == nullptr) return 0;
    switch (expr->kind) {
        case Expr::Kind::Compare: return 1;
        case Expr::Kind::Not: return count_atoms(expr->lhs.get());
        default: return count_atoms(expr->lhs.get()) + count_atoms(expr->rhs.get());
    }
}

namespace {

void collect_attrs(const Expr* expr, std::vector<Attr>& out) {
    if (expr == nullptr) return;
    if (expr->kind == Expr::Kind::Compare) {
        if (std::find(out.begin(), out.end(), expr->attr) == out.end()) out.push_back(expr->attr);
        return;
    }
    collect_attrs(expr->lhs.get(), out);
    collect_attrs(expr->rhs.get(), out);
}

void collect_conjuncts(const Expr* expr, std::vector<const Expr*>& out) {
    if (expr == nullptr) return;
    if (expr->kind == Expr::Kind::And) {
        collect_conjuncts(expr->lhs.get(), out);
        collect_conjuncts(expr->rhs.get(), out);
    } else if (expr->kind == Expr::Kind::Compare) {
        out.push_back(expr);
    }
}

}  // namespace

std::vector<Attr> referenced_attrs(const Expr* expr) {
    std::vector<Attr> out;
    collect_attrs(expr, out);
    return out;
}

std::vector<const Expr*> top_conjuncts(const Expr* expr) {
    std::vector<const Expr*> out;
    collect_conjuncts(expr, out);
    return out;
}

bool like_match(std::string_view text, std::string_view pattern) {
    std::size_t t = 0;
    std::size_t p = 0;
    std::size_t star_p = std::string_view::npos;
    std::size_t star_t = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '_' || pattern[p] == text[t])) {
            ++t;
            ++p;
        } else if (p < pattern.size() && pattern[p] == '%') {
            star_p = p++;
            star_t = t;
        } else if (star_p != std::string_view::npos) {
            p = star_p + 1;
            t = ++star_t;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '%') ++p;
    return p == pattern.size();
}

bool compare(const AttrValue& lhs, CmpOp op, const Literal& rhs) {
    if (const auto* s = std::get_if<std::string_view>(&lhs)) {
        if (rhs.kind == Literal::Kind::Int) return false;
        switch (op) {
            case CmpOp::Eq: return *s == rhs.text;
            case CmpOp::Ne: return *s != rhs.text;
            case CmpOp::Like: return like_match(*s, rhs.text);
            default: return false;
        }
    }
    if (const auto* n = std::get_if<std::int64_t>(&lhs)) {
        if (rhs.kind != Literal::Kind::Int) return false;
        switch (op) {
            case CmpOp::Eq:
            case CmpOp::Like: return *n == rhs.number;
            case CmpOp::Ne: return *n != rhs.number;
            case CmpOp::Gt: return *n > rhs.number;
            case CmpOp::Ge: return *n >= rhs.number;
            case CmpOp::Lt: return *n < rhs.number;
            case CmpOp::Le: return *n <= rhs.number;
        }
    }
    return false;
}

}  // namespace provql
