#pragma once
// Boolean attribute expressions: the predicate language shared by node
// declarations, track filters and POI constraints.

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "provql/model.hpp"

namespace provql {

struct SourceLoc {
    int line = 0;
    int column = 0;
};

enum class CmpOp : std::uint8_t { Eq, Ne, Like, Gt, Ge, Lt, Le };

std::string_view to_string(CmpOp op);

struct Literal {
    enum class Kind : std::uint8_t { String, TypeId, Int };
    Kind kind = Kind::String;
    std::string text;
    std::int64_t number = 0;

    bool operator==(const Literal&) const = default;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind : std::uint8_t { Compare, And, Or, Not };

    Kind kind = Kind::Compare;
    // Compare
    Attr attr = Attr::Type;
    CmpOp op = CmpOp::Eq;
    Literal value;
    // And / Or use both, Not uses lhs.
    ExprPtr lhs;
    ExprPtr rhs;
    SourceLoc loc;
};

ExprPtr make_compare(Attr attr, CmpOp op, Literal value, SourceLoc loc = {});
ExprPtr make_and(ExprPtr lhs, ExprPtr rhs);
ExprPtr make_or(ExprPtr lhs, ExprPtr rhs);
ExprPtr make_not(ExprPtr inner);

Literal string_literal(std::string text);
Literal type_literal(EntityKind kind);
Literal int_literal(std::int64_t value);

/// Structural equality, locations ignored. Null pointers compare equal.
bool expr_equal(const Expr* a, const Expr* b);
inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) { return expr_equal(a.get(), b.get()); }

/// Number of atomic comparisons.
int count_atoms(const Expr* expr);

/// Attributes referenced anywhere in the expression.
std::vector<Attr> referenced_attrs(const Expr* expr);

/// Comparisons reachable from the root through `&&` only.
std::vector<const Expr*> top_conjuncts(const Expr* expr);

/// SQL LIKE: `%` any run, `_` one byte, case-sensitive.
bool like_match(std::string_view text, std::string_view pattern);

/// Comparing a null attribute yields false for every operator.
bool compare(const AttrValue& lhs, CmpOp op, const Literal& rhs);

template <typename Row>
bool eval(const Expr& expr, const Row& row) {
    switch (expr.kind) {
        case Expr::Kind::Compare: return compare(attr_get(row, expr.attr), expr.op, expr.value);
        case Expr::Kind::And: return eval(*expr.lhs, row) && eval(*expr.rhs, row);
        case Expr::Kind::Or: return eval(*expr.lhs, row) || eval(*expr.rhs, row);
        case Expr::Kind::Not: return !eval(*expr.lhs, row);
    }
    return false;
}

/// A null predicate accepts everything.
template <typename Row>
bool eval_opt(const Expr* expr, const Row& row) {
    return expr == nullptr || eval(*expr, row);
}

}  // namespace provql
