#pragma once
// Semantic checks over parsed statements.

#include <set>
#include <string>
#include <vector>

#include "provql/tstl/ast.hpp"

namespace provql::tstl {

/// Names visible to a statement: registered `db(...)` sources and bound
/// graph variables.
struct Schema {
    std::set<std::string> sources;
    std::set<std::string> vars;
};

/// What a track POI expression ranges over.
enum class PoiScope : std::uint8_t { Entities, Events };

/// Entity scope when every referenced attribute is an entity attribute,
/// otherwise event scope. Mixed expressions are reported by analyze().
PoiScope poi_scope(const Expr& expr);

/// Collects every diagnostic for one statement. Bindings made by the
/// statement are added to `schema` when it is clean.
std::vector<Diagnostic> analyze(const Statement& stmt, Schema& schema);

/// Analyzes statements in order, threading bindings through.
std::vector<Diagnostic> analyze(const std::vector<Statement>& stmts, Schema& schema);

}  // namespace provql::tstl
