#pragma once
// TSTL abstract syntax tree.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "provql/expr.hpp"
#include "provql/model.hpp"

namespace provql::tstl {

struct Diagnostic {
    SourceLoc loc;
    std::string message;

    std::string format() const;
};

/// Lexing or syntax failure; carries the first diagnostic.
class ParseError : public Error {
public:
    explicit ParseError(Diagnostic d);
    const Diagnostic& diagnostic() const { return diag_; }

private:
    Diagnostic diag_;
};

struct DataSource {
    enum class Kind : std::uint8_t { Db, Var };
    Kind kind = Kind::Db;
    std::string name;
    SourceLoc loc;
};

struct NodeDecl {
    std::string var;
    ExprPtr pred;
    SourceLoc loc;
};

enum class TimeUnit : std::uint8_t { Minutes, Seconds, Millis };

std::string_view to_string(TimeUnit unit);

/// Temporal window on `&&`: `[<1s]`, `[<=500ms]`, `[2m]` (defaults to <=).
struct Window {
    CmpOp cmp = CmpOp::Le;  // Lt or Le
    std::int64_t amount = 0;
    TimeUnit unit = TimeUnit::Seconds;

    Nanos nanos() const;
    bool admits(Nanos gap) const { return cmp == CmpOp::Lt ? gap < nanos() : gap <= nanos(); }
    bool operator==(const Window&) const = default;
};

struct RelExpr;
using RelPtr = std::shared_ptr<const RelExpr>;

/// Leaves are `from[op]->to` relations; internal nodes are And (optionally
/// windowed) or Or, built left-associatively.
struct RelExpr {
    enum class Kind : std::uint8_t { Rel, And, Or };
    Kind kind = Kind::Rel;
    std::string from;
    std::optional<Op> op;
    std::string to;
    std::optional<Window> window;
    RelPtr lhs;
    RelPtr rhs;
    SourceLoc loc;
};

/// Leaves in textual order.
std::vector<const RelExpr*> rel_leaves(const RelExpr& root);

struct SearchStmt {
    DataSource source;
    std::vector<NodeDecl> nodes;
    RelPtr rels;
    std::optional<std::string> bind;  // `return * as <id>`

    const NodeDecl* node(const std::string& var) const;
};

enum class TrackDir : std::uint8_t { Backward, Forward };

struct TrackFilter {
    ExprPtr nodes;
    ExprPtr edges;
    bool empty() const { return !nodes && !edges; }
};

struct TrackStmt {
    std::optional<std::string> bind;
    TrackDir dir = TrackDir::Backward;
    ExprPtr poi_expr;                 // `where <expr>`
    std::optional<std::string> poi_var;  // or a graph variable
    SourceLoc poi_loc;
    DataSource source;
    TrackFilter include;
    TrackFilter exclude;
    std::optional<std::int64_t> step;
    std::optional<std::int64_t> time_seconds;
};

struct GraphExpr;
using GraphPtr = std::shared_ptr<const GraphExpr>;

struct GraphExpr {
    enum class Kind : std::uint8_t { Var, Union, Intersect, Difference };
    Kind kind = Kind::Var;
    std::string var;
    GraphPtr lhs;
    GraphPtr rhs;
    SourceLoc loc;
};

struct GraphOpStmt {
    std::string var;
    GraphPtr expr;
};

struct DisplayStmt {
    GraphPtr expr;
};

struct ExportStmt {
    GraphPtr expr;
    std::string path;
};

struct Statement {
    std::variant<SearchStmt, TrackStmt, GraphOpStmt, DisplayStmt, ExportStmt> node;
    SourceLoc loc;
    std::string text;  // source slice
};

/// Structural equality ignoring locations and source text.
bool ast_equal(const Statement& a, const Statement& b);
bool ast_equal(const std::vector<Statement>& a, const std::vector<Statement>& b);

}  // namespace provql::tstl
