#include "provql/tstl/parser.hpp"

#include <utility>

namespace provql::tstl {

namespace {

constexpr int kMaxDepth = 200;

class Parser {
public:
    Parser(const std::vector<Token>& toks, std::string_view text) : toks_(toks), text_(text) {
        if (toks_.empty() || toks_.back().kind != Tok::End) {
            throw ParseError({{}, "token stream must end with end of input"});
        }
    }

    std::vector<Statement> script() {
        std::vector<Statement> out;
        while (!at(Tok::End)) out.push_back(statement());
        return out;
    }

    ExprPtr lone_expr() {
        auto e = or_expr();
        expect(Tok::End, "end of expression");
        return e;
    }

private:
    // -- token helpers ------------------------------------------------------

    const Token& cur() const { return toks_[pos_]; }
    const Token& look(std::size_t n) const { return toks_[std::min(pos_ + n, toks_.size() - 1)]; }
    bool at(Tok k) const { return cur().kind == k; }

    const Token& take() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }

    bool accept(Tok k) {
        if (!at(k)) return false;
        take();
        return true;
    }

    [[noreturn]] void fail_expected(std::string_view what) const {
        const Token& t = cur();
        std::string found(to_string(t.kind));
        if (t.kind == Tok::Ident) found = "identifier '" + t.text + "'";
        throw ParseError({t.loc, "expected " + std::string(what) + ", found " + found});
    }

    const Token& expect(Tok k, std::string_view what = {}) {
        if (!at(k)) fail_expected(what.empty() ? to_string(k) : what);
        return take();
    }

    std::string ident(std::string_view what) { return expect(Tok::Ident, what).text; }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxDepth) throw ParseError({p_.cur().loc, "nesting too deep"});
        }
        ~DepthGuard() { --p_.depth_; }
        Parser& p_;
    };

    // -- statements ---------------------------------------------------------

    Statement statement() {
        const Token& first = cur();
        Statement stmt;
        stmt.loc = first.loc;
        const std::size_t begin = first.offset;

        switch (first.kind) {
            case Tok::Search: stmt.node = search(); break;
            case Tok::Back:
            case Tok::Forward: stmt.node = track(std::nullopt); break;
            case Tok::Display: {
                take();
                stmt.node = DisplayStmt{graph_expr()};
                break;
            }
            case Tok::Export: {
                take();
                ExportStmt ex;
                ex.expr = graph_expr();
                expect(Tok::As, "'as'");
                ex.path = expect(Tok::String, "export path string").text;
                stmt.node = std::move(ex);
                break;
            }
            case Tok::Ident: {
                if (look(1).kind != Tok::Eq) {
                    take();
                    fail_expected("'='");
                }
                std::string var = take().text;
                take();  // '='
                if (at(Tok::Back) || at(Tok::Forward)) {
                    stmt.node = track(std::move(var));
                } else {
                    stmt.node = GraphOpStmt{std::move(var), graph_expr()};
                }
                break;
            }
            default: fail_expected("statement");
        }
        const Token& semi = expect(Tok::Semi, "';'");
        if (!text_.empty() && semi.offset + 1 <= text_.size()) {
            stmt.text = std::string(text_.substr(begin, semi.offset + 1 - begin));
        }
        return stmt;
    }

    DataSource data_source() {
        DataSource src;
        src.loc = cur().loc;
        if (accept(Tok::Db)) {
            expect(Tok::LParen);
            src.kind = DataSource::Kind::Db;
            src.name = ident("source name");
            expect(Tok::RParen);
        } else {
            src.kind = DataSource::Kind::Var;
            src.name = ident("data source");
        }
        return src;
    }

    SearchStmt search() {
        expect(Tok::Search);
        expect(Tok::From, "'from'");
        SearchStmt s;
        s.source = data_source();
        expect(Tok::Where, "'where'");
        do {
            NodeDecl n;
            n.loc = cur().loc;
            n.var = ident("entity variable");
            expect(Tok::LBrace);
            n.pred = or_expr();
            while (accept(Tok::Comma)) n.pred = make_and(n.pred, or_expr());
            expect(Tok::RBrace, "'}'");
            s.nodes.push_back(std::move(n));
        } while (accept(Tok::Comma));
        expect(Tok::With, "'with'");
        s.rels = rel_chain();
        expect(Tok::Return, "'return'");
        expect(Tok::Star, "'*'");
        if (accept(Tok::As)) s.bind = ident("result variable");
        return s;
    }

    RelPtr rel_chain() {
        DepthGuard guard(*this);
        RelPtr lhs = rel_term();
        for (;;) {
            auto node = std::make_shared<RelExpr>();
            node->loc = cur().loc;
            if (accept(Tok::AndAnd)) {
                node->kind = RelExpr::Kind::And;
                if (at(Tok::LBrack)) node->window = window();
            } else if (accept(Tok::OrOr)) {
                node->kind = RelExpr::Kind::Or;
            } else {
                return lhs;
            }
            node->lhs = std::move(lhs);
            node->rhs = rel_term();
            lhs = std::move(node);
        }
    }

    RelPtr rel_term() {
        if (accept(Tok::LParen)) {
            RelPtr inner = rel_chain();
            expect(Tok::RParen, "')'");
            return inner;
        }
        auto rel = std::make_shared<RelExpr>();
        rel->loc = cur().loc;
        rel->from = ident("entity variable");
        if (accept(Tok::LBrack)) {
            const Token& t = cur();
            auto op = t.kind == Tok::Ident ? parse_op(t.text) : std::nullopt;
            if (!op) fail_expected("event operation");
            take();
            rel->op = op;
            expect(Tok::RBrack, "']'");
        }
        expect(Tok::Arrow, "'->'");
        rel->to = ident("entity variable");
        return rel;
    }

    Window window() {
        expect(Tok::LBrack);
        Window w;
        if (accept(Tok::Lt)) {
            w.cmp = CmpOp::Lt;
        } else if (accept(Tok::Le)) {
            w.cmp = CmpOp::Le;
        }
        w.amount = expect(Tok::Int, "window length").number;
        const Token& u = cur();
        if (u.kind == Tok::Unit || u.kind == Tok::Ident) {
            if (u.text == "m") {
                w.unit = TimeUnit::Minutes;
            } else if (u.text == "s") {
                w.unit = TimeUnit::Seconds;
            } else if (u.text == "ms") {
                w.unit = TimeUnit::Millis;
            } else {
                fail_expected("time unit (m, s or ms)");
            }
            take();
        } else {
            fail_expected("time unit (m, s or ms)");
        }
        expect(Tok::RBrack, "']'");
        return w;
    }

    TrackStmt track(std::optional<std::string> bind) {
        TrackStmt t;
        t.bind = std::move(bind);
        t.dir = take().kind == Tok::Back ? TrackDir::Backward : TrackDir::Forward;
        expect(Tok::Track, "'track'");
        t.poi_loc = cur().loc;
        if (accept(Tok::Where)) {
            t.poi_expr = or_expr();
        } else {
            t.poi_var = ident("'where' or point-of-interest variable");
        }
        expect(Tok::From, "'from'");
        t.source = data_source();
        if (accept(Tok::Include)) t.include = track_filter();
        if (accept(Tok::Exclude)) t.exclude = track_filter();
        if (accept(Tok::Limit)) {
            if (accept(Tok::Step)) t.step = expect(Tok::Int, "step count").number;
            const bool comma = accept(Tok::Comma);
            if (accept(Tok::Time)) {
                t.time_seconds = expect(Tok::Int, "time limit in seconds").number;
            } else if (comma || !t.step) {
                fail_expected("'time'");
            }
        }
        return t;
    }

    TrackFilter track_filter() {
        TrackFilter f;
        if (accept(Tok::Nodes)) {
            expect(Tok::Where, "'where'");
            f.nodes = or_expr();
        }
        const bool comma = accept(Tok::Comma);
        if (accept(Tok::Edges)) {
            expect(Tok::Where, "'where'");
            f.edges = or_expr();
        } else if (comma || !f.nodes) {
            fail_expected("'edges'");
        }
        return f;
    }

    GraphPtr graph_expr() {
        DepthGuard guard(*this);
        GraphPtr lhs = graph_term();
        for (;;) {
            GraphExpr::Kind kind;
            if (at(Tok::Pipe)) {
                kind = GraphExpr::Kind::Union;
            } else if (at(Tok::Amp)) {
                kind = GraphExpr::Kind::Intersect;
            } else if (at(Tok::Minus)) {
                kind = GraphExpr::Kind::Difference;
            } else {
                return lhs;
            }
            auto node = std::make_shared<GraphExpr>();
            node->loc = take().loc;
            node->kind = kind;
            node->lhs = std::move(lhs);
            node->rhs = graph_term();
            lhs = std::move(node);
        }
    }

    GraphPtr graph_term() {
        if (accept(Tok::LParen)) {
            GraphPtr inner = graph_expr();
            expect(Tok::RParen, "')'");
            return inner;
        }
        auto var = std::make_shared<GraphExpr>();
        var->loc = cur().loc;
        var->var = ident("graph variable");
        return var;
    }

    // -- expressions --------------------------------------------------------

    ExprPtr or_expr() {
        DepthGuard guard(*this);
        ExprPtr lhs = and_expr();
        while (accept(Tok::OrOr)) lhs = make_or(lhs, and_expr());
        return lhs;
    }

    ExprPtr and_expr() {
        ExprPtr lhs = unary();
        while (accept(Tok::AndAnd)) lhs = make_and(lhs, unary());
        return lhs;
    }

    ExprPtr unary() {
        DepthGuard guard(*this);
        if (accept(Tok::Bang)) return make_not(unary());
        if (accept(Tok::LParen)) {
            ExprPtr inner = or_expr();
            expect(Tok::RParen, "')'");
            return inner;
        }
        return comparison();
    }

    ExprPtr comparison() {
        const Token& name = cur();
        if (name.kind != Tok::Ident) fail_expected("attribute name");
        const auto attr = parse_attr(name.text);
        if (!attr) throw ParseError({name.loc, "unknown attribute '" + name.text + "'"});
        const SourceLoc loc = name.loc;
        take();

        const bool numeric = !is_string_attr(*attr);
        CmpOp op;
        switch (cur().kind) {
            case Tok::Eq: op = CmpOp::Eq; break;
            case Tok::Ne: op = CmpOp::Ne; break;
            case Tok::Like: op = CmpOp::Like; break;
            case Tok::Gt: op = CmpOp::Gt; break;
            case Tok::Ge: op = CmpOp::Ge; break;
            case Tok::Lt: op = CmpOp::Lt; break;
            case Tok::Le: op = CmpOp::Le; break;
            default: fail_expected(numeric ? "comparison operator" : "'=', '!=' or 'like'");
        }
        if (!numeric && op != CmpOp::Eq && op != CmpOp::Ne && op != CmpOp::Like) {
            throw ParseError({cur().loc, "operator '" + std::string(to_string(op)) + "' needs a numerical attribute, '" +
                                             std::string(to_string(*attr)) + "' is a string attribute"});
        }
        take();

        Literal value;
        const Token& v = cur();
        if (numeric) {
            if (v.kind != Tok::Int) fail_expected("integer");
            value = int_literal(v.number);
        } else if (v.kind == Tok::String) {
            value = string_literal(v.text);
        } else if (v.kind == Tok::Ident && parse_entity_kind(v.text)) {
            value = type_literal(*parse_entity_kind(v.text));
        } else {
            fail_expected("string or entity type");
        }
        take();
        return make_compare(*attr, op, std::move(value), loc);
    }

    const std::vector<Token>& toks_;
    std::string_view text_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

// -- printing ---------------------------------------------------------------

bool is_binary(const Expr& e) { return e.kind == Expr::Kind::And || e.kind == Expr::Kind::Or; }

std::string wrap(const Expr& e) { return is_binary(e) ? "(" + to_tstl(e) + ")" : to_tstl(e); }

std::string wrap(const RelExpr& r) { return r.kind == RelExpr::Kind::Rel ? to_tstl(r) : "(" + to_tstl(r) + ")"; }

std::string wrap(const GraphExpr& g) { return g.kind == GraphExpr::Kind::Var ? g.var : "(" + to_tstl(g) + ")"; }

std::string source_text(const DataSource& s) { return s.kind == DataSource::Kind::Db ? "db(" + s.name + ")" : s.name; }

std::string filter_text(const TrackFilter& f) {
    std::string out;
    if (f.nodes) out += "nodes where " + to_tstl(*f.nodes);
    if (f.edges) out += (out.empty() ? "" : ", ") + std::string("edges where ") + to_tstl(*f.edges);
    return out;
}

struct StmtPrinter {
    std::string operator()(const SearchStmt& s) const {
        std::string out = "search from " + source_text(s.source) + " where ";
        for (std::size_t i = 0; i < s.nodes.size(); ++i) {
            if (i > 0) out += ", ";
            out += s.nodes[i].var + "{" + to_tstl(*s.nodes[i].pred) + "}";
        }
        out += " with " + to_tstl(*s.rels) + " return *";
        if (s.bind) out += " as " + *s.bind;
        return out;
    }

    std::string operator()(const TrackStmt& t) const {
        std::string out;
        if (t.bind) out += *t.bind + " = ";
        out += t.dir == TrackDir::Backward ? "back track " : "forward track ";
        out += t.poi_expr ? "where " + to_tstl(*t.poi_expr) : t.poi_var.value_or("");
        out += " from " + source_text(t.source);
        if (!t.include.empty()) out += " include " + filter_text(t.include);
        if (!t.exclude.empty()) out += " exclude " + filter_text(t.exclude);
        if (t.step || t.time_seconds) {
            out += " limit";
            if (t.step) out += " step " + std::to_string(*t.step);
            if (t.step && t.time_seconds) out += ",";
            if (t.time_seconds) out += " time " + std::to_string(*t.time_seconds);
        }
        return out;
    }

    std::string operator()(const GraphOpStmt& g) const { return g.var + " = " + to_tstl(*g.expr); }
    std::string operator()(const DisplayStmt& d) const { return "display " + to_tstl(*d.expr); }
    std::string operator()(const ExportStmt& e) const {
        return "export " + to_tstl(*e.expr) + " as " + quote(e.path);
    }
};

}  // namespace

std::vector<Statement> parse(const std::vector<Token>& tokens, std::string_view text) {
    return Parser(tokens, text).script();
}

std::vector<Statement> parse(std::string_view text) { return parse(tokenize(text), text); }

ExprPtr parse_expr(std::string_view text) {
    const auto toks = tokenize(text);
    return Parser(toks, text).lone_expr();
}

std::string quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string to_tstl(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Compare: {
            std::string out(to_string(e.attr));
            out += " ";
            out += to_string(e.op);
            out += " ";
            switch (e.value.kind) {
                case Literal::Kind::String: out += quote(e.value.text); break;
                case Literal::Kind::TypeId: out += e.value.text; break;
                case Literal::Kind::Int: out += std::to_string(e.value.number); break;
            }
            return out;
        }
        case Expr::Kind::And: return wrap(*e.lhs) + " && " + wrap(*e.rhs);
        case Expr::Kind::Or: return wrap(*e.lhs) + " || " + wrap(*e.rhs);
        case Expr::Kind::Not: return "!" + wrap(*e.lhs);
    }
    return {};
}

std::string to_tstl(const RelExpr& r) {
    switch (r.kind) {
        case RelExpr::Kind::Rel: {
            std::string out = r.from;
            if (r.op) out += "[" + std::string(to_string(*r.op)) + "]";
            return out + "->" + r.to;
        }
        case RelExpr::Kind::And: {
            std::string op = "&&";
            if (r.window) {
                op += "[";
                op += r.window->cmp == CmpOp::Lt ? "<" : "<=";
                op += std::to_string(r.window->amount);
                op += to_string(r.window->unit);
                op += "]";
            }
            return wrap(*r.lhs) + " " + op + " " + wrap(*r.rhs);
        }
        case RelExpr::Kind::Or: return wrap(*r.lhs) + " || " + wrap(*r.rhs);
    }
    return {};
}

std::string to_tstl(const GraphExpr& g) {
    switch (g.kind) {
        case GraphExpr::Kind::Var: return g.var;
        case GraphExpr::Kind::Union: return wrap(*g.lhs) + " | " + wrap(*g.rhs);
        case GraphExpr::Kind::Intersect: return wrap(*g.lhs) + " & " + wrap(*g.rhs);
        case GraphExpr::Kind::Difference: return wrap(*g.lhs) + " - " + wrap(*g.rhs);
    }
    return {};
}

std::string to_tstl(const Statement& stmt) { return std::visit(StmtPrinter{}, stmt.node) + ";"; }

std::string to_tstl(const std::vector<Statement>& stmts) {
    std::string out;
    for (const auto& s : stmts) out += to_tstl(s) + "\n";
    return out;
}

}  // namespace provql::tstl
