#include "provql/runtime.hpp"

#include <fstream>
#include <sstream>

#include "provql/search.hpp"
#include "provql/tracking.hpp"
#include "provql/tstl/parser.hpp"

namespace provql {

using nlohmann::json;
using namespace tstl;

// ---------------------------------------------------------------------------
// SourceRegistry
// ---------------------------------------------------------------------------

void SourceRegistry::add(std::shared_ptr<Database> db) {
    std::lock_guard lock(mutex_);
    dbs_[db->name()] = std::move(db);
}

std::shared_ptr<Database> SourceRegistry::get(const std::string& name) const {
    std::lock_guard lock(mutex_);
    auto it = dbs_.find(name);
    return it == dbs_.end() ? nullptr : it->second;
}

std::vector<std::shared_ptr<Database>> SourceRegistry::list() const {
    std::lock_guard lock(mutex_);
    std::vector<std::shared_ptr<Database>> out;
    for (const auto& [name, db] : dbs_) out.push_back(db);
    return out;
}

// ---------------------------------------------------------------------------
// Session
// ---------------------------------------------------------------------------

StatementError::StatementError(SourceLoc loc, const std::string& message, bool timeout)
    : Error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message), loc_(loc),
      timeout_(timeout) {}

std::string_view to_string(StatementResult::Kind kind) {
    switch (kind) {
        case StatementResult::Kind::Search: return "search";
        case StatementResult::Kind::Track: return "track";
        case StatementResult::Kind::GraphOp: return "graph-op";
        case StatementResult::Kind::Display: return "display";
        case StatementResult::Kind::Export: return "export";
    }
    return "?";
}

Session::Session(std::shared_ptr<SourceRegistry> sources, SessionOptions opts)
    : sources_(std::move(sources)), opts_(std::move(opts)) {}

Schema Session::schema() const {
    Schema s;
    for (const auto& db : sources_->list()) s.sources.insert(db->name());
    for (const auto& [name, b] : vars_) s.vars.insert(name);
    return s;
}

std::shared_ptr<const EventGraph> Session::var(const std::string& name) const {
    auto it = vars_.find(name);
    return it == vars_.end() ? nullptr : it->second.graph;
}

std::vector<std::string> Session::var_names() const {
    std::vector<std::string> out;
    for (const auto& [name, b] : vars_) out.push_back(name);
    return out;
}

void Session::bind(const std::string& name, EventGraph graph) {
    vars_[name] = Binding{std::make_shared<const EventGraph>(std::move(graph)), nullptr};
}

std::shared_ptr<const EventGraph> Session::eval(const GraphExpr& expr) const {
    switch (expr.kind) {
        case GraphExpr::Kind::Var: {
            auto g = var(expr.var);
            if (!g) throw StatementError(expr.loc, "unbound graph variable '" + expr.var + "'");
            return g;
        }
        case GraphExpr::Kind::Union:
            return std::make_shared<const EventGraph>(graph_union(*eval(*expr.lhs), *eval(*expr.rhs)));
        case GraphExpr::Kind::Intersect:
            return std::make_shared<const EventGraph>(graph_intersection(*eval(*expr.lhs), *eval(*expr.rhs)));
        case GraphExpr::Kind::Difference:
            return std::make_shared<const EventGraph>(graph_difference(*eval(*expr.lhs), *eval(*expr.rhs)));
    }
    return nullptr;
}

std::shared_ptr<const Store> Session::resolve(const DataSource& src) const {
    if (src.kind == DataSource::Kind::Db) {
        auto db = sources_->get(src.name);
        if (!db) throw StatementError(src.loc, "unknown data source '" + src.name + "'");
        return db->snapshot();
    }
    auto it = vars_.find(src.name);
    if (it == vars_.end()) throw StatementError(src.loc, "unbound graph variable '" + src.name + "'");
    if (!it->second.view) it->second.view = std::make_shared<const Store>(Store::from_graph(*it->second.graph));
    return it->second.view;
}

std::filesystem::path Session::export_target(const std::string& path) const {
    std::filesystem::path p(path);
    if (!opts_.export_root) return p;
    if (p.is_absolute()) throw Error("export path must be relative");
    for (const auto& part : p) {
        if (part == "..") throw Error("export path must stay inside the export directory");
    }
    return *opts_.export_root / p;
}

StatementResult Session::execute(const Statement& stmt) {
    const auto started = Clock::now();
    std::optional<Clock::time_point> deadline;
    if (opts_.statement_budget) deadline = started + *opts_.statement_budget;

    StatementResult res;
    res.text = stmt.text;
    res.loc = stmt.loc;
    try {
        if (const auto* s = std::get_if<SearchStmt>(&stmt.node)) {
            res.kind = StatementResult::Kind::Search;
            auto store = resolve(s->source);
            SearchOptions so;
            so.propagate = opts_.propagate;
            so.selectivity_tiebreak = opts_.selectivity_tiebreak;
            so.deadline = deadline;
            const auto found = execute_search(*s, *store, so);
            res.graph = std::make_shared<const EventGraph>(store->subgraph(found.events.rows()));
            res.display = true;
            res.var = s->bind;
        } else if (const auto* t = std::get_if<TrackStmt>(&stmt.node)) {
            res.kind = StatementResult::Kind::Track;
            auto store = resolve(t->source);
            std::shared_ptr<const EventGraph> poi;
            if (t->poi_var) {
                poi = var(*t->poi_var);
                if (!poi) throw StatementError(t->poi_loc, "unbound graph variable '" + *t->poi_var + "'");
            }
            TrackRequest req = make_request(*t, *store, poi.get());
            bool budget_is_statement = true;
            if (t->time_seconds) {
                const auto own = started + std::chrono::seconds(*t->time_seconds);
                if (!deadline || own <= *deadline) {
                    deadline = own;
                    budget_is_statement = false;
                }
            }
            req.deadline = deadline;
            const auto found = track(*store, req);
            if (found.truncated && budget_is_statement) {
                throw StatementError(stmt.loc, "statement exceeded its time budget", true);
            }
            res.graph = std::make_shared<const EventGraph>(store->subgraph(found.events.rows()));
            res.truncated = found.truncated;
            res.var = t->bind;
            res.display = !t->bind;
        } else if (const auto* g = std::get_if<GraphOpStmt>(&stmt.node)) {
            res.kind = StatementResult::Kind::GraphOp;
            res.graph = eval(*g->expr);
            res.var = g->var;
        } else if (const auto* d = std::get_if<DisplayStmt>(&stmt.node)) {
            res.kind = StatementResult::Kind::Display;
            res.graph = eval(*d->expr);
            res.display = true;
        } else if (const auto* x = std::get_if<ExportStmt>(&stmt.node)) {
            res.kind = StatementResult::Kind::Export;
            res.graph = eval(*x->expr);
            const auto target = export_target(x->path);
            write_graph(*res.graph, target);
            res.export_path = target.string();
        }
    } catch (const StatementError&) {
        history_.push_back({stmt.text, false, 0});
        throw;
    } catch (const TimeoutError& e) {
        history_.push_back({stmt.text, false, 0});
        throw StatementError(stmt.loc, e.what(), true);
    } catch (const Error& e) {
        history_.push_back({stmt.text, false, 0});
        throw StatementError(stmt.loc, e.what());
    }

    if (res.var) vars_[*res.var] = Binding{res.graph, nullptr};
    res.millis = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
    history_.push_back({stmt.text, true, res.millis});
    return res;
}

ScriptResult Session::run(std::string_view text) {
    ScriptResult out;
    std::vector<Statement> stmts;
    try {
        stmts = parse(text);
    } catch (const ParseError& e) {
        out.diagnostics.push_back(e.diagnostic());
        return out;
    }
    Schema sch = schema();
    out.diagnostics = analyze(stmts, sch);
    if (!out.diagnostics.empty()) return out;
    for (const auto& s : stmts) {
        try {
            out.results.push_back(execute(s));
        } catch (const StatementError& e) {
            out.error = e.what();
            out.error_loc = e.loc();
            out.timeout = e.timeout();
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialisation
// ---------------------------------------------------------------------------

json entity_to_json(const GraphKey& key, const Entity& e) {
    json j;
    j["source"] = key.source;
    j["id"] = e.id;
    j["kind"] = std::string(to_string(e.kind()));
    j["key"] = e.key;
    if (const auto* p = e.process()) {
        j["pid"] = p->pid;
        j["exename"] = p->exename;
        j["exepath"] = p->exepath;
        j["user"] = p->user;
        j["group"] = p->group;
        j["cmdline"] = p->cmdline;
    } else if (const auto* f = e.file()) {
        j["name"] = f->name;
        j["path"] = f->path;
        j["user"] = f->user;
        j["group"] = f->group;
    } else {
        const auto& n = *e.network();
        j["srcip"] = n.srcip;
        j["srcport"] = n.srcport;
        j["dstip"] = n.dstip;
        j["dstport"] = n.dstport;
        j["protocol"] = n.protocol;
    }
    return j;
}

json event_to_json(const GraphKey& key, const Event& e) {
    json j;
    j["source"] = key.source;
    j["id"] = e.id;
    j["src"] = e.src;
    j["dst"] = e.dst;
    j["op"] = std::string(to_string(e.op));
    j["start"] = e.start;
    j["end"] = e.end;
    j["amount"] = e.amount;
    j["category"] = std::string(to_string(e.category));
    j["note"] = e.note;
    return j;
}

json graph_to_json(const EventGraph& g) {
    json ents = json::array();
    for (const auto& [key, e] : g.entities()) ents.push_back(entity_to_json(key, e));
    json evs = json::array();
    for (const auto& [key, e] : g.events()) evs.push_back(event_to_json(key, e));
    return json{{"entities", std::move(ents)}, {"events", std::move(evs)}};
}

namespace {

template <typename T>
T field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw ValidationError(std::string("missing field '") + name + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("field '") + name + "' has the wrong type");
    }
}

EventCategory parse_category(const std::string& s) {
    for (auto c : {EventCategory::ProcessToFile, EventCategory::ProcessToProcess, EventCategory::ProcessToNetwork}) {
        if (to_string(c) == s) return c;
    }
    throw ValidationError("unknown event category '" + s + "'");
}

}  // namespace

EventGraph graph_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("entities") || !doc.contains("events")) {
        throw ValidationError("graph document needs 'entities' and 'events'");
    }
    EventGraph g;
    for (const auto& j : doc.at("entities")) {
        const auto kind = parse_entity_kind(field<std::string>(j, "kind"));
        if (!kind) throw ValidationError("unknown entity kind");
        EntityAttrs attrs;
        switch (*kind) {
            case EntityKind::Process:
                attrs = ProcessAttrs{field<std::int64_t>(j, "pid"), field<std::string>(j, "exename"),
                                     field<std::string>(j, "exepath"), field<std::string>(j, "user"),
                                     field<std::string>(j, "group"), field<std::string>(j, "cmdline")};
                break;
            case EntityKind::File:
                attrs = FileAttrs{field<std::string>(j, "name"), field<std::string>(j, "path"),
                                  field<std::string>(j, "user"), field<std::string>(j, "group")};
                break;
            case EntityKind::Network:
                attrs = NetworkAttrs{field<std::string>(j, "srcip"), field<std::int64_t>(j, "srcport"),
                                     field<std::string>(j, "dstip"), field<std::int64_t>(j, "dstport"),
                                     field<std::string>(j, "protocol")};
                break;
        }
        g.add_entity(field<std::string>(j, "source"), Entity(field<EntityId>(j, "id"), std::move(attrs)));
    }
    for (const auto& j : doc.at("events")) {
        Event e;
        e.id = field<EventId>(j, "id");
        e.src = field<EntityId>(j, "src");
        e.dst = field<EntityId>(j, "dst");
        const auto op = parse_op(field<std::string>(j, "op"));
        if (!op) throw ValidationError("unknown event op");
        e.op = *op;
        e.start = field<Nanos>(j, "start");
        e.end = field<Nanos>(j, "end");
        e.amount = field<std::uint64_t>(j, "amount");
        e.category = parse_category(field<std::string>(j, "category"));
        e.note = field<std::string>(j, "note");
        try {
            g.add_event(field<std::string>(j, "source"), e);
        } catch (const Error& err) {
            throw ValidationError(err.what());
        }
    }
    return g;
}

namespace {

std::string dot_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string node_id(const std::string& source, EntityId id) { return "\"" + dot_escape(source) + ":" + std::to_string(id) + "\""; }

}  // namespace

std::string graph_to_dot(const EventGraph& g) {
    std::ostringstream out;
    out << "digraph provenance {\n";
    for (const auto& [key, e] : g.entities()) {
        out << "  " << node_id(key.source, key.id) << " [label=\"" << to_string(e.kind()) << "\\n"
            << dot_escape(e.key) << "\"];\n";
    }
    for (const auto& [key, e] : g.events()) {
        out << "  " << node_id(key.source, e.src) << " -> " << node_id(key.source, e.dst) << " [label=\""
            << to_string(e.op) << " " << e.start << "-" << e.end << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

void write_graph(const EventGraph& graph, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    if (path.extension() == ".dot") {
        out << graph_to_dot(graph);
    } else {
        out << graph_to_json(graph).dump(1) << "\n";
    }
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

EventGraph read_graph(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("invalid graph JSON: ") + e.what());
    }
    return graph_from_json(doc);
}

}  // namespace provql
