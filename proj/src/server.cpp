#include "provql/server.hpp"

#include <atomic>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>

#include "httplib.h"

namespace provql {

using nlohmann::json;

namespace {

void parse_listen(const std::string& text, ServerConfig& cfg) {
    const auto colon = text.rfind(':');
    if (colon == std::string::npos) throw ValidationError("listen address must be host:port");
    cfg.host = text.substr(0, colon);
    try {
        cfg.port = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw ValidationError("bad port in listen address '" + text + "'");
    }
    if (cfg.port < 0 || cfg.port > 65535) throw ValidationError("port out of range");
}

std::size_t parse_size(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const auto v = std::stoll(text, &used);
        if (used != text.size() || v < 0) throw std::invalid_argument(text);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ValidationError(std::string("bad value for ") + what + ": '" + text + "'");
    }
}

void set_page_size(ServerConfig& cfg, std::size_t n) {
    if (n == 0) throw ValidationError("page size must be positive");
    cfg.page_size = std::min(n, kMaxPageSize);
}

}  // namespace

ServerConfig load_server_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open config '" + path.string() + "'");
    ServerConfig cfg;
    try {
        const json doc = json::parse(in);
        if (doc.contains("listen")) parse_listen(doc["listen"].get<std::string>(), cfg);
        if (doc.contains("snapshots")) {
            for (const auto& [name, file] : doc["snapshots"].items()) cfg.snapshots[name] = file.get<std::string>();
        }
        if (doc.contains("max_statement_ms")) {
            cfg.max_statement = std::chrono::milliseconds(doc["max_statement_ms"].get<std::int64_t>());
        }
        if (doc.contains("page_size")) set_page_size(cfg, doc["page_size"].get<std::size_t>());
        if (doc.contains("export_root")) cfg.export_root = doc["export_root"].get<std::string>();
    } catch (const json::exception& e) {
        throw ValidationError("malformed config '" + path.string() + "': " + e.what());
    }
    return cfg;
}

void apply_env_overrides(ServerConfig& cfg, const std::function<const char*(const char*)>& getenv_fn) {
    if (const char* v = getenv_fn("PROVQL_LISTEN")) parse_listen(v, cfg);
    if (const char* v = getenv_fn("PROVQL_SNAPSHOTS")) {
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0) throw ValidationError("PROVQL_SNAPSHOTS entries are name=path");
            cfg.snapshots[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    if (const char* v = getenv_fn("PROVQL_MAX_STATEMENT_MS")) {
        cfg.max_statement = std::chrono::milliseconds(parse_size(v, "PROVQL_MAX_STATEMENT_MS"));
    }
    if (const char* v = getenv_fn("PROVQL_PAGE_SIZE")) set_page_size(cfg, parse_size(v, "PROVQL_PAGE_SIZE"));
    if (const char* v = getenv_fn("PROVQL_EXPORT_ROOT")) cfg.export_root = std::string(v);
}

json graph_page(const EventGraph& graph, std::size_t page, std::size_t page_size) {
    const std::size_t total = graph.node_count() + graph.edge_count();
    const std::size_t begin = std::min(total, page * page_size);
    const std::size_t end = std::min(total, begin + page_size);
    json entities = json::array();
    json events = json::array();
    std::size_t i = 0;
    for (const auto& [key, e] : graph.entities()) {
        if (i >= end) break;
        if (i++ >= begin) entities.push_back(entity_to_json(key, e));
    }
    for (const auto& [key, e] : graph.events()) {
        if (i >= end) break;
        if (i++ >= begin) events.push_back(event_to_json(key, e));
    }
    json out{{"nodes", graph.node_count()},
             {"edges", graph.edge_count()},
             {"page", page},
             {"pages", total == 0 ? 1 : (total + page_size - 1) / page_size},
             {"entities", std::move(entities)},
             {"events", std::move(events)}};
    out["next_page"] = end < total ? json(page + 1) : json(nullptr);
    return out;
}

struct Server::Impl {
    struct SessionSlot {
        std::mutex busy;
        Session session;
        std::chrono::system_clock::time_point created = std::chrono::system_clock::now();
        SessionSlot(std::shared_ptr<SourceRegistry> sources, SessionOptions opts)
            : session(std::move(sources), std::move(opts)) {}
    };

    std::shared_ptr<SourceRegistry> sources;
    ServerConfig cfg;
    httplib::Server http;
    std::mutex sessions_mutex;
    std::map<std::string, std::shared_ptr<SessionSlot>> sessions;
    std::string id_prefix;
    std::atomic<std::uint64_t> next_id{1};

    Impl(std::shared_ptr<SourceRegistry> s, ServerConfig c) : sources(std::move(s)), cfg(std::move(c)) {
        std::random_device rd;
        std::ostringstream os;
        os << std::hex << (static_cast<std::uint64_t>(rd()) << 32 | rd());
        id_prefix = os.str();
        routes();
    }

    static void reply(httplib::Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    static json error_body(const std::string& message) { return {{"error", message}}; }

    std::shared_ptr<SessionSlot> find(const std::string& id) {
        std::lock_guard<std::mutex> lock(sessions_mutex);
        auto it = sessions.find(id);
        return it == sessions.end() ? nullptr : it->second;
    }

    static json summary(const EventGraph& g) { return {{"nodes", g.node_count()}, {"edges", g.edge_count()}}; }

    json statement_json(const StatementResult& r) const {
        json j{{"kind", std::string(to_string(r.kind))},
               {"text", r.text},
               {"line", r.loc.line},
               {"col", r.loc.column},
               {"millis", r.millis},
               {"truncated", r.truncated}};
        j["var"] = r.var ? json(*r.var) : json(nullptr);
        if (r.graph) j["summary"] = summary(*r.graph);
        if (r.display && r.graph) j["graph"] = graph_page(*r.graph, 0, cfg.page_size);
        if (!r.export_path.empty()) j["export"] = r.export_path;
        return j;
    }

    void create_session(const httplib::Request&, httplib::Response& res) {
        SessionOptions opts;
        opts.statement_budget = cfg.max_statement;
        opts.export_root = cfg.export_root;
        const std::string id = id_prefix + "-" + std::to_string(next_id++);
        {
            std::lock_guard<std::mutex> lock(sessions_mutex);
            sessions[id] = std::make_shared<SessionSlot>(sources, opts);
        }
        reply(res, 201, {{"sessionId", id}});
    }

    void execute(const httplib::Request& req, httplib::Response& res) {
        auto slot = find(req.path_params.at("id"));
        if (!slot) return reply(res, 404, error_body("unknown session"));
        std::string text;
        try {
            const json body = json::parse(req.body);
            text = body.at("text").get<std::string>();
        } catch (const json::exception&) {
            return reply(res, 400, error_body("request body must be {\"text\": \"...\"}"));
        }
        std::unique_lock<std::mutex> lock(slot->busy, std::try_to_lock);
        if (!lock.owns_lock()) return reply(res, 409, error_body("session is executing another request"));

        const ScriptResult out = slot->session.run(text);
        if (!out.diagnostics.empty()) {
            json diags = json::array();
            for (const auto& d : out.diagnostics) {
                diags.push_back({{"line", d.loc.line}, {"col", d.loc.column}, {"message", d.message}});
            }
            return reply(res, 400, {{"diagnostics", diags}});
        }
        json results = json::array();
        for (const auto& r : out.results) results.push_back(statement_json(r));
        json body{{"results", results}};
        if (out.error) {
            body["error"] = {{"message", *out.error}, {"line", out.error_loc.line}, {"col", out.error_loc.column}};
            return reply(res, out.timeout ? 408 : 422, body);
        }
        reply(res, 200, body);
    }

    void list_vars(const httplib::Request& req, httplib::Response& res) {
        auto slot = find(req.path_params.at("id"));
        if (!slot) return reply(res, 404, error_body("unknown session"));
        std::unique_lock<std::mutex> lock(slot->busy, std::try_to_lock);
        if (!lock.owns_lock()) return reply(res, 409, error_body("session is executing another request"));
        json vars = json::array();
        for (const auto& name : slot->session.var_names()) {
            json v = summary(*slot->session.var(name));
            v["name"] = name;
            vars.push_back(std::move(v));
        }
        reply(res, 200, {{"vars", vars}});
    }

    void get_var(const httplib::Request& req, httplib::Response& res) {
        auto slot = find(req.path_params.at("id"));
        if (!slot) return reply(res, 404, error_body("unknown session"));
        std::size_t page = 0;
        if (req.has_param("page")) {
            try {
                page = parse_size(req.get_param_value("page"), "page");
            } catch (const ValidationError& e) {
                return reply(res, 400, error_body(e.what()));
            }
        }
        std::shared_ptr<const EventGraph> g;
        {
            std::unique_lock<std::mutex> lock(slot->busy, std::try_to_lock);
            if (!lock.owns_lock()) return reply(res, 409, error_body("session is executing another request"));
            g = slot->session.var(req.path_params.at("name"));
        }
        if (!g) return reply(res, 404, error_body("unknown variable"));
        json body = graph_page(*g, page, cfg.page_size);
        body["name"] = req.path_params.at("name");
        reply(res, 200, body);
    }

    void list_sources(const httplib::Request&, httplib::Response& res) {
        json out = json::array();
        for (const auto& db : sources->list()) {
            const auto snap = db->snapshot();
            out.push_back({{"name", db->name()}, {"entities", snap->entity_count()}, {"events", snap->event_count()}});
        }
        reply(res, 200, {{"sources", out}});
    }

    void routes() {
        http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                  {"Access-Control-Allow-Headers", "Content-Type"},
                                  {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
        http.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        http.Post("/sessions", [this](const auto& req, auto& res) { create_session(req, res); });
        http.Post("/sessions/:id/execute", [this](const auto& req, auto& res) { execute(req, res); });
        http.Get("/sessions/:id/vars", [this](const auto& req, auto& res) { list_vars(req, res); });
        http.Get("/sessions/:id/vars/:name", [this](const auto& req, auto& res) { get_var(req, res); });
        http.Get("/sources", [this](const auto& req, auto& res) { list_sources(req, res); });
        http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            std::string msg = "internal error";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                msg = e.what();
            } catch (...) {
            }
            reply(res, 500, error_body(msg));
        });
    }
};

Server::Server(std::shared_ptr<SourceRegistry> sources, ServerConfig cfg)
    : impl_(std::make_unique<Impl>(std::move(sources), std::move(cfg))) {}

Server::~Server() = default;

bool Server::listen() { return impl_->http.listen(impl_->cfg.host, impl_->cfg.port); }

int Server::bind_any_port() { return impl_->http.bind_to_any_port(impl_->cfg.host); }

bool Server::listen_after_bind() { return impl_->http.listen_after_bind(); }

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

void Server::stop() { impl_->http.stop(); }

}  // namespace provql
