#pragma once
// Investigation sessions: source registry, graph variables, statement
// dispatch, graph algebra and graph import/export.

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "provql/store.hpp"
#include "provql/tstl/analyzer.hpp"
#include "provql/tstl/ast.hpp"

namespace provql {

/// Named databases shared by all sessions.
class SourceRegistry {
public:
    void add(std::shared_ptr<Database> db);
    std::shared_ptr<Database> get(const std::string& name) const;
    std::vector<std::shared_ptr<Database>> list() const;  // sorted by name

private:
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Database>> dbs_;
};

struct SessionOptions {
    // Wall-clock budget per statement; TimeoutError when exceeded.
    std::optional<std::chrono::milliseconds> statement_budget;
    // When set, export paths must be relative and stay inside this directory.
    std::optional<std::filesystem::path> export_root;
    bool propagate = true;
    bool selectivity_tiebreak = false;
};

/// Statement failure with the statement's location.
class StatementError : public Error {
public:
    StatementError(SourceLoc loc, const std::string& message, bool timeout = false);
    SourceLoc loc() const { return loc_; }
    bool timeout() const { return timeout_; }

private:
    SourceLoc loc_;
    bool timeout_;
};

struct StatementResult {
    enum class Kind : std::uint8_t { Search, Track, GraphOp, Display, Export };
    Kind kind = Kind::Search;
    std::string text;
    SourceLoc loc;
    std::optional<std::string> var;  // bound variable
    std::shared_ptr<const EventGraph> graph;
    bool display = false;  // result should be rendered
    bool truncated = false;
    std::string export_path;
    double millis = 0;
};

std::string_view to_string(StatementResult::Kind kind);

struct ScriptResult {
    std::vector<tstl::Diagnostic> diagnostics;  // parse or semantic; nothing ran
    std::vector<StatementResult> results;       // statements that completed
    std::optional<std::string> error;           // runtime failure that stopped the script
    SourceLoc error_loc;
    bool timeout = false;

    bool ok() const { return diagnostics.empty() && !error; }
};

struct HistoryEntry {
    std::string text;
    bool ok = true;
    double millis = 0;
};

class Session {
public:
    explicit Session(std::shared_ptr<SourceRegistry> sources, SessionOptions opts = {});

    /// Parses, analyzes the whole script, then executes it statement by
    /// statement, stopping at the first runtime error.
    ScriptResult run(std::string_view text);

    /// Executes one analyzed statement. Throws StatementError.
    StatementResult execute(const tstl::Statement& stmt);

    tstl::Schema schema() const;
    std::shared_ptr<const EventGraph> var(const std::string& name) const;
    std::vector<std::string> var_names() const;
    void bind(const std::string& name, EventGraph graph);
    const std::vector<HistoryEntry>& history() const { return history_; }
    const SourceRegistry& sources() const { return *sources_; }
    SessionOptions& options() { return opts_; }

    /// Evaluates | & - over bound variables.
    std::shared_ptr<const EventGraph> eval(const tstl::GraphExpr& expr) const;

private:
    struct Binding {
        std::shared_ptr<const EventGraph> graph;
        mutable std::shared_ptr<const Store> view;
    };
    std::shared_ptr<const Store> resolve(const tstl::DataSource& src) const;
    std::filesystem::path export_target(const std::string& path) const;

    std::shared_ptr<SourceRegistry> sources_;
    SessionOptions opts_;
    std::map<std::string, Binding> vars_;
    std::vector<HistoryEntry> history_;
};

// -- graph serialisation ------------------------------------------------------

nlohmann::json entity_to_json(const GraphKey& key, const Entity& entity);
nlohmann::json event_to_json(const GraphKey& key, const Event& event);
/// {"entities":[...],"events":[...]} ordered by (source, id).
nlohmann::json graph_to_json(const EventGraph& graph);
/// Throws ValidationError for malformed documents or open graphs.
EventGraph graph_from_json(const nlohmann::json& doc);
std::string graph_to_dot(const EventGraph& graph);

/// Format from the extension: `.dot` writes DOT, anything else JSON.
void write_graph(const EventGraph& graph, const std::filesystem::path& path);
EventGraph read_graph(const std::filesystem::path& path);

}  // namespace provql
