#pragma once
// HTTP front-end: sessions, statement execution and paged graph retrieval.

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "provql/runtime.hpp"

namespace provql {

inline constexpr std::size_t kMaxPageSize = 2000;

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::map<std::string, std::string> snapshots;  // source name -> snapshot file
    std::chrono::milliseconds max_statement{120000};
    std::size_t page_size = kMaxPageSize;
    std::optional<std::filesystem::path> export_root;
};

/// Reads the JSON config file. Keys: listen ("host:port"), snapshots
/// ({name: path}), max_statement_ms, page_size, export_root.
ServerConfig load_server_config(const std::filesystem::path& path);

/// Applies PROVQL_LISTEN, PROVQL_SNAPSHOTS ("name=path,..."),
/// PROVQL_MAX_STATEMENT_MS, PROVQL_PAGE_SIZE and PROVQL_EXPORT_ROOT.
void apply_env_overrides(ServerConfig& cfg, const std::function<const char*(const char*)>& getenv_fn);

/// Entities first, then events, both in (source, id) order.
nlohmann::json graph_page(const EventGraph& graph, std::size_t page, std::size_t page_size);

class Server {
public:
    Server(std::shared_ptr<SourceRegistry> sources, ServerConfig cfg);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Blocks until stop(). Returns false if the address cannot be bound.
    bool listen();
    /// Binds an ephemeral port on the configured host; serve with listen_after_bind().
    int bind_any_port();
    bool listen_after_bind();
    void wait_until_ready() const;
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace provql
