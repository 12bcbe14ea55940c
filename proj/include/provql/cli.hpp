#pragma once
// Console rendering and the interactive loop shared by the command-line tool.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>

#include "provql/runtime.hpp"

namespace provql {

/// Duration text in the query language's units: "1s", "500ms", "2m" (or "0").
/// Throws ValidationError.
Nanos parse_duration(std::string_view text);

/// "g2: 14 nodes, 12 edges".
std::string render_summary(const std::string& label, const EventGraph& graph);

/// One line per event, "src -[op]-> dst", at most `max_rows` of them.
std::string render_preview(const EventGraph& graph, std::size_t max_rows = 20);

/// Prints one script result: displayed graphs to `out`, timings to `err`.
/// Returns the process exit code: 0 ok, 2 parse/semantic, 3 runtime.
int report(const ScriptResult& result, std::ostream& out, std::ostream& err);

/// Reads statements up to `;`, runs them, handles :vars, :sources, :quit.
void run_repl(Session& session, std::istream& in, std::ostream& out, std::ostream& err);

/// Registers every `<name>.snap` in `data_dir`, then `extra` (name -> file), which wins.
std::shared_ptr<SourceRegistry> load_sources(const std::filesystem::path& data_dir,
                                             const std::map<std::string, std::string>& extra);

}  // namespace provql
