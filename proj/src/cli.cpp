#include "provql/cli.hpp"

#include <cctype>

#include <iostream>
#include <sstream>

namespace provql {

Nanos parse_duration(std::string_view text) {
    std::size_t digits = 0;
    while (digits < text.size() && std::isdigit(static_cast<unsigned char>(text[digits]))) ++digits;
    if (digits == 0 || digits > 12) throw ValidationError("invalid duration '" + std::string(text) + "'");
    const Nanos value = std::stoll(std::string(text.substr(0, digits)));
    const std::string_view unit = text.substr(digits);
    if (unit == "ms") return value * kNanosPerMs;
    if (unit == "s") return value * kNanosPerSecond;
    if (unit == "m") return value * kNanosPerMinute;
    if (unit.empty() && value == 0) return 0;
    throw ValidationError("invalid duration '" + std::string(text) + "': use a number with m, s or ms");
}

std::string render_summary(const std::string& label, const EventGraph& graph) {
    return label + ": " + std::to_string(graph.node_count()) + " nodes, " + std::to_string(graph.edge_count()) +
           " edges";
}

std::string render_preview(const EventGraph& graph, std::size_t max_rows) {
    std::ostringstream out;
    std::size_t shown = 0;
    for (const auto& [key, ev] : graph.events()) {
        if (shown == max_rows) {
            out << "  ... " << graph.edge_count() - shown << " more\n";
            break;
        }
        out << "  " << graph.src_of(key).key << " -[" << to_string(ev.op) << "]-> " << graph.dst_of(key).key << '\n';
        ++shown;
    }
    return out.str();
}

int report(const ScriptResult& result, std::ostream& out, std::ostream& err) {
    for (const auto& d : result.diagnostics) err << "error: " << d.format() << '\n';
    if (!result.diagnostics.empty()) return 2;
    for (const auto& r : result.results) {
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.2f", r.millis);
        err << "[" << r.loc.line << "] " << to_string(r.kind) << " " << ms << " ms" << (r.truncated ? " (truncated)" : "")
            << '\n';
        if (r.display && r.graph) {
            out << render_summary(r.var ? *r.var : "result", *r.graph) << '\n' << render_preview(*r.graph);
        } else if (r.var && r.graph) {
            out << render_summary(*r.var, *r.graph) << '\n';
        }
        if (!r.export_path.empty()) out << "exported " << r.export_path << '\n';
    }
    if (result.error) {
        err << "error: " << result.error_loc.line << ":" << result.error_loc.column << ": " << *result.error << '\n';
        return 3;
    }
    return 0;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// True once the buffer ends with a `;` that is outside any string literal.
bool complete(const std::string& buf) {
    bool in_string = false;
    bool escaped = false;
    char last = 0;
    for (char c : buf) {
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            last = c;
            continue;
        }
        if (c == '"') in_string = true;
        if (c != ' ' && c != '\t' && c != '\r' && c != '\n') last = c;
    }
    return !in_string && last == ';';
}

}  // namespace

void run_repl(Session& session, std::istream& in, std::ostream& out, std::ostream& err) {
    std::string buffer;
    std::string line;
    out << "provql> " << std::flush;
    while (std::getline(in, line)) {
        const std::string cmd = trim(line);
        if (buffer.empty() && !cmd.empty() && cmd.front() == ':') {
            if (cmd == ":quit" || cmd == ":q") return;
            if (cmd == ":vars") {
                for (const auto& name : session.var_names()) out << render_summary(name, *session.var(name)) << '\n';
            } else if (cmd == ":sources") {
                for (const auto& db : session.sources().list()) {
                    const auto snap = db->snapshot();
                    out << db->name() << ": " << snap->entity_count() << " entities, " << snap->event_count()
                        << " events\n";
                }
            } else {
                err << "unknown command " << cmd << " (try :vars, :sources, :quit)\n";
            }
            out << "provql> " << std::flush;
            continue;
        }
        buffer += line;
        buffer += '\n';
        if (!complete(buffer)) {
            if (trim(buffer).empty()) {
                buffer.clear();
                out << "provql> " << std::flush;
            } else {
                out << "   ...> " << std::flush;
            }
            continue;
        }
        report(session.run(buffer), out, err);
        buffer.clear();
        out << "provql> " << std::flush;
    }
}

namespace {

std::shared_ptr<Database> load_named(const std::string& name, const std::filesystem::path& file) {
    Store s = Store::load_file(file.string());
    if (s.source() != name) s = Store(name, s.entities(), s.events());
    return std::make_shared<Database>(std::move(s));
}

}  // namespace

std::shared_ptr<SourceRegistry> load_sources(const std::filesystem::path& data_dir,
                                             const std::map<std::string, std::string>& extra) {
    auto reg = std::make_shared<SourceRegistry>();
    std::error_code ec;
    if (std::filesystem::is_directory(data_dir, ec)) {
        for (const auto& entry : std::filesystem::directory_iterator(data_dir)) {
            if (entry.path().extension() != ".snap") continue;
            const std::string name = entry.path().stem().string();
            if (extra.count(name)) continue;
            reg->add(load_named(name, entry.path()));
        }
    }
    for (const auto& [name, file] : extra) reg->add(load_named(name, file));
    return reg;
}

}  // namespace provql
