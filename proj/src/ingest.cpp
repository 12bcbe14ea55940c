#include "provql/ingest.hpp"

#include <algorithm>
#include <istream>

#include <json.hpp>

namespace provql {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxReportedErrors = 20;

const json& field(const json& obj, const char* name, const char* where) {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) {
        throw IngestError(std::string("missing field '") + where + name + "'");
    }
    return *it;
}

std::string str_field(const json& obj, const char* name, const char* where) {
    const json& v = field(obj, name, where);
    if (!v.is_string()) throw IngestError(std::string("field '") + where + name + "' must be a string");
    return v.get<std::string>();
}

std::string opt_str(const json& obj, const char* name, const char* where) {
    auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) return {};
    if (!it->is_string()) throw IngestError(std::string("field '") + where + name + "' must be a string");
    return it->get<std::string>();
}

std::int64_t int_field(const json& obj, const char* name, const char* where) {
    const json& v = field(obj, name, where);
    if (!v.is_number_integer()) throw IngestError(std::string("field '") + where + name + "' must be an integer");
    return v.get<std::int64_t>();
}

ProcessAttrs parse_process(const json& obj, const char* where) {
    if (!obj.is_object()) throw IngestError(std::string("field '") + where + "' must be an object");
    ProcessAttrs p;
    p.exename = str_field(obj, "exename", where);
    p.pid = int_field(obj, "pid", where);
    p.exepath = opt_str(obj, "exepath", where);
    p.user = opt_str(obj, "user", where);
    p.group = opt_str(obj, "group", where);
    p.cmdline = opt_str(obj, "cmdline", where);
    return p;
}

std::string basename_of(const std::string& path) {
    auto slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::int64_t port_field(const json& obj, const char* name) {
    const std::int64_t v = int_field(obj, name, "object.");
    if (v < 0 || v > 65535) throw IngestError(std::string("field 'object.") + name + "' out of port range");
    return v;
}

struct SyscallRule {
    Op op;
    bool inbound;  // information flows object -> subject
    bool file, process, network;
};

std::optional<SyscallRule> rule_for(std::string_view syscall) {
    if (syscall == "read") return SyscallRule{Op::Read, true, true, false, true};
    if (syscall == "readv") return SyscallRule{Op::Readv, true, true, false, true};
    if (syscall == "recvfrom" || syscall == "recvmsg") return SyscallRule{Op::Recvfrom, true, false, false, true};
    if (syscall == "write") return SyscallRule{Op::Write, false, true, false, true};
    if (syscall == "writev") return SyscallRule{Op::Writev, false, true, false, true};
    if (syscall == "sendto") return SyscallRule{Op::Sendto, false, false, false, true};
    if (syscall == "execve") return SyscallRule{Op::Execve, false, true, true, false};
    if (syscall == "rename") return SyscallRule{Op::Rename, false, true, false, false};
    if (syscall == "fork") return SyscallRule{Op::Fork, false, false, true, false};
    if (syscall == "clone") return SyscallRule{Op::Clone, false, false, true, false};
    return std::nullopt;
}

}  // namespace

RawRecord parse_record(std::string_view line) {
    json doc;
    try {
        doc = json::parse(line);
    } catch (const json::parse_error& e) {
        throw IngestError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw IngestError("record must be a JSON object");

    RawRecord rec;
    rec.syscall = str_field(doc, "syscall", "");
    const json& success = field(doc, "success", "");
    if (!success.is_boolean()) throw IngestError("field 'success' must be a boolean");
    rec.success = success.get<bool>();
    rec.ts = int_field(doc, "ts", "");
    rec.te = int_field(doc, "te", "");
    if (rec.te < rec.ts) throw IngestError("field 'te' precedes 'ts'");
    if (auto it = doc.find("bytes"); it != doc.end() && !it->is_null()) {
        if (!it->is_number_integer() || it->get<std::int64_t>() < 0) {
            throw IngestError("field 'bytes' must be a non-negative integer");
        }
        rec.bytes = it->get<std::uint64_t>();
    }
    rec.host = opt_str(doc, "host", "");
    rec.subject = parse_process(field(doc, "subject", ""), "subject.");

    const json& obj = field(doc, "object", "");
    if (!obj.is_object()) throw IngestError("field 'object' must be an object");
    const std::string kind_text = str_field(obj, "kind", "object.");
    auto kind = parse_entity_kind(kind_text);
    if (!kind) throw IngestError("field 'object.kind' has unknown value '" + kind_text + "'");
    switch (*kind) {
        case EntityKind::Process:
            rec.object = parse_process(obj, "object.");
            break;
        case EntityKind::File: {
            FileAttrs f;
            f.path = str_field(obj, "path", "object.");
            f.name = opt_str(obj, "name", "object.");
            if (f.name.empty()) f.name = basename_of(f.path);
            f.user = opt_str(obj, "user", "object.");
            f.group = opt_str(obj, "group", "object.");
            rec.object = std::move(f);
            rec.oldpath = opt_str(obj, "oldpath", "object.");
            break;
        }
        case EntityKind::Network: {
            NetworkAttrs n;
            n.srcip = str_field(obj, "srcip", "object.");
            n.srcport = port_field(obj, "srcport");
            n.dstip = str_field(obj, "dstip", "object.");
            n.dstport = port_field(obj, "dstport");
            n.protocol = str_field(obj, "protocol", "object.");
            rec.object = std::move(n);
            break;
        }
    }
    return rec;
}

namespace {

json process_json(const ProcessAttrs& p) {
    return json{{"exename", p.exename}, {"exepath", p.exepath}, {"pid", p.pid},
                {"user", p.user},       {"group", p.group},     {"cmdline", p.cmdline}};
}

}  // namespace

std::string to_jsonl(const RawRecord& r) {
    json obj;
    if (const auto* p = std::get_if<ProcessAttrs>(&r.object)) {
        obj = process_json(*p);
        obj["kind"] = "process";
    } else if (const auto* f = std::get_if<FileAttrs>(&r.object)) {
        obj = json{{"kind", "file"}, {"path", f->path}, {"name", f->name}, {"user", f->user}, {"group", f->group}};
        if (!r.oldpath.empty()) obj["oldpath"] = r.oldpath;
    } else {
        const auto& n = std::get<NetworkAttrs>(r.object);
        obj = json{{"kind", "network"}, {"srcip", n.srcip},     {"srcport", n.srcport},
                   {"dstip", n.dstip},  {"dstport", n.dstport}, {"protocol", n.protocol}};
    }
    json doc{{"syscall", r.syscall}, {"success", r.success}, {"ts", r.ts},   {"te", r.te},
             {"bytes", r.bytes},     {"host", r.host},       {"subject", process_json(r.subject)},
             {"object", std::move(obj)}};
    return doc.dump();
}

std::vector<RawRecord> parse_jsonl(std::istream& in, IngestStats& stats) {
    if (!in) throw Error("input stream is not readable");
    std::vector<RawRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        ++stats.lines;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(parse_record(line));
            ++stats.records;
        } catch (const IngestError& e) {
            ++stats.malformed;
            if (stats.errors.size() < kMaxReportedErrors) {
                stats.errors.push_back("line " + std::to_string(stats.lines) + ": " + e.what());
            }
        }
    }
    if (in.bad()) throw Error("error while reading input stream");
    return out;
}

std::string identity_key(EntityKind kind, const EntityAttrs& attrs) {
    if (static_cast<std::size_t>(kind) != attrs.index()) {
        throw IngestError("attributes do not describe a " + std::string(to_string(kind)) + " entity");
    }
    if (const auto* p = std::get_if<ProcessAttrs>(&attrs); p && p->exename.empty()) {
        throw IngestError("missing field 'exename'");
    }
    if (const auto* f = std::get_if<FileAttrs>(&attrs); f && f->path.empty()) {
        throw IngestError("missing field 'path'");
    }
    if (const auto* n = std::get_if<NetworkAttrs>(&attrs)) {
        if (n->srcip.empty()) throw IngestError("missing field 'srcip'");
        if (n->dstip.empty()) throw IngestError("missing field 'dstip'");
        if (n->protocol.empty()) throw IngestError("missing field 'protocol'");
    }
    return identity_key(attrs);
}

// ---------------------------------------------------------------------------
// Resolver
// ---------------------------------------------------------------------------

Resolver::Resolver(const Store& base) : base_(base), next_id_(static_cast<EntityId>(base.entity_count())) {}

EntityId Resolver::intern(const EntityAttrs& attrs, ResolvedBatch& batch, IngestStats& stats) {
    const auto kind = static_cast<EntityKind>(attrs.index());
    std::string key = identity_key(kind, attrs);
    std::string tagged = std::string(1, static_cast<char>('0' + static_cast<int>(kind))) + key;
    if (auto it = by_key_.find(tagged); it != by_key_.end()) return it->second;
    for (Row r : base_.find_by_key(key)) {
        if (base_.entity(r).kind() == kind) {
            by_key_.emplace(std::move(tagged), base_.entity(r).id);
            return base_.entity(r).id;
        }
    }
    const EntityId id = next_id_++;
    batch.entities.emplace_back(id, attrs);
    ++stats.new_entities;
    by_key_.emplace(std::move(tagged), id);
    return id;
}

ResolvedBatch Resolver::resolve(std::span<const RawRecord> records, IngestStats& stats) {
    ResolvedBatch batch;
    auto kind_of = [&](EntityId id) {
        if (id < base_.entity_count()) return base_.entity(id).kind();
        return batch.entities[id - base_.entity_count()].kind();
    };
    for (const RawRecord& rec : records) {
        if (!rec.success) {
            ++stats.failed_filtered;
            continue;
        }
        auto rule = rule_for(rec.syscall);
        if (!rule) {
            ++stats.unknown_syscall;
            continue;
        }
        const auto object_kind = static_cast<EntityKind>(rec.object.index());
        const bool allowed = (object_kind == EntityKind::File && rule->file) ||
                             (object_kind == EntityKind::Process && rule->process) ||
                             (object_kind == EntityKind::Network && rule->network);
        if (!allowed) {
            ++stats.inconsistent;
            continue;
        }
        EntityId subject = 0;
        EntityId object = 0;
        try {
            subject = intern(EntityAttrs{rec.subject}, batch, stats);
            object = intern(rec.object, batch, stats);
        } catch (const IngestError&) {
            ++stats.malformed;
            continue;
        }
        if (subject == object) {
            ++stats.inconsistent;
            continue;
        }
        Event ev;
        ev.id = static_cast<EventId>(batch.events.size());
        ev.src = rule->inbound ? object : subject;
        ev.dst = rule->inbound ? subject : object;
        ev.op = rule->op;
        ev.start = rec.ts;
        ev.end = rec.te;
        ev.amount = rec.bytes;
        ev.category = derive_category(kind_of(subject), kind_of(object));
        if (rule->op == Op::Rename) ev.note = rec.oldpath;
        batch.events.push_back(std::move(ev));
    }
    return batch;
}

Store ingest_batch(const Store& base, std::span<const RawRecord> records, const ReductionConfig& cfg,
                   IngestStats& stats) {
    Resolver resolver(base);
    ResolvedBatch batch = resolver.resolve(records, stats);
    std::stable_sort(batch.events.begin(), batch.events.end(),
                     [](const Event& a, const Event& b) { return a.start < b.start; });
    std::vector<Event> reduced = reduce(batch.events, cfg, &stats.reduction);
    const auto first = static_cast<EventId>(base.event_count());
    for (std::size_t i = 0; i < reduced.size(); ++i) reduced[i].id = first + static_cast<EventId>(i);
    stats.events += reduced.size();
    return base.appended(std::move(batch.entities), std::move(reduced));
}

IngestStats ingest_stream(Database& db, std::istream& in, const ReductionConfig& cfg) {
    IngestStats stats;
    std::vector<RawRecord> records = parse_jsonl(in, stats);
    db.update([&](const Store& base) { return ingest_batch(base, records, cfg, stats); });
    return stats;
}

}  // namespace provql
