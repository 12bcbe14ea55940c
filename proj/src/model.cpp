#include "provql/model.hpp"

#include <algorithm>
#include <array>

namespace provql {

namespace {

constexpr std::array<std::string_view, 3> kKindNames = {"process", "file", "network"};

constexpr std::array<std::string_view, kOpCount> kOpNames = {
    "read", "write", "execve", "readv", "writev", "rename", "fork", "clone", "recvfrom", "sendto"};

constexpr std::array<std::string_view, 18> kAttrNames = {
    "type", "name", "path", "dstip", "srcip", "exename", "exepath", "cmdline", "optype",
    "id", "srcid", "dstid", "starttime", "endtime", "amount", "pid", "srcport", "dstport"};

}  // namespace

std::string_view to_string(EntityKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<EntityKind> parse_entity_kind(std::string_view text) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == text) return static_cast<EntityKind>(i);
    }
    return std::nullopt;
}

std::string_view to_string(Op op) { return kOpNames[static_cast<std::size_t>(op)]; }

std::optional<Op> parse_op(std::string_view text) {
    for (std::size_t i = 0; i < kOpNames.size(); ++i) {
        if (kOpNames[i] == text) return static_cast<Op>(i);
    }
    return std::nullopt;
}

std::string_view to_string(EventCategory category) {
    switch (category) {
        case EventCategory::ProcessToFile: return "ProcessToFile";
        case EventCategory::ProcessToProcess: return "ProcessToProcess";
        case EventCategory::ProcessToNetwork: return "ProcessToNetwork";
    }
    return "?";
}

EventCategory derive_category(EntityKind a, EntityKind b) {
    if (a == EntityKind::Network || b == EntityKind::Network) return EventCategory::ProcessToNetwork;
    if (a == EntityKind::File || b == EntityKind::File) return EventCategory::ProcessToFile;
    return EventCategory::ProcessToProcess;
}

std::string identity_key(const EntityAttrs& attrs) {
    struct Visitor {
        std::string operator()(const ProcessAttrs& p) const {
            return p.exename + ":" + std::to_string(p.pid);
        }
        std::string operator()(const FileAttrs& f) const { return f.path; }
        std::string operator()(const NetworkAttrs& n) const {
            return n.srcip + ":" + std::to_string(n.srcport) + ":" + n.dstip + ":" +
                   std::to_string(n.dstport) + ":" + n.protocol;
        }
    };
    return std::visit(Visitor{}, attrs);
}

std::string fingerprint(const Event& ev, const Entity& src, const Entity& dst) {
    std::string out;
    out.reserve(src.key.size() + dst.key.size() + 64);
    out += src.key;
    out += '|';
    out += dst.key;
    out += '|';
    out += to_string(ev.op);
    out += '|';
    out += std::to_string(ev.start);
    out += '|';
    out += std::to_string(ev.end);
    out += '|';
    out += std::to_string(ev.amount);
    return out;
}

std::string_view to_string(Attr attr) { return kAttrNames[static_cast<std::size_t>(attr)]; }

std::optional<Attr> parse_attr(std::string_view text) {
    for (std::size_t i = 0; i < kAttrNames.size(); ++i) {
        if (kAttrNames[i] == text) return static_cast<Attr>(i);
    }
    return std::nullopt;
}

bool is_string_attr(Attr attr) { return attr <= Attr::Optype; }

bool is_entity_attr(Attr attr) {
    switch (attr) {
        case Attr::Optype:
        case Attr::SrcId:
        case Attr::DstId:
        case Attr::StartTime:
        case Attr::EndTime:
        case Attr::Amount:
            return false;
        default:
            return true;
    }
}

bool is_event_attr(Attr attr) {
    switch (attr) {
        case Attr::Optype:
        case Attr::Id:
        case Attr::SrcId:
        case Attr::DstId:
        case Attr::StartTime:
        case Attr::EndTime:
        case Attr::Amount:
            return true;
        default:
            return false;
    }
}

bool entity_has_attr(EntityKind kind, Attr attr) {
    if (attr == Attr::Type || attr == Attr::Id) return true;
    switch (kind) {
        case EntityKind::Process:
            return attr == Attr::Name || attr == Attr::ExeName || attr == Attr::ExePath ||
                   attr == Attr::Cmdline || attr == Attr::Pid;
        case EntityKind::File:
            return attr == Attr::Name || attr == Attr::Path;
        case EntityKind::Network:
            return attr == Attr::SrcIp || attr == Attr::DstIp || attr == Attr::SrcPort ||
                   attr == Attr::DstPort;
    }
    return false;
}

AttrValue attr_get(const Entity& entity, Attr attr) {
    switch (attr) {
        case Attr::Type: return to_string(entity.kind());
        case Attr::Id: return static_cast<std::int64_t>(entity.id);
        default: break;
    }
    if (const auto* p = entity.process()) {
        switch (attr) {
            case Attr::Name:
            case Attr::ExeName: return std::string_view(p->exename);
            case Attr::ExePath: return std::string_view(p->exepath);
            case Attr::Cmdline: return std::string_view(p->cmdline);
            case Attr::Pid: return p->pid;
            default: return {};
        }
    }
    if (const auto* f = entity.file()) {
        switch (attr) {
            case Attr::Name: return std::string_view(f->name);
            case Attr::Path: return std::string_view(f->path);
            default: return {};
        }
    }
    const auto& n = std::get<NetworkAttrs>(entity.attrs);
    switch (attr) {
        case Attr::SrcIp: return std::string_view(n.srcip);
        case Attr::DstIp: return std::string_view(n.dstip);
        case Attr::SrcPort: return n.srcport;
        case Attr::DstPort: return n.dstport;
        default: return {};
    }
}

AttrValue attr_get(const Event& event, Attr attr) {
    switch (attr) {
        case Attr::Optype: return to_string(event.op);
        case Attr::Id: return static_cast<std::int64_t>(event.id);
        case Attr::SrcId: return static_cast<std::int64_t>(event.src);
        case Attr::DstId: return static_cast<std::int64_t>(event.dst);
        case Attr::StartTime: return event.start;
        case Attr::EndTime: return event.end;
        case Attr::Amount: return static_cast<std::int64_t>(event.amount);
        default: return {};
    }
}

// ---------------------------------------------------------------------------
// EventGraph
// ---------------------------------------------------------------------------

void EventGraph::add_entity(const std::string& source, const Entity& entity) {
    entities_.try_emplace(GraphKey{source, entity.id}, entity);
}

void EventGraph::add_event(const std::string& source, const Event& event) {
    if (!entities_.count(GraphKey{source, event.src}) || !entities_.count(GraphKey{source, event.dst})) {
        throw ValidationError("event " + std::to_string(event.id) + " added before its endpoints");
    }
    events_.try_emplace(GraphKey{source, event.id}, event);
}

const Entity* EventGraph::find_entity(const GraphKey& key) const {
    auto it = entities_.find(key);
    return it == entities_.end() ? nullptr : &it->second;
}

const Event* EventGraph::find_event(const GraphKey& key) const {
    auto it = events_.find(key);
    return it == events_.end() ? nullptr : &it->second;
}

const Entity& EventGraph::src_of(const GraphKey& event_key) const {
    const Event& ev = events_.at(event_key);
    return entities_.at(GraphKey{event_key.source, ev.src});
}

const Entity& EventGraph::dst_of(const GraphKey& event_key) const {
    const Event& ev = events_.at(event_key);
    return entities_.at(GraphKey{event_key.source, ev.dst});
}

bool EventGraph::closed() const {
    return std::all_of(events_.begin(), events_.end(), [&](const auto& kv) {
        return entities_.count(GraphKey{kv.first.source, kv.second.src}) &&
               entities_.count(GraphKey{kv.first.source, kv.second.dst});
    });
}

std::vector<std::string> EventGraph::fingerprints() const {
    std::vector<std::string> out;
    out.reserve(events_.size());
    for (const auto& [key, ev] : events_) {
        out.push_back(fingerprint(ev, src_of(key), dst_of(key)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

// Adds an event of `from` together with its endpoints.
void copy_event(EventGraph& into, const EventGraph& from, const GraphKey& key, const Event& ev) {
    into.add_entity(key.source, from.src_of(key));
    into.add_entity(key.source, from.dst_of(key));
    into.add_event(key.source, ev);
}

}  // namespace

EventGraph graph_union(const EventGraph& a, const EventGraph& b) {
    EventGraph out = a;
    for (const auto& [key, entity] : b.entities()) out.add_entity(key.source, entity);
    for (const auto& [key, ev] : b.events()) out.add_event(key.source, ev);
    return out;
}

EventGraph graph_intersection(const EventGraph& a, const EventGraph& b) {
    EventGraph out;
    for (const auto& [key, ev] : a.events()) {
        if (b.find_event(key)) copy_event(out, a, key, ev);
    }
    return out;
}

EventGraph graph_difference(const EventGraph& a, const EventGraph& b) {
    EventGraph out;
    for (const auto& [key, ev] : a.events()) {
        if (!b.find_event(key)) copy_event(out, a, key, ev);
    }
    return out;
}

}  // namespace provql
