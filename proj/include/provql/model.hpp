#pragma once
// Core provenance data model: entities, events, attribute access and the
// immutable EventGraph value used for query results and graph algebra.

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace provql {

using EntityId = std::uint32_t;
using EventId = std::uint32_t;
/// Nanoseconds since the Unix epoch.
using Nanos = std::int64_t;

inline constexpr Nanos kNanosPerMs = 1'000'000;
inline constexpr Nanos kNanosPerSecond = 1'000'000'000;
inline constexpr Nanos kNanosPerMinute = 60 * kNanosPerSecond;
inline constexpr Nanos kMaxNanos = std::numeric_limits<Nanos>::max();
inline constexpr Nanos kMinNanos = std::numeric_limits<Nanos>::min();

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IngestError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class RuntimeError : public Error {
public:
    using Error::Error;
};

/// Thrown when a cooperative deadline expires mid-statement.
class TimeoutError : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Entities
// ---------------------------------------------------------------------------

enum class EntityKind : std::uint8_t { Process = 0, File = 1, Network = 2 };

std::string_view to_string(EntityKind kind);
std::optional<EntityKind> parse_entity_kind(std::string_view text);

struct ProcessAttrs {
    std::int64_t pid = 0;
    std::string exename;
    std::string exepath;
    std::string user;
    std::string group;
    std::string cmdline;
    bool operator==(const ProcessAttrs&) const = default;
};

struct FileAttrs {
    std::string name;
    std::string path;
    std::string user;
    std::string group;
    bool operator==(const FileAttrs&) const = default;
};

struct NetworkAttrs {
    std::string srcip;
    std::int64_t srcport = 0;
    std::string dstip;
    std::int64_t dstport = 0;
    std::string protocol;
    bool operator==(const NetworkAttrs&) const = default;
};

// Alternative index equals the EntityKind value.
using EntityAttrs = std::variant<ProcessAttrs, FileAttrs, NetworkAttrs>;

/// Canonical identity: exename:pid, absolute path, or the socket 5-tuple.
std::string identity_key(const EntityAttrs& attrs);

struct Entity {
    EntityId id = 0;
    EntityAttrs attrs;
    std::string key;

    Entity() = default;
    Entity(EntityId id_, EntityAttrs attrs_)
        : id(id_), attrs(std::move(attrs_)), key(identity_key(attrs)) {}

    EntityKind kind() const { return static_cast<EntityKind>(attrs.index()); }
    const ProcessAttrs* process() const { return std::get_if<ProcessAttrs>(&attrs); }
    const FileAttrs* file() const { return std::get_if<FileAttrs>(&attrs); }
    const NetworkAttrs* network() const { return std::get_if<NetworkAttrs>(&attrs); }

    bool operator==(const Entity&) const = default;
};

// ---------------------------------------------------------------------------
// Events
// ---------------------------------------------------------------------------

enum class Op : std::uint8_t {
    Read, Write, Execve, Readv, Writev, Rename, Fork, Clone, Recvfrom, Sendto
};
inline constexpr std::size_t kOpCount = 10;

std::string_view to_string(Op op);
std::optional<Op> parse_op(std::string_view text);

enum class EventCategory : std::uint8_t { ProcessToFile, ProcessToProcess, ProcessToNetwork };

std::string_view to_string(EventCategory category);

/// Category from the endpoint kinds: the non-process side decides, a
/// process-process pair is ProcessToProcess.
EventCategory derive_category(EntityKind a, EntityKind b);

/// Edge direction is information flow: src is the source, dst the sink.
struct Event {
    EventId id = 0;
    EntityId src = 0;
    EntityId dst = 0;
    Op op = Op::Read;
    Nanos start = 0;
    Nanos end = 0;
    std::uint64_t amount = 0;
    EventCategory category = EventCategory::ProcessToFile;
    // Free-form annotation (rename keeps its source path here).
    std::string note;

    bool operator==(const Event&) const = default;
};

/// Content fingerprint used for cross-source event identity and ground truth.
std::string fingerprint(const Event& ev, const Entity& src, const Entity& dst);

// ---------------------------------------------------------------------------
// Attribute access
// ---------------------------------------------------------------------------

enum class Attr : std::uint8_t {
    // string attributes
    Type, Name, Path, DstIp, SrcIp, ExeName, ExePath, Cmdline, Optype,
    // numerical attributes
    Id, SrcId, DstId, StartTime, EndTime, Amount, Pid, SrcPort, DstPort,
};

std::string_view to_string(Attr attr);
std::optional<Attr> parse_attr(std::string_view text);
bool is_string_attr(Attr attr);
/// True when the attribute can be defined on some entity kind.
bool is_entity_attr(Attr attr);
/// True when the attribute is defined on events.
bool is_event_attr(Attr attr);
/// True when `kind` carries `attr`.
bool entity_has_attr(EntityKind kind, Attr attr);

/// Null, a borrowed string, or an integer.
using AttrValue = std::variant<std::monostate, std::string_view, std::int64_t>;

inline bool is_null(const AttrValue& v) { return std::holds_alternative<std::monostate>(v); }

// `name` on a process resolves to its executable name.
AttrValue attr_get(const Entity& entity, Attr attr);
AttrValue attr_get(const Event& event, Attr attr);

// ---------------------------------------------------------------------------
// EventGraph
// ---------------------------------------------------------------------------

/// Element identity inside a graph: (source name, store id).
struct GraphKey {
    std::string source;
    std::uint32_t id = 0;

    auto operator<=>(const GraphKey&) const = default;
    bool operator==(const GraphKey&) const = default;
};

/// Immutable-by-convention set of entities and events. Every event's
/// endpoints are present (closure). Algebra returns new graphs.
class EventGraph {
public:
    using EntityMap = std::map<GraphKey, Entity>;
    using EventMap = std::map<GraphKey, Event>;

    EventGraph() = default;

    /// Adds an entity; an existing key is left untouched.
    void add_entity(const std::string& source, const Entity& entity);
    /// Adds an event whose endpoints must already be present.
    void add_event(const std::string& source, const Event& event);

    const EntityMap& entities() const { return entities_; }
    const EventMap& events() const { return events_; }
    std::size_t node_count() const { return entities_.size(); }
    std::size_t edge_count() const { return events_.size(); }
    bool empty() const { return entities_.empty() && events_.empty(); }

    const Entity* find_entity(const GraphKey& key) const;
    const Event* find_event(const GraphKey& key) const;

    /// Endpoint lookup for an event stored in this graph.
    const Entity& src_of(const GraphKey& event_key) const;
    const Entity& dst_of(const GraphKey& event_key) const;

    bool closed() const;

    /// Sorted fingerprints of all events.
    std::vector<std::string> fingerprints() const;

    bool operator==(const EventGraph&) const = default;

private:
    EntityMap entities_;
    EventMap events_;
};

EventGraph graph_union(const EventGraph& a, const EventGraph& b);
EventGraph graph_intersection(const EventGraph& a, const EventGraph& b);
EventGraph graph_difference(const EventGraph& a, const EventGraph& b);

}  // namespace provql
