#pragma once
// Embedded, indexed event store.
//
// A Store is an immutable snapshot: entity and event tables plus secondary
// indexes (file name, process exename, source/destination IP, kind, optype)
// and time-sorted adjacency lists. Rows are addressed by position ("row
// ids"). For a database snapshot the row id equals the entity/event id; a
// Store built from an EventGraph keeps the original ids and source names in
// the rows and maps them to dense positions.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "provql/expr.hpp"
#include "provql/model.hpp"

namespace provql {

using Row = std::uint32_t;

/// Sorted, duplicate-free set of row ids.
class RowSet {
public:
    RowSet() = default;
    explicit RowSet(std::vector<Row> rows);  // sorts and dedups

    bool contains(Row r) const;
    bool empty() const { return rows_.empty(); }
    std::size_t size() const { return rows_.size(); }
    const std::vector<Row>& rows() const { return rows_; }
    auto begin() const { return rows_.begin(); }
    auto end() const { return rows_.end(); }

    RowSet intersect(const RowSet& other) const;
    bool operator==(const RowSet&) const = default;

private:
    std::vector<Row> rows_;
};

enum class Direction : std::uint8_t { In, Out };

/// Restricts neighbours by one event time field.
struct TimeBound {
    enum class Field : std::uint8_t { Start, End };
    enum class Cmp : std::uint8_t { Less, Greater };
    Field field = Field::Start;
    Cmp cmp = Cmp::Less;
    Nanos instant = 0;

    bool admits(const Event& ev) const;
};

/// Closed interval of time; an event matches when its window overlaps it.
struct TimeWindow {
    Nanos begin = kMinNanos;
    Nanos end = kMaxNanos;
};

class Store {
public:
    Store() = default;

    /// Database snapshot: ids must be dense (entity i has id i, event j has id j).
    Store(std::string source, std::vector<Entity> entities, std::vector<Event> events);

    /// View over a graph: rows keep their original ids and sources.
    static Store from_graph(const EventGraph& graph);

    /// New snapshot with `entities` and `events` appended. Their ids must
    /// continue the current dense numbering.
    Store appended(std::vector<Entity> entities, std::vector<Event> events) const;

    const std::string& source() const { return sources_.front(); }
    std::size_t entity_count() const { return entities_.size(); }
    std::size_t event_count() const { return events_.size(); }

    const Entity& entity(Row r) const { return entities_.at(r); }
    const Event& event(Row r) const { return events_.at(r); }
    const std::vector<Entity>& entities() const { return entities_; }
    const std::vector<Event>& events() const { return events_; }
    Row src(Row ev) const { return src_[ev]; }
    Row dst(Row ev) const { return dst_[ev]; }
    const std::string& entity_source(Row r) const { return sources_[entity_origin_.empty() ? 0 : entity_origin_[r]]; }
    const std::string& event_source(Row r) const { return sources_[event_origin_.empty() ? 0 : event_origin_[r]]; }

    std::optional<Row> find_entity(const std::string& source, EntityId id) const;
    std::optional<Row> find_event(const std::string& source, EventId id) const;
    /// Rows whose identity key equals `key` (one per source at most).
    std::vector<Row> find_by_key(const std::string& key) const;

    /// Entities of `kind` (any when nullopt) satisfying `pred`. Uses an index
    /// when the predicate has a top-level equality on an indexed attribute.
    RowSet scan_entities(std::optional<EntityKind> kind, const Expr* pred) const;

    /// Events satisfying `pred` whose src/dst are in the optional sets and
    /// whose window overlaps `window`.
    RowSet scan_events(const Expr* pred, const RowSet* src_in = nullptr, const RowSet* dst_in = nullptr,
                       std::optional<TimeWindow> window = std::nullopt) const;

    /// Full scans with no index use; same results as the scan_* calls.
    RowSet scan_entities_linear(std::optional<EntityKind> kind, const Expr* pred) const;
    RowSet scan_events_linear(const Expr* pred, const RowSet* src_in = nullptr, const RowSet* dst_in = nullptr,
                              std::optional<TimeWindow> window = std::nullopt) const;

    /// In-edges or out-edges of `entity` sorted by start time, optionally
    /// bounded. Throws NotFoundError for an unknown row.
    std::vector<Row> neighbors(Row entity, Direction dir, std::optional<TimeBound> bound = std::nullopt) const;

    /// In-edges with start < instant, as a prefix of the start-sorted list.
    std::span<const Row> in_started_before(Row entity, Nanos instant) const;
    /// Out-edges with end > instant, as a suffix of the end-sorted list.
    std::span<const Row> out_ending_after(Row entity, Nanos instant) const;
    std::span<const Row> in_edges(Row entity) const;
    std::span<const Row> out_edges(Row entity) const;

    /// Index cardinality for an indexed equality, else the table size.
    std::size_t selectivity_count(const Expr* pred, bool events = false) const;

    /// Materializes events (plus endpoints) as a graph.
    EventGraph subgraph(std::span<const Row> events) const;
    EventGraph to_graph() const;

    /// Snapshot persistence ("PQL1" container).
    void save(std::ostream& out) const;
    static Store load(std::istream& in);
    void save_file(const std::string& path) const;
    static Store load_file(const std::string& path);

private:
    struct Csr {
        std::vector<std::uint32_t> offsets;  // size n+1
        std::vector<Row> rows;
        std::span<const Row> at(Row r) const {
            return {rows.data() + offsets[r], rows.data() + offsets[r + 1]};
        }
    };
    using PostingMap = std::unordered_map<std::string, std::vector<Row>>;

    void build_indexes();
    void validate() const;
    const std::vector<Row>* posting_for(const Expr& cmp, bool* events) const;
    std::optional<std::vector<Row>> best_entity_candidates(std::optional<EntityKind> kind, const Expr* pred) const;
    friend struct StoreCodec;

    std::vector<std::string> sources_{std::string()};
    std::vector<Entity> entities_;
    std::vector<Event> events_;
    std::vector<Row> src_;
    std::vector<Row> dst_;
    // Empty for single-source stores.
    std::vector<std::uint16_t> entity_origin_;
    std::vector<std::uint16_t> event_origin_;
    bool dense_ids_ = true;
    std::unordered_map<std::uint64_t, Row> entity_lookup_;  // (origin<<32 | id) when !dense_ids_
    std::unordered_map<std::uint64_t, Row> event_lookup_;

    std::unordered_map<std::string, std::vector<Row>> key_index_;
    PostingMap file_name_index_;
    PostingMap exename_index_;
    PostingMap srcip_index_;
    PostingMap dstip_index_;
    std::vector<Row> kind_index_[3];
    std::vector<Row> op_index_[kOpCount];
    Csr in_by_start_;
    Csr out_by_start_;
    Csr out_by_end_;
};

/// A named data source whose snapshot is swapped atomically on append.
/// Readers holding a snapshot keep seeing it while a batch is applied.
class Database {
public:
    explicit Database(std::string name);
    explicit Database(Store initial);

    const std::string& name() const { return name_; }
    std::shared_ptr<const Store> snapshot() const;
    void replace(std::shared_ptr<const Store> next);
    /// Serialises writers; `fn` receives the current snapshot and returns the next.
    template <typename Fn>
    void update(Fn&& fn) {
        std::lock_guard<std::mutex> writer(write_mutex_);
        replace(std::make_shared<const Store>(fn(*snapshot())));
    }

private:
    std::string name_;
    mutable std::mutex mutex_;
    std::mutex write_mutex_;
    std::shared_ptr<const Store> current_;
};

}  // namespace provql
