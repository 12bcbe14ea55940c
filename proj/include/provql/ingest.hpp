#pragma once
// Audit-log ingest: JSONL records -> entities and information-flow events.
//
// One record per line:
//   {"syscall":"read","success":true,"ts":1,"te":2,"bytes":10,"host":"h1",
//    "subject":{"exename":..,"exepath":..,"pid":..,"user":..,"group":..,"cmdline":..},
//    "object":{"kind":"file|process|network", ...kind attributes...}}
// File objects carry path (and optionally name/user/group); rename objects
// may carry "oldpath". Network objects carry srcip, srcport, dstip, dstport,
// protocol.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "provql/model.hpp"
#include "provql/reduction.hpp"
#include "provql/store.hpp"

namespace provql {

struct RawRecord {
    std::string syscall;
    bool success = true;
    Nanos ts = 0;
    Nanos te = 0;
    std::uint64_t bytes = 0;
    std::string host;
    ProcessAttrs subject;
    EntityAttrs object;
    std::string oldpath;  // rename only
};

struct IngestStats {
    std::size_t lines = 0;
    std::size_t records = 0;
    std::size_t malformed = 0;
    std::size_t failed_filtered = 0;
    std::size_t unknown_syscall = 0;
    std::size_t inconsistent = 0;
    std::size_t events = 0;
    std::size_t new_entities = 0;
    ReductionStats reduction;
    // First few malformed-line messages, "line N: reason".
    std::vector<std::string> errors;
};

/// Decodes one JSON record. Throws IngestError naming the offending field.
RawRecord parse_record(std::string_view line);

/// Encodes a record as one JSONL line (no trailing newline).
std::string to_jsonl(const RawRecord& record);

/// Reads all well-formed records in file order. Malformed lines are counted
/// and skipped. Throws Error if the stream cannot be read.
std::vector<RawRecord> parse_jsonl(std::istream& in, IngestStats& stats);

/// Entity identity from attributes, as used for deduplication.
std::string identity_key(EntityKind kind, const EntityAttrs& attrs);

/// Entities and events resolved from records, appended after an existing
/// snapshot. Event ids are provisional until the batch is committed.
struct ResolvedBatch {
    std::vector<Entity> entities;
    std::vector<Event> events;
};

/// Resolves records against `base`: deduplicates entities by identity key,
/// drops failed and unrecognised calls, and orients each event along the
/// information flow.
class Resolver {
public:
    explicit Resolver(const Store& base);

    ResolvedBatch resolve(std::span<const RawRecord> records, IngestStats& stats);

private:
    EntityId intern(const EntityAttrs& attrs, ResolvedBatch& batch, IngestStats& stats);

    const Store& base_;
    std::unordered_map<std::string, EntityId> by_key_;
    std::vector<EntityKind> new_kinds_;
    EntityId next_id_;
};

/// Full pipeline for one batch: resolve, sort, reduce, assign ids and
/// append. Returns the next snapshot.
Store ingest_batch(const Store& base, std::span<const RawRecord> records, const ReductionConfig& cfg,
                   IngestStats& stats);

/// Convenience: parse + ingest into a database (batch-atomic swap).
IngestStats ingest_stream(Database& db, std::istream& in, const ReductionConfig& cfg);

}  // namespace provql
