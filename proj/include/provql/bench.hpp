#pragma once
// Benchmarks: scheduled vs naive search, constrained vs unconstrained tracking.

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "provql/runtime.hpp"
#include "provql/store.hpp"

namespace provql {

struct BenchOptions {
    int warmup = 1;
    int iterations = 5;
};

struct BenchRow {
    std::string query_id;
    std::string mode;
    double ms_median = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::string hash;
};

/// Scheduled and naive results differ; no timings are reported.
class BenchMismatch : public Error {
public:
    using Error::Error;
};

struct SearchBench {
    std::string id;
    std::string text;  // one search statement; its data source is ignored
};

struct TrackBench {
    std::string id;
    std::string setup;          // statements run once before timing, e.g. binding a POI
    std::string unconstrained;  // one track statement
    std::string constrained;
};

/// Rows in query order, modes "scheduled" then "naive". Throws BenchMismatch.
std::vector<BenchRow> bench_search(const Store& store, std::span<const SearchBench> queries,
                                   const BenchOptions& opts = {});

/// Rows in query order, modes "unconstrained" then "constrained".
std::vector<BenchRow> bench_track(std::shared_ptr<SourceRegistry> sources, std::span<const TrackBench> queries,
                                  const BenchOptions& opts = {});

/// FNV-1a over the sorted event fingerprints, as 16 hex digits.
std::string result_hash(const Store& store, const RowSet& events);
std::string result_hash(const EventGraph& graph);

std::string to_csv(std::span<const BenchRow> rows);

/// Selective queries over a generated scenario host.
std::vector<SearchBench> default_search_queries();
std::vector<TrackBench> default_track_queries(const std::string& host);

}  // namespace provql
