#pragma once
// Causality-preserving reduction: repeated events between the same entity
// pair with the same operation are merged when the gap between them is
// within a threshold.

#include <cstddef>
#include <span>
#include <vector>

#include "provql/model.hpp"

namespace provql {

struct ReductionConfig {
    Nanos threshold = kNanosPerSecond;
};

struct ReductionStats {
    std::size_t input = 0;
    std::size_t output = 0;
    std::size_t merged() const { return input - output; }
};

/// Merges e2 into e1 when both share (src, dst, op, note) and
/// 0 <= e2.start - e1.end <= threshold. Within a group input must be sorted
/// by start time, otherwise ValidationError. Merging is greedy against the
/// running accumulator; an overlapping event closes the current run.
/// Output is ordered by start time, ties by input position. Event ids are
/// taken from the first event of each merged run.
std::vector<Event> reduce(std::span<const Event> events, const ReductionConfig& cfg,
                          ReductionStats* stats = nullptr);

}  // namespace provql
