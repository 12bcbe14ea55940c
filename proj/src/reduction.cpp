#include "provql/reduction.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <tuple>

namespace provql {

namespace {

using GroupKey = std::tuple<EntityId, EntityId, Op, std::string_view>;

}  // namespace

std::vector<Event> reduce(std::span<const Event> events, const ReductionConfig& cfg,
                          ReductionStats* stats) {
    if (cfg.threshold < 0) throw ValidationError("reduction threshold must be non-negative");

    // Group members keep input order.
    std::map<GroupKey, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const Event& e = events[i];
        groups[GroupKey{e.src, e.dst, e.op, e.note}].push_back(i);
    }

    struct Run {
        std::size_t first;
        Event merged;
    };
    std::vector<Run> runs;
    runs.reserve(events.size());

    for (const auto& [key, members] : groups) {
        const Event* prev = nullptr;
        std::optional<Run> acc;
        for (std::size_t idx : members) {
            const Event& e = events[idx];
            if (prev != nullptr && e.start < prev->start) {
                throw ValidationError("reduction input not sorted by start time (event " +
                                      std::to_string(e.id) + ")");
            }
            prev = &e;
            if (acc) {
                const Nanos gap = e.start - acc->merged.end;
                if (gap >= 0 && gap <= cfg.threshold) {
                    acc->merged.end = e.end;
                    acc->merged.amount += e.amount;
                    continue;
                }
                runs.push_back(std::move(*acc));
            }
            acc = Run{idx, e};
        }
        if (acc) runs.push_back(std::move(*acc));
    }

    std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) {
        if (a.merged.start != b.merged.start) return a.merged.start < b.merged.start;
        return a.first < b.first;
    });

    std::vector<Event> out;
    out.reserve(runs.size());
    for (auto& r : runs) out.push_back(std::move(r.merged));
    if (stats != nullptr) {
        stats->input += events.size();
        stats->output += out.size();
    }
    return out;
}

}  // namespace provql
