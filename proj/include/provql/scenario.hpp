#pragma once
// Synthetic audit logs with a planted attack and its ground truth.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "provql/ingest.hpp"

namespace provql {

/// Deterministic generator: same seed, same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n);
    /// Uniform in [lo, hi].
    std::int64_t range(std::int64_t lo, std::int64_t hi);
    /// Uniform in [0, 1).
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return unit() < p; }

private:
    std::mt19937_64 engine_;
};

enum class AttackTemplate : std::uint8_t { DataLeakage, ShellshockPenetration, WgetExecutable };

std::string_view to_string(AttackTemplate t);
std::optional<AttackTemplate> parse_template(std::string_view text);

struct ScenarioSpec {
    std::uint64_t seed = 1;
    int hosts = 2;
    std::size_t noise_events = 0;  // per host, before reduction
    AttackTemplate attack = AttackTemplate::DataLeakage;
    Nanos time_span = 3600 * kNanosPerSecond;
};

struct HostTruth {
    std::vector<std::string> entities;  // identity keys, sorted
    std::vector<std::string> events;    // fingerprints, sorted
};

struct GroundTruth {
    AttackTemplate attack = AttackTemplate::DataLeakage;
    std::uint64_t seed = 0;
    // Host examined by the investigation script.
    std::string investigated_host;
    std::map<std::string, HostTruth> hosts;

    nlohmann::json to_json() const;
    static GroundTruth from_json(const nlohmann::json& doc);
};

struct HostLog {
    std::string host;
    std::string ip;
    std::vector<RawRecord> records;  // ordered by start time
};

struct Scenario {
    std::vector<HostLog> hosts;
    GroundTruth truth;
};

Scenario generate(const ScenarioSpec& spec);

/// Writes `<host>.jsonl` per host and `ground_truth.json` into `dir`.
void write_scenario(const Scenario& s, const std::filesystem::path& dir);

/// Ingests one host's records into a fresh store named after the host.
Store ingest_host(const HostLog& log, const ReductionConfig& cfg = {}, IngestStats* stats = nullptr);

/// Address of the remote attacker in every template.
inline constexpr const char* kAttackerIp = "20.69.152.188";

/// The six-query investigation of the data-leakage case over `host`.
std::string investigation_script(const std::string& host = "host1");

}  // namespace provql
