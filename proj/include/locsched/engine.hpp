#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "locsched/geometry.hpp"
#include "locsched/mobility.hpp"
#include "locsched/protocols.hpp"

namespace locsched {

struct RunConfig {
    std::shared_ptr<const MobilityTrace> trace;
    ProtocolConfig protocol = SfrConfig{};
    NoiseModel noise;
    double dist_tolerance = 5.0;
    std::uint64_t seed = 0;  // noise stream seed
    bool backtracking_enabled = false;
    bool record_events = true;

    void validate() const;
};

// One row per trace sample.
struct EventRecord {
    double t = 0.0;
    Position truth;
    Position reported;
    double error = 0.0;
    bool localized = false;
    double period = 0.0;
    std::optional<Confidence> confidence;  // MADRD only
};

struct ErrorSample {
    double t = 0.0;
    double error = 0.0;
};

struct RunMetrics {
    std::vector<ErrorSample> error_series;
    int localization_count = 0;
    double accuracy = 0.0;
    double mean_error = 0.0;
    double max_error = 0.0;
    int correction_count = 0;
    // Mean error of what was reported live, before any backtracking.
    double uncorrected_mean_error = 0.0;
};

struct RunResult {
    RunMetrics metrics;
    std::vector<EventRecord> events;  // empty unless record_events
};

/// Steps one node along its trace, localizing at the protocol's scheduled
/// times (snapped up to the trace grid) and scoring the reported position
/// against ground truth at every sample. Deterministic in (cfg, seed).
RunResult run(const RunConfig& cfg);

struct PairedResult {
    // runs[trace][protocol]
    std::vector<std::vector<RunMetrics>> runs;
    // localization_count / SFR count for each entry; empty when the set has no SFR
    std::vector<std::vector<std::optional<double>>> ratio_to_sfr;
};

/// Runs every protocol over every trace with the same noise seed per trace,
/// so all protocols see identical ground truth.
PairedResult run_paired(const std::vector<std::shared_ptr<const MobilityTrace>>& traces,
                        const std::vector<ProtocolConfig>& protocols, const NoiseModel& noise,
                        double dist_tolerance, std::uint64_t seed, bool backtracking = false);

/// Event log CSV body: header row plus one row per record.
void write_event_log(std::ostream& out, const std::vector<EventRecord>& events);

}  // namespace locsched
