#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locsched/engine.hpp"

namespace locsched {

struct SpeedClass {
    double v_min = 0.0;
    double v_max = 0.0;

    std::string label() const;  // "v_min:v_max"
    double mean() const { return 0.5 * (v_min + v_max); }
};

SpeedClass parse_speed_class(std::string_view text);

enum class MobilityModel { RandomWaypoint, GaussMarkov, Imported };

// Full description of an experiment grid. Serializes to the flat key-value
// config format; the serialized text is what provenance headers carry.
struct SweepSpec {
    MobilityModel mobility = MobilityModel::RandomWaypoint;
    std::vector<SpeedClass> speed_classes{{0.5, 1.0}, {4.0, 5.0}, {8.0, 10.0}};
    std::vector<double> pause_times{0.0, 30.0, 60.0, 120.0, 300.0};
    std::vector<ProtocolKind> protocols{ProtocolKind::SFR, ProtocolKind::DVM, ProtocolKind::MADRD};
    int repetitions = 10;
    double duration = 900.0;
    Area area;
    double dt = 0.1;
    std::uint64_t seed_base = 1;
    NoiseModel noise;
    double dist_tolerance = 5.0;
    bool backtracking = false;
    std::string trace_file;  // Imported mobility only

    // Per-speed-class values; a single entry applies to every class.
    std::vector<double> sfr_period{2.0};
    std::vector<double> upper_threshold{10.0, 6.0, 1.2};
    // When non-empty, replaces upper_threshold with a sweep dimension.
    std::vector<double> upper_threshold_sweep;

    double dvm_target_error = 5.0;
    double dvm_t_min = 0.5;
    double madrd_divergence_threshold = 5.0;
    double madrd_t_min = 0.5;
    double madrd_period_growth = 2.0;
    double madrd_period_shrink = 0.5;

    double gm_memory = 0.75;
    double gm_speed_sigma = 0.5;
    double gm_direction_sigma = 0.4;

    void validate() const;
};

/// Parses the sectioned key-value config text. Unknown keys and bad values
/// raise ValidationError naming the offending field.
SweepSpec parse_sweep_spec(std::string_view text, const SweepSpec& base = {});
std::string to_config_text(const SweepSpec& spec);

// One (speed class, pause time, protocol, upper threshold) combination.
struct Cell {
    std::size_t speed_index = 0;
    std::size_t pause_index = 0;
    ProtocolKind protocol = ProtocolKind::SFR;
    std::optional<double> upper_threshold;  // absent for SFR
};

std::vector<Cell> enumerate_cells(const SweepSpec& spec);
ProtocolConfig protocol_config(const SweepSpec& spec, const Cell& cell);

std::uint64_t mobility_seed(const SweepSpec& spec, int rep);
std::uint64_t noise_seed(const SweepSpec& spec, int rep);

/// Ground truth for (speed class, pause, rep); shared by every protocol cell.
std::shared_ptr<const MobilityTrace> build_trace(const SweepSpec& spec, std::size_t speed_index,
                                                 std::size_t pause_index, int rep);

struct RunRow {
    Cell cell;
    int rep = 0;
    std::uint64_t mobility_seed = 0;
    std::uint64_t noise_seed = 0;
    std::uint64_t trace_hash = 0;
    int localization_count = 0;
    std::optional<double> ratio_to_sfr;
    double mean_error = 0.0;
    double max_error = 0.0;
    double accuracy = 0.0;
    int correction_count = 0;
};

struct SweepOptions {
    unsigned workers = 0;  // 0: LOCSCHED_WORKERS or hardware concurrency
    std::optional<std::filesystem::path> event_log_dir;
};

unsigned default_workers();

/// Runs every cell for every repetition. Rows come back in a fixed order
/// (speed, pause, protocol, threshold, rep) independent of worker count.
std::vector<RunRow> run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

/// Single run of one cell; what a per-run event log records.
RunResult run_cell(const SweepSpec& spec, const Cell& cell, int rep);

struct Stat {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation; 0 for one value
};

Stat summarize_values(const std::vector<double>& values);

struct SummaryRow {
    std::string speed_class;
    double pause_time = 0.0;
    ProtocolKind protocol = ProtocolKind::SFR;
    std::optional<double> upper_threshold;
    int repetitions = 0;
    Stat localization_count;
    std::optional<Stat> ratio_to_sfr;
    Stat mean_error;
    Stat accuracy;
    Stat correction_count;
};

std::vector<SummaryRow> summarize(const SweepSpec& spec, const std::vector<RunRow>& rows);

// Output files. Each starts with a `#` provenance header holding the full
// config, from which regenerate() rebuilds the file byte for byte.
std::string provenance_header(const SweepSpec& spec, std::string_view kind);
std::string render_runs_csv(const SweepSpec& spec, const std::vector<RunRow>& rows);
std::string render_summary_csv(const SweepSpec& spec, const std::vector<SummaryRow>& rows);
std::string render_event_log(const SweepSpec& spec, const Cell& cell, int rep, std::uint64_t trace_hash,
                             const RunResult& result);
std::string event_log_name(const SweepSpec& spec, const Cell& cell, int rep);

std::vector<SummaryRow> parse_summary_csv(std::string_view text);

struct Provenance {
    std::string kind;  // runs | summary | events
    SweepSpec spec;
    std::optional<Cell> cell;  // events only
    int rep = 0;
    std::optional<std::uint64_t> trace_hash;
};

Provenance read_provenance(std::string_view file_text);
std::string regenerate(std::string_view file_text);

}  // namespace locsched
