#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "locsched/geometry.hpp"

namespace locsched {

struct SfrConfig {
    double period = 2.0;

    void validate() const;
};

struct DvmConfig {
    double target_error = 5.0;  // alpha: distance allowed to accrue between fixes
    double t_min = 0.5;
    double t_max = 10.0;

    void validate() const;
};

struct MadrdConfig {
    double divergence_threshold = 5.0;
    double t_min = 0.5;
    double t_max = 6.0;  // upper query threshold
    double period_growth = 2.0;
    double period_shrink = 0.5;

    void validate() const;
};

// Predictor confidence chain LC - S1 - S2 - HC. Transitions move one step at a time.
enum class Confidence { LC = 0, S1 = 1, S2 = 2, HC = 3 };

std::string_view to_string(Confidence c);
Confidence step_toward_high(Confidence c);
Confidence step_toward_low(Confidence c);

struct SchedulerState {
    std::optional<LocalizationSample> last_sample;
    std::optional<LocalizationSample> prev_sample;
    Vec2 velocity_estimate;
    double next_localization_time = 0.0;
    double current_period = 0.0;
    Confidence confidence = Confidence::S1;
    // MADRD score of the most recent fix (0 for the first fix).
    double last_prediction_error = 0.0;
};

// Each on_localize takes the state as it was before `sample` and returns the
// state after it. The first call (no last_sample) initializes the scheduler.
SchedulerState sfr_on_localize(const SchedulerState& state, const LocalizationSample& sample, const SfrConfig& cfg);
SchedulerState dvm_on_localize(const SchedulerState& state, const LocalizationSample& sample, const DvmConfig& cfg);
SchedulerState madrd_on_localize(const SchedulerState& state, const LocalizationSample& sample, const MadrdConfig& cfg);

/// DVM period for an observed speed: alpha / speed clamped to [t_min, t_max];
/// a standstill maps to t_max.
double dvm_period(double speed, const DvmConfig& cfg);

/// Last fix extrapolated at constant velocity: last + v * (t - t_last).
Position madrd_predict(const SchedulerState& state, double t);

/// SFR and DVM report the last fix until the next one.
Position hold_report(const SchedulerState& state);

struct TimedPosition {
    double t = 0.0;
    Position pos;
};

struct BacktrackResult {
    std::vector<TimedPosition> corrected;
    int correction_count = 0;
};

/// Replaces every reported position between two fixes with the linear
/// interpolation of the fixes at its timestamp. A point counts as a
/// correction when it moves by more than `noise_max`.
BacktrackResult backtrack_correct(const LocalizationSample& prev, const LocalizationSample& last,
                                  std::span<const TimedPosition> reported, double noise_max);

enum class ProtocolKind { SFR, DVM, MADRD };

std::string_view to_string(ProtocolKind k);
ProtocolKind parse_protocol_kind(std::string_view name);

using ProtocolConfig = std::variant<SfrConfig, DvmConfig, MadrdConfig>;

ProtocolKind kind_of(const ProtocolConfig& cfg);

// Owns one protocol's state and config; the run loop drives it.
class Scheduler {
public:
    explicit Scheduler(ProtocolConfig cfg);

    void on_localize(const LocalizationSample& sample);
    Position report(double t) const;

    ProtocolKind kind() const { return kind_of(cfg_); }
    const SchedulerState& state() const { return state_; }
    const ProtocolConfig& config() const { return cfg_; }
    double next_localization_time() const { return state_.next_localization_time; }
    int localization_count() const { return count_; }

private:
    ProtocolConfig cfg_;
    SchedulerState state_;
    int count_ = 0;
};

}  // namespace locsched
