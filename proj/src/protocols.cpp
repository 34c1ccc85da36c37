#include "locsched/protocols.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "locsched/errors.hpp"

namespace locsched {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ValidationError(what);
}

void check_order(const SchedulerState& state, const LocalizationSample& sample, bool allow_same_time) {
    require(sample.t >= 0.0, "localization sample time must be non-negative");
    if (!state.last_sample) return;
    require(sample.t >= state.last_sample->t, "localization samples must arrive in time order");
    if (!allow_same_time) require(sample.t > state.last_sample->t, "zero elapsed time since previous localization");
}

Vec2 velocity_between(const LocalizationSample& from, const LocalizationSample& to) {
    return (to.measured - from.measured) / (to.t - from.t);
}

}  // namespace

void SfrConfig::validate() const { require(period > 0.0, "sfr period must be positive"); }

void DvmConfig::validate() const {
    require(target_error > 0.0, "dvm target_error must be positive");
    require(t_min > 0.0 && t_min <= t_max, "dvm limits must satisfy 0 < t_min <= t_max");
}

void MadrdConfig::validate() const {
    require(divergence_threshold > 0.0, "madrd divergence_threshold must be positive");
    require(t_min > 0.0 && t_min <= t_max, "madrd limits must satisfy 0 < t_min <= t_max");
    require(period_growth > 1.0, "madrd period_growth must exceed 1");
    require(period_shrink > 0.0 && period_shrink < 1.0, "madrd period_shrink must lie in (0, 1)");
}

std::string_view to_string(Confidence c) {
    switch (c) {
        case Confidence::LC: return "LC";
        case Confidence::S1: return "S1";
        case Confidence::S2: return "S2";
        case Confidence::HC: return "HC";
    }
    return "?";
}

Confidence step_toward_high(Confidence c) {
    return c == Confidence::HC ? c : static_cast<Confidence>(static_cast<int>(c) + 1);
}

Confidence step_toward_low(Confidence c) {
    return c == Confidence::LC ? c : static_cast<Confidence>(static_cast<int>(c) - 1);
}

SchedulerState sfr_on_localize(const SchedulerState& state, const LocalizationSample& sample, const SfrConfig& cfg) {
    cfg.validate();
    check_order(state, sample, true);
    SchedulerState next = state;
    next.prev_sample = state.last_sample;
    next.last_sample = sample;
    next.current_period = cfg.period;
    next.next_localization_time = sample.t + cfg.period;
    return next;
}

double dvm_period(double speed, const DvmConfig& cfg) {
    if (!(speed > 0.0)) return cfg.t_max;
    return std::clamp(cfg.target_error / speed, cfg.t_min, cfg.t_max);
}

SchedulerState dvm_on_localize(const SchedulerState& state, const LocalizationSample& sample, const DvmConfig& cfg) {
    cfg.validate();
    check_order(state, sample, false);
    SchedulerState next = state;
    next.prev_sample = state.last_sample;
    next.last_sample = sample;
    if (state.last_sample) {
        next.velocity_estimate = velocity_between(*state.last_sample, sample);
        next.current_period = dvm_period(norm(next.velocity_estimate), cfg);
    } else {
        next.velocity_estimate = {};
        next.current_period = cfg.t_min;
    }
    next.next_localization_time = sample.t + next.current_period;
    return next;
}

Position madrd_predict(const SchedulerState& state, double t) {
    require(state.last_sample.has_value(), "madrd_predict: no localization yet");
    require(t >= state.last_sample->t, "madrd_predict: time precedes last fix");
    return state.last_sample->measured + state.velocity_estimate * (t - state.last_sample->t);
}

Position hold_report(const SchedulerState& state) {
    require(state.last_sample.has_value(), "hold_report: no localization yet");
    return state.last_sample->measured;
}

SchedulerState madrd_on_localize(const SchedulerState& state, const LocalizationSample& sample,
                                 const MadrdConfig& cfg) {
    cfg.validate();
    check_order(state, sample, false);
    SchedulerState next = state;
    next.prev_sample = state.last_sample;
    next.last_sample = sample;

    if (!state.last_sample) {
        next.velocity_estimate = {};
        next.current_period = cfg.t_min;
        next.last_prediction_error = 0.0;
    } else {
        const double error = distance(madrd_predict(state, sample.t), sample.measured);
        next.last_prediction_error = error;
        next.confidence = error > cfg.divergence_threshold ? step_toward_low(state.confidence)
                                                           : step_toward_high(state.confidence);
        double period = state.current_period;
        if (next.confidence == Confidence::HC) period *= cfg.period_growth;
        if (next.confidence == Confidence::LC) period *= cfg.period_shrink;
        next.current_period = std::clamp(period, cfg.t_min, cfg.t_max);
        next.velocity_estimate = velocity_between(*state.last_sample, sample);
    }
    next.next_localization_time = sample.t + next.current_period;
    return next;
}

BacktrackResult backtrack_correct(const LocalizationSample& prev, const LocalizationSample& last,
                                  std::span<const TimedPosition> reported, double noise_max) {
    require(last.t > prev.t, "backtrack_correct: fixes must be strictly ordered in time");
    BacktrackResult result;
    result.corrected.reserve(reported.size());
    const double span = last.t - prev.t;
    for (const auto& r : reported) {
        require(r.t >= prev.t && r.t <= last.t, "backtrack_correct: reported time outside the fix interval");
        const double f = (r.t - prev.t) / span;
        const Position fixed{std::lerp(prev.measured.x, last.measured.x, f),
                             std::lerp(prev.measured.y, last.measured.y, f)};
        if (distance(fixed, r.pos) > noise_max) ++result.correction_count;
        result.corrected.push_back({r.t, fixed});
    }
    return result;
}

std::string_view to_string(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::SFR: return "sfr";
        case ProtocolKind::DVM: return "dvm";
        case ProtocolKind::MADRD: return "madrd";
    }
    return "?";
}

ProtocolKind parse_protocol_kind(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "sfr") return ProtocolKind::SFR;
    if (lower == "dvm") return ProtocolKind::DVM;
    if (lower == "madrd") return ProtocolKind::MADRD;
    throw ValidationError("unknown protocol '" + std::string(name) + "'");
}

ProtocolKind kind_of(const ProtocolConfig& cfg) { return static_cast<ProtocolKind>(cfg.index()); }

Scheduler::Scheduler(ProtocolConfig cfg) : cfg_(std::move(cfg)) {
    std::visit([](const auto& c) { c.validate(); }, cfg_);
}

void Scheduler::on_localize(const LocalizationSample& sample) {
    state_ = std::visit(
        [&](const auto& c) -> SchedulerState {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, SfrConfig>) return sfr_on_localize(state_, sample, c);
            else if constexpr (std::is_same_v<T, DvmConfig>) return dvm_on_localize(state_, sample, c);
            else return madrd_on_localize(state_, sample, c);
        },
        cfg_);
    ++count_;
}

Position Scheduler::report(double t) const {
    if (kind() == ProtocolKind::MADRD) return madrd_predict(state_, t);
    return hold_report(state_);
}

}  // namespace locsched
