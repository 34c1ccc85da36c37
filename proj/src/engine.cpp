#include "locsched/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "locsched/errors.hpp"
#include "locsched/numfmt.hpp"

namespace locsched {

namespace {

constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

// First grid index whose time is at or after t.
std::size_t snap_up(double t, double dt) {
    const double steps = std::ceil(t / dt - 1e-9);
    if (!(steps < 1e15)) return kNever;
    return static_cast<std::size_t>(std::max(steps, 0.0));
}

}  // namespace

void RunConfig::validate() const {
    if (!trace) throw ValidationError("run config: trace is missing");
    if (!(dist_tolerance > 0.0)) throw ValidationError("run config: dist_tolerance must be positive");
    if (!(noise.max_magnitude >= 0.0)) throw ValidationError("run config: noise magnitude must be non-negative");
    std::visit([](const auto& c) { c.validate(); }, protocol);
}

RunResult run(const RunConfig& cfg) {
    cfg.validate();
    const MobilityTrace& trace = *cfg.trace;
    const std::size_t n = trace.size();

    RandomStream rng(cfg.seed);
    Scheduler scheduler(cfg.protocol);

    std::vector<Position> reported(n);
    std::vector<double> errors(n);
    std::vector<bool> localized(n, false);
    std::vector<double> periods(n);
    std::vector<std::optional<Confidence>> confidence(n);

    RunResult result;
    RunMetrics& m = result.metrics;
    double uncorrected_sum = 0.0;

    std::size_t next_fix = 0;
    std::size_t prev_fix = kNever;
    for (std::size_t k = 0; k < n; ++k) {
        const auto& truth = trace[k];
        if (k == next_fix) {
            const LocalizationSample sample = localize(truth.t, truth.pos, cfg.noise, rng);
            if (cfg.backtracking_enabled && prev_fix != kNever && k > prev_fix + 1) {
                const auto& before = *scheduler.state().last_sample;
                std::vector<TimedPosition> pending;
                pending.reserve(k - prev_fix - 1);
                for (std::size_t j = prev_fix + 1; j < k; ++j) pending.push_back({trace[j].t, reported[j]});
                const auto fixed = backtrack_correct(before, sample, pending, cfg.noise.max_magnitude);
                m.correction_count += fixed.correction_count;
                for (std::size_t j = prev_fix + 1; j < k; ++j) {
                    reported[j] = fixed.corrected[j - prev_fix - 1].pos;
                    errors[j] = absolute_error(reported[j], trace[j].pos);
                }
            }
            scheduler.on_localize(sample);
            localized[k] = true;
            prev_fix = k;
            next_fix = std::max(snap_up(scheduler.next_localization_time(), trace.dt()), k + 1);
        }
        reported[k] = scheduler.report(truth.t);
        errors[k] = absolute_error(reported[k], truth.pos);
        uncorrected_sum += errors[k];
        periods[k] = scheduler.state().current_period;
        if (scheduler.kind() == ProtocolKind::MADRD) confidence[k] = scheduler.state().confidence;
    }

    m.localization_count = scheduler.localization_count();
    m.error_series.reserve(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        m.error_series.push_back({trace[k].t, errors[k]});
        sum += errors[k];
        m.max_error = std::max(m.max_error, errors[k]);
    }
    m.mean_error = sum / static_cast<double>(n);
    m.uncorrected_mean_error = uncorrected_sum / static_cast<double>(n);
    m.accuracy = threshold_accuracy(errors, cfg.dist_tolerance);

    if (cfg.record_events) {
        result.events.reserve(n);
        for (std::size_t k = 0; k < n; ++k)
            result.events.push_back(
                {trace[k].t, trace[k].pos, reported[k], errors[k], localized[k], periods[k], confidence[k]});
    }
    return result;
}

PairedResult run_paired(const std::vector<std::shared_ptr<const MobilityTrace>>& traces,
                        const std::vector<ProtocolConfig>& protocols, const NoiseModel& noise,
                        double dist_tolerance, std::uint64_t seed, bool backtracking) {
    PairedResult out;
    const auto sfr = std::find_if(protocols.begin(), protocols.end(),
                                  [](const ProtocolConfig& p) { return kind_of(p) == ProtocolKind::SFR; });
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const std::uint64_t noise_seed = derive_seed(seed, i);
        std::vector<RunMetrics> row;
        for (const auto& protocol : protocols) {
            RunConfig cfg{traces[i], protocol, noise, dist_tolerance, noise_seed, backtracking, false};
            row.push_back(run(cfg).metrics);
        }
        std::vector<std::optional<double>> ratios(protocols.size());
        if (sfr != protocols.end()) {
            const double base = row[static_cast<std::size_t>(sfr - protocols.begin())].localization_count;
            for (std::size_t p = 0; p < row.size(); ++p) ratios[p] = row[p].localization_count / base;
        }
        out.runs.push_back(std::move(row));
        out.ratio_to_sfr.push_back(std::move(ratios));
    }
    return out;
}

void write_event_log(std::ostream& out, const std::vector<EventRecord>& events) {
    out << "t,true_x,true_y,reported_x,reported_y,error,localized,period,confidence_state\n";
    for (const auto& e : events) {
        out << format_double(e.t) << ',' << format_double(e.truth.x) << ',' << format_double(e.truth.y) << ','
            << format_double(e.reported.x) << ',' << format_double(e.reported.y) << ',' << format_double(e.error)
            << ',' << (e.localized ? 1 : 0) << ',' << format_double(e.period) << ','
            << (e.confidence ? to_string(*e.confidence) : std::string_view("-")) << '\n';
    }
}

}  // namespace locsched
