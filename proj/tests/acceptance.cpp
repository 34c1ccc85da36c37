// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are pinned here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "locsched/engine.hpp"
#include "locsched/experiments.hpp"
#include "locsched/oracles.hpp"
#include "support/scenarios.hpp"
#include "support/turn_geometry.hpp"

using namespace locsched;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
    void note(const std::string& what) {
        if (ok) detail = what;
    }
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const SummaryRow* find_row(const std::vector<SummaryRow>& rows, const std::string& speed, double pause,
                           ProtocolKind kind, std::optional<double> ut = std::nullopt) {
    for (const auto& r : rows)
        if (r.speed_class == speed && r.pause_time == pause && r.protocol == kind && (!ut || r.upper_threshold == ut))
            return &r;
    return nullptr;
}

// 1. Closed forms vs brute-force coordinate geometry.
Outcome criterion_oracles() {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi), len(0.0, 50.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double theta = angle(rng), x = len(rng), n = len(rng);
        const double sfr = oracles::e_sfr_turn({x, theta, 1.0, x + 1.0}, n);
        const double madrd = oracles::e_madrd_turn(theta, n);
        const double b_sfr = testing::brute_sfr_error(x, theta, n);
        const double b_madrd = testing::brute_madrd_error(x, theta, n);
        worst = std::max({worst, std::abs(sfr - b_sfr) / b_sfr, std::abs(madrd - b_madrd) / b_madrd});
    }
    const double elapsed = seconds_since(start);
    if (!(worst <= 1e-9)) out.fail("max relative error " + num(worst));
    if (elapsed >= 1.0) out.fail("runtime " + num(elapsed) + " s");
    out.note("1000 triples, max relative error " + num(worst) + ", " + num(elapsed) + " s");
    return out;
}

// Last fix at or before t in an event log.
double last_fix_before(const std::vector<EventRecord>& events, double t) {
    double fix = 0.0;
    for (const auto& e : events) {
        if (e.t > t + 1e-9) break;
        if (e.localized) fix = e.t;
    }
    return fix;
}

double next_fix_after(const std::vector<EventRecord>& events, double t) {
    for (const auto& e : events)
        if (e.localized && e.t > t + 1e-9) return e.t;
    return events.back().t + 1.0;
}

RunResult noise_free(std::shared_ptr<const MobilityTrace> trace, ProtocolConfig p) {
    return run({std::move(trace), p, {0.0}, 5.0, 0, false, true});
}

// Long SFR period and MADRD ceiling so that both hold past the turn for many
// meters: SFR fixes at 0, 20, 40; MADRD doubles up to a fix at 16, next at 32.
constexpr double kScenarioPeriod = 20.0;

// 2. Simulated turn errors vs the closed forms.
Outcome criterion_turns() {
    Outcome out;
    const double v = 4.5, dt = 0.1, t_turn = 21.0;
    std::size_t checked = 0;
    double worst = 0.0;
    for (double deg : {45.0, 90.0, 135.0, 180.0}) {
        const double theta = deg * kPi / 180.0;
        const auto scen = testing::make_turn_trace(theta, v, t_turn, 45.0, dt);
        const auto sfr = noise_free(scen.trace, SfrConfig{kScenarioPeriod});
        const auto madrd = noise_free(scen.trace, MadrdConfig{5.0, 0.5, kScenarioPeriod, 2.0, 0.5});
        const double sfr_fix = last_fix_before(sfr.events, t_turn);
        const double sfr_end = next_fix_after(sfr.events, t_turn);
        const double madrd_end = next_fix_after(madrd.events, t_turn);
        const double x = v * (t_turn - sfr_fix);
        bool madrd_wins_everywhere = true;
        bool sfr_wins_late = false;
        for (std::size_t i = 0; i < sfr.events.size(); ++i) {
            const double t = sfr.events[i].t;
            if (t <= t_turn + 1e-9) continue;
            const double n = v * (t - t_turn);
            const bool in_sfr = t < sfr_end - 1e-9, in_madrd = t < madrd_end - 1e-9;
            if (in_sfr) {
                const double expect = oracles::e_sfr_turn({x, theta, v, kScenarioPeriod}, n);
                worst = std::max(worst, std::abs(sfr.events[i].error - expect) / (v * dt));
                ++checked;
            }
            if (in_madrd) {
                const double expect = oracles::e_madrd_turn(theta, n);
                worst = std::max(worst, std::abs(madrd.events[i].error - expect) / (v * dt));
                ++checked;
            }
            if (in_sfr && in_madrd) {
                if (deg == 45.0 && !(madrd.events[i].error < sfr.events[i].error)) madrd_wins_everywhere = false;
                if (deg == 135.0 && n >= 30.0 && sfr.events[i].error < madrd.events[i].error) sfr_wins_late = true;
            }
        }
        if (deg == 45.0 && !madrd_wins_everywhere) out.fail("45 deg: MADRD not below SFR at some n > 0");
        if (deg == 135.0 && !sfr_wins_late) out.fail("135 deg: SFR not below MADRD at large n");
    }
    // Same ordering straight from the closed forms over a wide n range.
    for (double n = 0.5; n <= 200.0; n += 0.5) {
        if (oracles::crossover_angle_check(kPi / 4, 4.5, n) != ProtocolKind::MADRD)
            out.fail("oracle: 45 deg favours SFR at n = " + num(n));
    }
    if (oracles::crossover_angle_check(3 * kPi / 4, 4.5, 200.0) != ProtocolKind::SFR)
        out.fail("oracle: 135 deg favours MADRD at n = 200");
    if (worst > 1.0) out.fail("per-sample deviation " + num(worst) + " x v*dt");
    out.note(std::to_string(checked) + " samples, max deviation " + num(worst) + " x v*dt");
    return out;
}

// 3. Move-then-stop trace.
Outcome criterion_pause() {
    Outcome out;
    const double v = 4.5, dt = 0.1, t_stop = 21.3;
    const auto scen = testing::make_pause_trace(v, t_stop, 45.0, dt);
    const auto sfr = noise_free(scen.trace, SfrConfig{kScenarioPeriod});
    const auto madrd = noise_free(scen.trace, MadrdConfig{5.0, 0.5, kScenarioPeriod, 2.0, 0.5});
    const double sfr_fix = last_fix_before(sfr.events, t_stop);
    const double sfr_end = next_fix_after(sfr.events, t_stop);
    const double madrd_end = next_fix_after(madrd.events, t_stop);
    const oracles::PauseScenario p{v * (t_stop - sfr_fix), v};
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t i = 0; i < sfr.events.size(); ++i) {
        const double t = sfr.events[i].t;
        if (t > sfr_fix + 1e-9 && t < sfr_end - 1e-9) {
            const double expect = oracles::e_sfr_pause(p, v * (t - sfr_fix));
            worst = std::max(worst, std::abs(sfr.events[i].error - expect) / (v * dt));
            ++checked;
        }
        if (t > t_stop + 1e-9 && t < madrd_end - 1e-9) {
            const double expect = oracles::e_madrd_pause(p, t - t_stop);
            worst = std::max(worst, std::abs(madrd.events[i].error - expect) / (v * dt));
            ++checked;
        }
    }
    if (checked < 100) out.fail("too few samples checked: " + std::to_string(checked));
    if (worst > 1.0) out.fail("per-sample deviation " + num(worst) + " x v*dt");
    out.note(std::to_string(checked) + " samples, max deviation " + num(worst) + " x v*dt");
    return out;
}

// 4. SFR ramps on a 900 s random waypoint run.
Outcome criterion_ramps() {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    RandomWaypointConfig cfg;
    cfg.v_min = 4.0;
    cfg.v_max = 5.0;
    RandomStream rng(derive_seed(1, 4));
    auto trace = std::make_shared<const MobilityTrace>(generate_rwp(cfg, rng));
    const auto r = run({trace, SfrConfig{2.0}, {0.5}, 5.0, 11, false, true});
    const double elapsed = seconds_since(start);

    std::vector<double> peaks;
    double peak = 0.0, worst_fix = 0.0;
    for (const auto& e : r.events) {
        if (e.localized) {
            if (e.t > 0.0) peaks.push_back(peak);
            peak = 0.0;
            worst_fix = std::max(worst_fix, e.error);
        } else {
            peak = std::max(peak, e.error);
        }
    }
    std::sort(peaks.begin(), peaks.end());
    const double median = peaks[peaks.size() / 2];
    const double top = peaks.back();
    if (!(median >= 7.0 && median <= 11.0)) out.fail("median ramp peak " + num(median));
    if (top > 11.0) out.fail("max ramp peak " + num(top));
    if (worst_fix > 0.5) out.fail("fix error " + num(worst_fix));
    if (elapsed >= 1.0) out.fail("runtime " + num(elapsed) + " s");
    out.note("median peak " + num(median) + " m, max " + num(top) + " m, fix error <= " + num(worst_fix) +
             " m, " + num(elapsed) + " s");
    return out;
}

// 5. Localization-count ratios under the default bundle.
Outcome criterion_energy(const SweepSpec& spec, const std::vector<SummaryRow>& rows) {
    Outcome out;
    const std::string slow = spec.speed_classes.front().label(), fast = spec.speed_classes.back().label();
    std::string detail;
    for (ProtocolKind k : {ProtocolKind::DVM, ProtocolKind::MADRD}) {
        const std::string name(to_string(k));
        for (double pause : spec.pause_times) {
            const auto* r = find_row(rows, slow, pause, k);
            if (!(r->ratio_to_sfr->mean < 1.0))
                out.fail(name + " ratio " + num(r->ratio_to_sfr->mean) + " at " + slow + " pause " + num(pause));
        }
        const auto* f = find_row(rows, fast, 0.0, k);
        if (!(f->ratio_to_sfr->mean > 1.0)) out.fail(name + " ratio " + num(f->ratio_to_sfr->mean) + " at " + fast);
        for (const auto& sc : spec.speed_classes) {
            for (std::size_t i = 1; i < spec.pause_times.size(); ++i) {
                const auto* a = find_row(rows, sc.label(), spec.pause_times[i - 1], k);
                const auto* b = find_row(rows, sc.label(), spec.pause_times[i], k);
                const double band = std::max(a->ratio_to_sfr->stddev, b->ratio_to_sfr->stddev);
                if (b->ratio_to_sfr->mean > a->ratio_to_sfr->mean + band)
                    out.fail(name + " ratio rises with pause at " + sc.label() + ": " + num(a->ratio_to_sfr->mean) +
                             " -> " + num(b->ratio_to_sfr->mean));
            }
        }
        detail += name + " " + num(find_row(rows, slow, 0.0, k)->ratio_to_sfr->mean) + "@" + slow + " " +
                  num(f->ratio_to_sfr->mean) + "@" + fast + "; ";
    }
    out.note(detail + std::to_string(spec.repetitions) + " reps");
    return out;
}

// Least-squares slope of mean error against mean class speed.
double error_slope(const SweepSpec& spec, const std::vector<SummaryRow>& rows, ProtocolKind k, double pause) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(spec.speed_classes.size());
    for (const auto& sc : spec.speed_classes) {
        const double x = sc.mean(), y = find_row(rows, sc.label(), pause, k)->mean_error.mean;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// 6. Error growth with speed and 5 m accuracy at 4-5 m/s.
Outcome criterion_error(const SweepSpec& spec, const std::vector<SummaryRow>& rows) {
    Outcome out;
    std::string detail;
    for (double pause : spec.pause_times) {
        const double sfr = error_slope(spec, rows, ProtocolKind::SFR, pause);
        const double dvm = error_slope(spec, rows, ProtocolKind::DVM, pause);
        const double madrd = error_slope(spec, rows, ProtocolKind::MADRD, pause);
        if (!(sfr > 0.0)) out.fail("SFR error slope " + num(sfr) + " at pause " + num(pause));
        if (!(dvm < sfr && madrd < sfr))
            out.fail("adaptive slope not below SFR at pause " + num(pause) + ": " + num(dvm) + ", " + num(madrd) +
                     " vs " + num(sfr));
        if (pause == 0.0)
            detail = "slopes sfr " + num(sfr) + " dvm " + num(dvm) + " madrd " + num(madrd) + " m per m/s";
    }
    const std::string mid = spec.speed_classes[1].label();
    const double a_sfr = find_row(rows, mid, 0.0, ProtocolKind::SFR)->accuracy.mean;
    const double a_dvm = find_row(rows, mid, 0.0, ProtocolKind::DVM)->accuracy.mean;
    const double a_madrd = find_row(rows, mid, 0.0, ProtocolKind::MADRD)->accuracy.mean;
    if (!(a_dvm >= a_sfr && a_madrd >= a_sfr))
        out.fail("accuracy at " + mid + ": sfr " + num(a_sfr) + " dvm " + num(a_dvm) + " madrd " + num(a_madrd));
    out.note(detail + "; accuracy sfr " + num(a_sfr) + " dvm " + num(a_dvm) + " madrd " + num(a_madrd));
    return out;
}

// 7. MADRD upper-threshold sweep at 4-5 m/s.
Outcome criterion_threshold(int reps) {
    Outcome out;
    SweepSpec spec;
    spec.speed_classes = {{4.0, 5.0}};
    spec.pause_times = {0.0};
    spec.protocols = {ProtocolKind::MADRD};
    spec.upper_threshold = {6.0};
    spec.upper_threshold_sweep = {2, 4, 6, 8, 10};
    spec.repetitions = reps;
    const auto rows = summarize(spec, run_sweep(spec));
    std::string detail = "count/error:";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        detail += " " + num(rows[i].localization_count.mean) + "/" + num(rows[i].mean_error.mean);
        if (i == 0) continue;
        const auto &a = rows[i - 1], &b = rows[i];
        const double count_band = std::max(a.localization_count.stddev, b.localization_count.stddev);
        const double error_band = std::max(a.mean_error.stddev, b.mean_error.stddev);
        if (b.localization_count.mean > a.localization_count.mean + count_band)
            out.fail("count rises at t_max " + num(*b.upper_threshold));
        if (b.mean_error.mean < a.mean_error.mean - error_band)
            out.fail("error falls at t_max " + num(*b.upper_threshold));
    }
    out.note(detail);
    return out;
}

// 8. Gauss-Markov bundle. The comparison is on the bundle mean error (all
// speed classes and repetitions pooled); per-class ratios are reported too.
Outcome criterion_gauss_markov(int reps) {
    Outcome out;
    SweepSpec spec;
    spec.mobility = MobilityModel::GaussMarkov;
    spec.pause_times = {0.0};
    spec.repetitions = reps;
    const auto rows = summarize(spec, run_sweep(spec));
    std::map<ProtocolKind, double> pooled;
    std::string per_class = "per class (dvm/madrd):";
    for (const auto& sc : spec.speed_classes) {
        const double sfr = find_row(rows, sc.label(), 0.0, ProtocolKind::SFR)->mean_error.mean;
        const double dvm = find_row(rows, sc.label(), 0.0, ProtocolKind::DVM)->mean_error.mean;
        const double madrd = find_row(rows, sc.label(), 0.0, ProtocolKind::MADRD)->mean_error.mean;
        pooled[ProtocolKind::SFR] += sfr / static_cast<double>(spec.speed_classes.size());
        pooled[ProtocolKind::DVM] += dvm / static_cast<double>(spec.speed_classes.size());
        pooled[ProtocolKind::MADRD] += madrd / static_cast<double>(spec.speed_classes.size());
        per_class += " " + sc.label() + " " + num(dvm / sfr) + "/" + num(madrd / sfr);
    }
    const double sfr = pooled[ProtocolKind::SFR];
    for (ProtocolKind k : {ProtocolKind::DVM, ProtocolKind::MADRD})
        if (pooled[k] > 1.25 * sfr)
            out.fail(std::string(to_string(k)) + " bundle error " + num(pooled[k]) + " vs sfr " + num(sfr));
    out.note("bundle error sfr " + num(sfr) + " dvm " + num(pooled[ProtocolKind::DVM]) + " madrd " +
             num(pooled[ProtocolKind::MADRD]) + "; " + per_class);
    return out;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 9. Bit-identical output and shared ground truth across protocols.
Outcome criterion_determinism() {
    Outcome out;
    SweepSpec spec;
    spec.repetitions = 2;
    spec.duration = 120.0;
    spec.pause_times = {0.0, 60.0};
    const auto rows_a = run_sweep(spec, {1, std::nullopt});
    const auto rows_b = run_sweep(spec, {4, std::nullopt});
    const auto runs_a = render_runs_csv(spec, rows_a);
    const auto summary_a = render_summary_csv(spec, summarize(spec, rows_a));
    if (runs_a != render_runs_csv(spec, rows_b)) out.fail("runs CSV differs between executions");
    if (summary_a != render_summary_csv(spec, summarize(spec, rows_b))) out.fail("summary CSV differs");
    if (regenerate(runs_a) != runs_a) out.fail("runs CSV does not regenerate from its header");

    const auto dir = std::filesystem::temp_directory_path() / "locsched_acceptance_events";
    std::filesystem::remove_all(dir);
    run_sweep(spec, {2, dir});
    std::map<std::pair<std::string, int>, std::set<std::uint64_t>> hashes;  // (speed,pause) group, rep
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const std::string text = slurp(entry.path());
        const Provenance p = read_provenance(text);
        const auto key = std::make_pair(std::to_string(p.cell->speed_index) + "/" + std::to_string(p.cell->pause_index),
                                        p.rep);
        hashes[key].insert(*p.trace_hash);
        if (build_trace(p.spec, p.cell->speed_index, p.cell->pause_index, p.rep)->hash() != *p.trace_hash)
            out.fail("header hash does not match rebuilt trace in " + entry.path().filename().string());
        if (regenerate(text) != text) out.fail("event log does not regenerate: " + entry.path().filename().string());
        ++files;
    }
    std::filesystem::remove_all(dir);
    for (const auto& [key, set] : hashes)
        if (set.size() != 1) out.fail("protocols saw different traces in group " + key.first);
    if (files != enumerate_cells(spec).size() * 2) out.fail("event log count " + std::to_string(files));
    out.note(std::to_string(files) + " event logs, " + std::to_string(hashes.size()) +
             " paired groups with one trace hash each");
    return out;
}

// 10. Randomized protocol invariants.
Outcome criterion_properties() {
    Outcome out;
    std::mt19937_64 rng(977);
    auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    int configs = 0;

    for (int trial = 0; trial < 40; ++trial, ++configs) {
        const double t_min = uni(0.1, 2.0);
        const MadrdConfig mc{uni(0.5, 10.0), t_min, t_min + uni(0.0, 15.0), uni(1.1, 4.0), uni(0.1, 0.9)};
        const DvmConfig dc{uni(0.5, 10.0), t_min, t_min + uni(0.0, 15.0)};
        RandomWaypointConfig wc;
        wc.v_min = uni(0.2, 8.0);
        wc.v_max = wc.v_min + uni(0.0, 3.0);
        wc.pause_time = uni(0.0, 60.0);
        wc.duration = 300.0;
        RandomStream trng(rng());
        auto trace = std::make_shared<const MobilityTrace>(generate_rwp(wc, trng));
        const double noise = uni(0.0, 2.0);
        const std::uint64_t seed = rng();

        const auto m = run({trace, mc, {noise}, 5.0, seed, false, true});
        const auto d = run({trace, dc, {noise}, 5.0, seed, false, true});
        const auto s = run({trace, SfrConfig{uni(0.5, 5.0)}, {noise}, 5.0, seed, false, true});

        std::optional<Confidence> prev_conf;
        for (std::size_t i = 0; i < m.events.size(); ++i) {
            const auto& e = m.events[i];
            if (e.period < mc.t_min - 1e-12 || e.period > mc.t_max + 1e-12) out.fail("madrd period outside limits");
            if (e.localized && prev_conf && std::abs(static_cast<int>(*e.confidence) - static_cast<int>(*prev_conf)) > 1)
                out.fail("confidence skipped a state");
            if (e.localized) prev_conf = e.confidence;
            if (i >= 2 && !e.localized && !m.events[i - 1].localized) {
                const Vec2 a = e.reported - m.events[i - 1].reported;
                const Vec2 b = m.events[i - 1].reported - m.events[i - 2].reported;
                if (std::hypot(a.x - b.x, a.y - b.y) > 1e-9 * (1.0 + norm(a))) out.fail("madrd report not piecewise linear");
            }
        }
        for (const auto* r : {&d, &s}) {
            for (std::size_t i = 1; i < r->events.size(); ++i)
                if (!r->events[i].localized && !(r->events[i].reported == r->events[i - 1].reported))
                    out.fail("hold report not piecewise constant");
        }
        for (const auto& e : d.events)
            if (e.period < dc.t_min - 1e-12 || e.period > dc.t_max + 1e-12) out.fail("dvm period outside limits");
    }

    // Backtracking on random noise-free turn scenarios.
    for (int trial = 0; trial < 40; ++trial, ++configs) {
        const double theta = uni(0.0, 2.0 * kPi), v = uni(0.5, 10.0);
        const double t_turn = std::round(uni(5.0, 40.0) * 10.0) / 10.0;
        const auto scen = testing::make_turn_trace(theta, v, t_turn, 80.0, 0.1);
        const double t_min = uni(0.2, 2.0);
        const std::vector<ProtocolConfig> protos{SfrConfig{uni(0.5, 10.0)},
                                                 MadrdConfig{uni(0.5, 10.0), t_min, t_min + uni(0.0, 15.0), 2.0, 0.5}};
        for (const auto& p : protos) {
            const auto r = run({scen.trace, p, {0.0}, 5.0, 0, true, false});
            if (r.metrics.mean_error > r.metrics.uncorrected_mean_error + 1e-12)
                out.fail(std::string(to_string(kind_of(p))) + " backtracking raised mean error at theta " +
                         num(theta * 180 / kPi) + " deg");
        }
    }
    out.note(std::to_string(configs) + " randomized configurations");
    return out;
}

}  // namespace

int main() {
    const int reps = 10;
    SweepSpec bundle;
    bundle.repetitions = reps;
    const auto start = std::chrono::steady_clock::now();
    const auto bundle_rows = summarize(bundle, run_sweep(bundle));
    std::fprintf(stderr, "default bundle: %zu cells x %d reps in %.2f s\n", bundle_rows.size(), reps,
                 seconds_since(start));

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", criterion_oracles},
        {"simulator vs turn oracle", criterion_turns},
        {"pause scenario shapes", criterion_pause},
        {"SFR error ramps", criterion_ramps},
        {"energy ordering", [&] { return criterion_energy(bundle, bundle_rows); }},
        {"error/accuracy ordering", [&] { return criterion_error(bundle, bundle_rows); }},
        {"MADRD upper-threshold tradeoff", [&] { return criterion_threshold(reps); }},
        {"Gauss-Markov robustness", [&] { return criterion_gauss_markov(reps); }},
        {"determinism and pairing", criterion_determinism},
        {"protocol invariants", criterion_properties},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failures += !o.ok;
        std::printf("%s criterion %zu (%s): %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
