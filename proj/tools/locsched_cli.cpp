// locsched: localization-scheduling simulator front end.
//
//   locsched simulate --protocol sfr --period 2 --speed 4:5 --pause 0 --duration 900 --seed 7
//   locsched sweep --spec configs/default.ini --out results/
//   locsched oracle --turn --theta 90 --x 3 --nmax 10
//   locsched import-trace scenario.txt --dt 0.1
//   locsched export-trace --speed 4:5 --nodes 24 --out scenario.txt
//   locsched regenerate results/summary.csv
//
// Exit codes: 0 success, 1 usage error, 2 validation error, 3 runtime failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "locsched/errors.hpp"
#include "locsched/experiments.hpp"
#include "locsched/numfmt.hpp"
#include "locsched/oracles.hpp"

namespace {

using namespace locsched;

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kRuntime = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + *path + "'");
    out << text;
}

Area parse_area(const std::string& text) {
    const auto x = text.find('x');
    double w = 0.0, h = 0.0;
    if (x == std::string::npos || !parse_double(text.substr(0, x), w) || !parse_double(text.substr(x + 1), h))
        throw ValidationError("--area: expected WIDTHxHEIGHT, got '" + text + "'");
    return {w, h};
}

// Scenario flags shared by simulate and sweep. A flag given on the command
// line overrides the same key from --config/--spec.
struct SpecFlags {
    std::optional<std::string> config;
    std::optional<std::string> mobility;
    std::vector<std::string> protocols;
    std::vector<std::string> speeds;
    std::vector<double> pauses;
    std::optional<double> period, alpha, t_min, t_max, threshold, growth, shrink;
    std::vector<double> upper_sweep;
    std::optional<double> duration, dt, noise, tolerance;
    std::optional<std::string> area;
    std::optional<std::uint64_t> seed;
    std::optional<int> repetitions;
    std::optional<std::string> trace;
    bool backtracking = false;

    void attach(CLI::App* cmd, const char* config_flag) {
        cmd->add_option(config_flag, config, "Config file or a previous output with a provenance header")
            ->check(CLI::ExistingFile);
        cmd->add_option("--mobility", mobility, "rwp | gauss_markov | import");
        cmd->add_option("--protocol", protocols, "sfr, dvm, madrd (repeatable)")->delimiter(',');
        cmd->add_option("--speed", speeds, "Speed class v_min:v_max (repeatable)")->delimiter(',');
        cmd->add_option("--pause", pauses, "Pause time(s) in seconds")->delimiter(',');
        cmd->add_option("--period", period, "SFR period (s)");
        cmd->add_option("--alpha", alpha, "DVM target maximum error (m)");
        cmd->add_option("--t-min", t_min, "Lower period limit for DVM and MADRD (s)");
        cmd->add_option("--t-max", t_max, "Upper query threshold for DVM and MADRD (s)");
        cmd->add_option("--upper-thresholds", upper_sweep, "Sweep these upper thresholds")->delimiter(',');
        cmd->add_option("--threshold", threshold, "MADRD divergence threshold (m)");
        cmd->add_option("--growth", growth, "MADRD period growth factor in HC");
        cmd->add_option("--shrink", shrink, "MADRD period shrink factor in LC");
        cmd->add_option("--duration", duration, "Run length (s)");
        cmd->add_option("--dt", dt, "Trace sampling step (s)");
        cmd->add_option("--noise", noise, "Localization noise maximum (m)");
        cmd->add_option("--tolerance", tolerance, "dist_tolerance for accuracy (m)");
        cmd->add_option("--area", area, "Simulation area WIDTHxHEIGHT (m)");
        cmd->add_option("--seed", seed, "Seed base");
        cmd->add_option("--repetitions", repetitions, "Repetitions per cell");
        cmd->add_option("--trace", trace, "Waypoint trace file (implies --mobility import)")->check(CLI::ExistingFile);
        cmd->add_flag("--backtracking", backtracking, "Correct reported positions by interpolation at each fix");
    }

    SweepSpec resolve(SweepSpec base) const {
        if (config) {
            const std::string text = read_file(*config);
            base = text.rfind("# locsched-provenance:", 0) == 0 ? read_provenance(text).spec
                                                                  : parse_sweep_spec(text, base);
        }
        SweepSpec s = base;
        if (trace) {
            s.mobility = MobilityModel::Imported;
            s.trace_file = *trace;
        }
        if (mobility) s.mobility = parse_sweep_spec("[sweep]\nmobility = " + *mobility + "\n").mobility;
        if (!protocols.empty()) {
            s.protocols.clear();
            for (const auto& p : protocols) s.protocols.push_back(parse_protocol_kind(p));
        }
        if (!speeds.empty()) {
            s.speed_classes.clear();
            for (const auto& v : speeds) s.speed_classes.push_back(parse_speed_class(v));
            if (s.upper_threshold.size() > 1 && s.upper_threshold.size() != s.speed_classes.size())
                s.upper_threshold = {s.upper_threshold.front()};
            if (s.sfr_period.size() > 1 && s.sfr_period.size() != s.speed_classes.size())
                s.sfr_period = {s.sfr_period.front()};
        }
        if (!pauses.empty()) s.pause_times = pauses;
        if (period) s.sfr_period = {*period};
        if (alpha) s.dvm_target_error = *alpha;
        if (t_min) s.dvm_t_min = s.madrd_t_min = *t_min;
        if (t_max) s.upper_threshold = {*t_max};
        if (!upper_sweep.empty()) s.upper_threshold_sweep = upper_sweep;
        if (threshold) s.madrd_divergence_threshold = *threshold;
        if (growth) s.madrd_period_growth = *growth;
        if (shrink) s.madrd_period_shrink = *shrink;
        if (duration) s.duration = *duration;
        if (dt) s.dt = *dt;
        if (noise) s.noise.max_magnitude = *noise;
        if (tolerance) s.dist_tolerance = *tolerance;
        if (area) s.area = parse_area(*area);
        if (seed) s.seed_base = *seed;
        if (repetitions) s.repetitions = *repetitions;
        if (backtracking) s.backtracking = true;
        s.validate();
        return s;
    }
};

SweepSpec simulate_defaults() {
    SweepSpec s;
    s.speed_classes = {{4.0, 5.0}};
    s.pause_times = {0.0};
    s.protocols = {ProtocolKind::SFR};
    s.repetitions = 1;
    s.upper_threshold = {6.0};
    return s;
}

int run_oracle_turn(double theta_deg, double x, double n_max, double step, std::ostream& out) {
    const double theta = theta_deg * std::numbers::pi / 180.0;
    if (!(step > 0.0)) throw ValidationError("--step must be positive");
    if (!(n_max >= 0.0)) throw ValidationError("--nmax must be non-negative");
    if (!(theta >= 0.0 && theta < 2.0 * std::numbers::pi)) throw ValidationError("--theta must lie in [0, 360)");
    if (!(x >= 0.0)) throw ValidationError("--x must be non-negative");
    const oracles::TurnScenario s{x, theta, 1.0, x + n_max + 1.0};
    out << "n,e_sfr,e_madrd\n";
    const auto steps = static_cast<long>(std::floor(n_max / step + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        const double n = static_cast<double>(i) * step;
        out << format_double(n) << ',' << format_double(oracles::e_sfr_turn(s, n)) << ','
            << format_double(oracles::e_madrd_turn(theta, n)) << '\n';
    }
    return kOk;
}

int run_oracle_pause(double v, double d, double t_max, double step, std::ostream& out) {
    if (!(step > 0.0)) throw ValidationError("--step must be positive");
    const oracles::PauseScenario s{d, v};
    s.validate();
    const double t_pause = d / v;
    out << "t,e_sfr,e_madrd\n";
    const auto steps = static_cast<long>(std::floor(t_max / step + 1e-9));
    for (long i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) * step;
        out << format_double(t) << ',' << format_double(oracles::e_sfr_pause(s, v * t)) << ','
            << format_double(oracles::e_madrd_pause(s, std::max(0.0, t - t_pause))) << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic localization scheduling simulator (SFR, DVM, MADRD)"};
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "Run one scenario cell and print its summary CSV");
    SpecFlags sim_flags;
    sim_flags.attach(simulate, "--config");
    std::optional<std::string> sim_out, sim_events;
    simulate->add_option("--out", sim_out, "Write the summary CSV here instead of stdout");
    simulate->add_option("--events", sim_events, "Write the event log of repetition 0 here");

    auto* sweep = app.add_subcommand("sweep", "Run a speed x pause x protocol x threshold grid");
    SpecFlags sweep_flags;
    sweep_flags.attach(sweep, "--spec");
    std::string sweep_out = "results";
    unsigned workers = 0;
    bool event_logs = false;
    sweep->add_option("--out", sweep_out, "Output directory for runs.csv, summary.csv, events/");
    sweep->add_option("--workers", workers, "Concurrent runs (default: LOCSCHED_WORKERS or all cores)");
    sweep->add_flag("--event-logs", event_logs, "Write one event log per run under <out>/events");

    auto* oracle = app.add_subcommand("oracle", "Tabulate closed-form turn or pause errors");
    bool turn = false, pause = false;
    double theta = 90.0, x = 0.0, n_max = 10.0, step = 1.0, v = 1.0, d = 0.0, t_max = 10.0;
    oracle->add_flag("--turn", turn, "Change-of-direction scenario");
    oracle->add_flag("--pause", pause, "Move-then-stop scenario");
    oracle->add_option("--theta", theta, "Deviation angle in degrees");
    oracle->add_option("--x", x, "Distance from last fix to the turn (m)");
    oracle->add_option("--nmax", n_max, "Largest post-turn distance (m)");
    oracle->add_option("--step", step, "Table step (m for --turn, s for --pause)");
    oracle->add_option("--v", v, "Speed before the pause (m/s)");
    oracle->add_option("--d", d, "Distance travelled before stopping (m)");
    oracle->add_option("--tmax", t_max, "Table end time since the fix (s)");

    auto* import = app.add_subcommand("import-trace", "Validate a waypoint trace and report per-node statistics");
    std::string import_path;
    double import_dt = 0.1;
    std::string import_area = "300x300";
    std::optional<std::string> import_out;
    import->add_option("file", import_path, "Waypoint trace file")->required()->check(CLI::ExistingFile);
    import->add_option("--dt", import_dt, "Resampling step (s)");
    import->add_option("--area", import_area, "Simulation area WIDTHxHEIGHT (m)");
    import->add_option("--out", import_out, "Write the resampled trace in waypoint format");

    auto* export_cmd = app.add_subcommand("export-trace", "Generate mobility traces in waypoint format");
    std::string ex_mobility = "rwp", ex_speed = "4:5", ex_area = "300x300";
    double ex_pause = 0.0, ex_duration = 900.0, ex_dt = 0.1;
    std::uint64_t ex_seed = 1;
    int ex_nodes = 1;
    std::optional<std::string> ex_out;
    export_cmd->add_option("--mobility", ex_mobility, "rwp | gauss_markov");
    export_cmd->add_option("--speed", ex_speed, "Speed class v_min:v_max");
    export_cmd->add_option("--pause", ex_pause, "Pause time (s)");
    export_cmd->add_option("--duration", ex_duration, "Trace length (s)");
    export_cmd->add_option("--dt", ex_dt, "Sampling step (s)");
    export_cmd->add_option("--area", ex_area, "Simulation area WIDTHxHEIGHT (m)");
    export_cmd->add_option("--seed", ex_seed, "Seed base");
    export_cmd->add_option("--nodes", ex_nodes, "Number of nodes")->check(CLI::PositiveNumber);
    export_cmd->add_option("--out", ex_out, "Output file (default stdout)");

    auto* regen = app.add_subcommand("regenerate", "Rebuild an output file from its provenance header");
    std::string regen_path;
    std::optional<std::string> regen_out;
    regen->add_option("file", regen_path, "CSV written by simulate or sweep")->required()->check(CLI::ExistingFile);
    regen->add_option("--out", regen_out, "Write here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*simulate) {
            const SweepSpec spec = sim_flags.resolve(simulate_defaults());
            const auto rows = run_sweep(spec);
            write_output(sim_out, render_summary_csv(spec, summarize(spec, rows)));
            if (sim_events) {
                const auto cell = enumerate_cells(spec).front();
                const auto trace = build_trace(spec, cell.speed_index, cell.pause_index, 0);
                write_output(sim_events, render_event_log(spec, cell, 0, trace->hash(), run_cell(spec, cell, 0)));
            }
        } else if (*sweep) {
            const SweepSpec spec = sweep_flags.resolve(SweepSpec{});
            const std::filesystem::path dir(sweep_out);
            std::filesystem::create_directories(dir);
            SweepOptions options;
            options.workers = workers;
            if (event_logs) options.event_log_dir = dir / "events";
            const auto rows = run_sweep(spec, options);
            write_output((dir / "runs.csv").string(), render_runs_csv(spec, rows));
            write_output((dir / "summary.csv").string(), render_summary_csv(spec, summarize(spec, rows)));
            std::cerr << "wrote " << rows.size() << " runs to " << dir.string() << '\n';
        } else if (*oracle) {
            if (turn == pause) throw ValidationError("oracle: pass exactly one of --turn or --pause");
            return turn ? run_oracle_turn(theta, x, n_max, step, std::cout)
                        : run_oracle_pause(v, d, t_max, step, std::cout);
        } else if (*import) {
            const auto traces = import_trace(read_file(import_path), parse_area(import_area), import_dt);
            if (import_out) {
                write_output(import_out, export_trace(traces));
            } else {
                std::cout << "node,samples,end_time,trace_hash\n";
                for (const auto& t : traces) {
                    char hash[19];
                    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(t.hash()));
                    std::cout << t.node_id() << ',' << t.size() << ',' << format_double(t.end_time()) << ','
                              << hash << '\n';
                }
            }
        } else if (*export_cmd) {
            const SpeedClass sc = parse_speed_class(ex_speed);
            const Area area = parse_area(ex_area);
            std::vector<MobilityTrace> traces;
            for (int node = 0; node < ex_nodes; ++node) {
                RandomStream rng(derive_seed(ex_seed, static_cast<std::uint64_t>(node)));
                if (ex_mobility == "rwp") {
                    traces.push_back(generate_rwp({area, sc.v_min, sc.v_max, ex_pause, ex_duration, ex_dt}, rng, node));
                } else if (ex_mobility == "gauss_markov") {
                    GaussMarkovConfig cfg;
                    cfg.area = area;
                    cfg.mean_speed = sc.mean();
                    cfg.duration = ex_duration;
                    cfg.dt = ex_dt;
                    traces.push_back(generate_gauss_markov(cfg, rng, node));
                } else {
                    throw ValidationError("--mobility: expected rwp or gauss_markov, got '" + ex_mobility + "'");
                }
            }
            write_output(ex_out, export_trace(traces));
        } else if (*regen) {
            write_output(regen_out, regenerate(read_file(regen_path)));
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntime;
    }
    return kOk;
}
