#include "locsched/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "locsched/errors.hpp"
#include "locsched/numfmt.hpp"

namespace locsched {

namespace {

namespace pt = boost::property_tree;

constexpr std::string_view kProvenanceTag = "# locsched-provenance: ";
constexpr std::uint64_t kMobilityStream = 0x6d6f62;
constexpr std::uint64_t kNoiseStream = 0x6e6f6973;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double to_number(const std::string& field, std::string_view text) {
    double v = 0.0;
    if (!parse_double(trim(text), v) || !std::isfinite(v))
        throw ValidationError(field + ": not a number: '" + std::string(text) + "'");
    return v;
}

std::vector<double> to_numbers(const std::string& field, std::string_view text) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (const auto& part : split(text, ',')) out.push_back(to_number(field, part));
    return out;
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ", " : "") + format_double(values[i]);
    return out;
}

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t parse_hex64(std::string_view text) {
    const std::string s = trim(text);
    std::size_t used = 0;
    try {
        const auto v = std::stoull(s, &used, 16);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ValidationError("not a hexadecimal hash: '" + s + "'");
}

std::string_view mobility_name(MobilityModel m) {
    switch (m) {
        case MobilityModel::RandomWaypoint: return "rwp";
        case MobilityModel::GaussMarkov: return "gauss_markov";
        case MobilityModel::Imported: return "import";
    }
    return "?";
}

MobilityModel parse_mobility(const std::string& s) {
    if (s == "rwp") return MobilityModel::RandomWaypoint;
    if (s == "gauss_markov") return MobilityModel::GaussMarkov;
    if (s == "import") return MobilityModel::Imported;
    throw ValidationError("sweep.mobility: unknown model '" + s + "'");
}

double per_class(const std::vector<double>& values, std::size_t speed_index) {
    return values.size() == 1 ? values.front() : values.at(speed_index);
}

std::string speed_label(const SweepSpec& spec, std::size_t speed_index) {
    if (spec.mobility == MobilityModel::Imported) return "import";
    return spec.speed_classes.at(speed_index).label();
}

std::string optional_number(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<MobilityTrace> load_imported(const SweepSpec& spec) {
    std::ifstream in(spec.trace_file);
    if (!in) throw ValidationError("sweep.trace_file: cannot read '" + spec.trace_file + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    auto traces = import_trace(buffer.str(), spec.area, spec.dt);
    if (traces.empty()) throw ValidationError("sweep.trace_file: no nodes in '" + spec.trace_file + "'");
    return traces;
}

std::size_t speed_count(const SweepSpec& spec) {
    return spec.mobility == MobilityModel::Imported ? 1 : spec.speed_classes.size();
}

std::size_t pause_count(const SweepSpec& spec) {
    return spec.mobility == MobilityModel::Imported ? 1 : spec.pause_times.size();
}

double pause_value(const SweepSpec& spec, std::size_t pause_index) {
    return spec.mobility == MobilityModel::Imported ? 0.0 : spec.pause_times.at(pause_index);
}

std::shared_ptr<const MobilityTrace> trace_for(const SweepSpec& spec, std::size_t speed_index,
                                               std::size_t pause_index, int rep,
                                               const std::vector<MobilityTrace>* imported) {
    if (spec.mobility == MobilityModel::Imported) {
        if (imported) return std::make_shared<const MobilityTrace>((*imported)[rep % imported->size()]);
        const auto traces = load_imported(spec);
        return std::make_shared<const MobilityTrace>(traces[rep % traces.size()]);
    }
    RandomStream rng(mobility_seed(spec, rep));
    const SpeedClass& sc = spec.speed_classes.at(speed_index);
    if (spec.mobility == MobilityModel::GaussMarkov) {
        GaussMarkovConfig cfg{spec.area,           sc.mean(),     spec.gm_memory, spec.gm_speed_sigma,
                              spec.gm_direction_sigma, spec.duration, spec.dt};
        return std::make_shared<const MobilityTrace>(generate_gauss_markov(cfg, rng, rep));
    }
    RandomWaypointConfig cfg{spec.area, sc.v_min, sc.v_max, spec.pause_times.at(pause_index), spec.duration, spec.dt};
    return std::make_shared<const MobilityTrace>(generate_rwp(cfg, rng, rep));
}

RunResult run_on_trace(const SweepSpec& spec, const Cell& cell, int rep,
                       std::shared_ptr<const MobilityTrace> trace, bool record_events) {
    RunConfig cfg{std::move(trace), protocol_config(spec, cell), spec.noise, spec.dist_tolerance,
                  noise_seed(spec, rep), spec.backtracking, record_events};
    return run(cfg);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace

std::string SpeedClass::label() const { return format_double(v_min) + ":" + format_double(v_max); }

SpeedClass parse_speed_class(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw ValidationError("speed class must look like 'v_min:v_max', got '" + std::string(text) + "'");
    SpeedClass sc{to_number("speed class", parts[0]), to_number("speed class", parts[1])};
    if (!(sc.v_min > 0.0 && sc.v_min <= sc.v_max))
        throw ValidationError("speed class '" + std::string(text) + "' must satisfy 0 < v_min <= v_max");
    return sc;
}

void SweepSpec::validate() const {
    auto fail = [](const std::string& what) { throw ValidationError(what); };
    if (mobility != MobilityModel::Imported && speed_classes.empty()) fail("sweep.speed_classes: empty");
    for (const auto& sc : speed_classes)
        if (!(sc.v_min > 0.0 && sc.v_min <= sc.v_max)) fail("sweep.speed_classes: need 0 < v_min <= v_max");
    if (mobility != MobilityModel::Imported && pause_times.empty()) fail("sweep.pause_times: empty");
    for (double p : pause_times)
        if (!(p >= 0.0)) fail("sweep.pause_times: must be non-negative");
    if (mobility == MobilityModel::GaussMarkov && (pause_times.size() != 1 || pause_times[0] != 0.0))
        fail("sweep.pause_times: gauss_markov mobility has no pauses; use 0");
    if (mobility == MobilityModel::Imported && trace_file.empty()) fail("sweep.trace_file: required for import");
    if (protocols.empty()) fail("sweep.protocols: empty");
    if (repetitions < 1) fail("sweep.repetitions: must be >= 1");
    if (!(duration > 0.0)) fail("sweep.duration: must be positive");
    if (!(area.width > 0.0 && area.height > 0.0)) fail("sweep.area: must be positive");
    if (!(dt > 0.0)) fail("sweep.dt: must be positive");
    if (!(noise.max_magnitude >= 0.0)) fail("sweep.noise: must be non-negative");
    if (!(dist_tolerance > 0.0)) fail("sweep.dist_tolerance: must be positive");
    const std::size_t classes = speed_count(*this);
    auto check_per_class = [&](const std::vector<double>& v, const char* name) {
        if (v.empty() || (v.size() != 1 && v.size() != classes))
            fail(std::string(name) + ": need one value or one per speed class");
        for (double x : v)
            if (!(x > 0.0)) fail(std::string(name) + ": values must be positive");
    };
    check_per_class(sfr_period, "sfr.period");
    if (upper_threshold_sweep.empty()) check_per_class(upper_threshold, "sweep.upper_threshold");
    for (double x : upper_threshold_sweep)
        if (!(x > 0.0)) fail("sweep.upper_threshold_sweep: values must be positive");
    for (const auto& cell : enumerate_cells(*this)) {
        try {
            std::visit([](const auto& c) { c.validate(); }, protocol_config(*this, cell));
        } catch (const ValidationError& e) {
            fail(std::string(to_string(cell.protocol)) + ": " + e.what());
        }
    }
    if (mobility == MobilityModel::GaussMarkov) {
        if (!(gm_memory >= 0.0 && gm_memory <= 1.0)) fail("gauss_markov.memory: must lie in [0, 1]");
        if (!(gm_speed_sigma >= 0.0)) fail("gauss_markov.speed_sigma: must be non-negative");
        if (!(gm_direction_sigma >= 0.0)) fail("gauss_markov.direction_sigma: must be non-negative");
    }
}

SweepSpec parse_sweep_spec(std::string_view text, const SweepSpec& base) {
    pt::ptree tree;
    try {
        std::istringstream in{std::string(text)};
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ParseError(e.line(), e.message());
    }

    SweepSpec spec = base;
    for (const auto& [section, entries] : tree) {
        if (entries.empty() && !entries.data().empty())
            throw ValidationError("config: key '" + section + "' must be inside a section");
        for (const auto& [key, node] : entries) {
            const std::string field = section + "." + key;
            const std::string value = trim(node.data());
            auto number = [&] { return to_number(field, value); };
            auto numbers = [&] { return to_numbers(field, value); };

            if (section == "sweep") {
                if (key == "mobility") spec.mobility = parse_mobility(value);
                else if (key == "speed_classes") {
                    spec.speed_classes.clear();
                    for (const auto& part : split(value, ',')) spec.speed_classes.push_back(parse_speed_class(part));
                } else if (key == "pause_times") spec.pause_times = numbers();
                else if (key == "protocols") {
                    spec.protocols.clear();
                    for (const auto& part : split(value, ',')) spec.protocols.push_back(parse_protocol_kind(part));
                } else if (key == "repetitions") {
                    const double r = number();
                    if (r != std::floor(r) || r < 1 || r > 1e6) throw ValidationError(field + ": must be a positive integer");
                    spec.repetitions = static_cast<int>(r);
                } else if (key == "duration") spec.duration = number();
                else if (key == "area") {
                    const auto wh = split(value, 'x');
                    if (wh.size() != 2) throw ValidationError(field + ": expected WIDTHxHEIGHT");
                    spec.area = {to_number(field, wh[0]), to_number(field, wh[1])};
                } else if (key == "dt") spec.dt = number();
                else if (key == "seed_base") {
                    try {
                        std::size_t used = 0;
                        spec.seed_base = std::stoull(value, &used);
                        if (used != value.size()) throw std::invalid_argument(value);
                    } catch (const std::exception&) {
                        throw ValidationError(field + ": must be a non-negative integer");
                    }
                } else if (key == "noise") spec.noise.max_magnitude = number();
                else if (key == "dist_tolerance") spec.dist_tolerance = number();
                else if (key == "backtracking") {
                    if (value == "true" || value == "1") spec.backtracking = true;
                    else if (value == "false" || value == "0") spec.backtracking = false;
                    else throw ValidationError(field + ": expected true or false");
                } else if (key == "trace_file") spec.trace_file = value;
                else if (key == "upper_threshold") spec.upper_threshold = numbers();
                else if (key == "upper_threshold_sweep") spec.upper_threshold_sweep = numbers();
                else throw ValidationError("config: unknown key '" + field + "'");
            } else if (section == "sfr") {
                if (key == "period") spec.sfr_period = numbers();
                else throw ValidationError("config: unknown key '" + field + "'");
            } else if (section == "dvm") {
                if (key == "target_error") spec.dvm_target_error = number();
                else if (key == "t_min") spec.dvm_t_min = number();
                else throw ValidationError("config: unknown key '" + field + "'");
            } else if (section == "madrd") {
                if (key == "divergence_threshold") spec.madrd_divergence_threshold = number();
                else if (key == "t_min") spec.madrd_t_min = number();
                else if (key == "period_growth") spec.madrd_period_growth = number();
                else if (key == "period_shrink") spec.madrd_period_shrink = number();
                else throw ValidationError("config: unknown key '" + field + "'");
            } else if (section == "gauss_markov") {
                if (key == "memory") spec.gm_memory = number();
                else if (key == "speed_sigma") spec.gm_speed_sigma = number();
                else if (key == "direction_sigma") spec.gm_direction_sigma = number();
                else throw ValidationError("config: unknown key '" + field + "'");
            } else if (section == "run") {
                // carried by event-log provenance; read by read_provenance
            } else {
                throw ValidationError("config: unknown section '" + section + "'");
            }
        }
    }
    return spec;
}

std::string to_config_text(const SweepSpec& spec) {
    std::ostringstream out;
    out << "[sweep]\n";
    out << "mobility = " << mobility_name(spec.mobility) << '\n';
    out << "speed_classes = ";
    for (std::size_t i = 0; i < spec.speed_classes.size(); ++i) out << (i ? ", " : "") << spec.speed_classes[i].label();
    out << '\n';
    out << "pause_times = " << join(spec.pause_times) << '\n';
    out << "protocols = ";
    for (std::size_t i = 0; i < spec.protocols.size(); ++i) out << (i ? ", " : "") << to_string(spec.protocols[i]);
    out << '\n';
    out << "repetitions = " << spec.repetitions << '\n';
    out << "duration = " << format_double(spec.duration) << '\n';
    out << "area = " << format_double(spec.area.width) << 'x' << format_double(spec.area.height) << '\n';
    out << "dt = " << format_double(spec.dt) << '\n';
    out << "seed_base = " << spec.seed_base << '\n';
    out << "noise = " << format_double(spec.noise.max_magnitude) << '\n';
    out << "dist_tolerance = " << format_double(spec.dist_tolerance) << '\n';
    out << "backtracking = " << (spec.backtracking ? "true" : "false") << '\n';
    if (!spec.trace_file.empty()) out << "trace_file = " << spec.trace_file << '\n';
    out << "upper_threshold = " << join(spec.upper_threshold) << '\n';
    if (!spec.upper_threshold_sweep.empty()) out << "upper_threshold_sweep = " << join(spec.upper_threshold_sweep) << '\n';
    out << "[sfr]\nperiod = " << join(spec.sfr_period) << '\n';
    out << "[dvm]\ntarget_error = " << format_double(spec.dvm_target_error) << '\n';
    out << "t_min = " << format_double(spec.dvm_t_min) << '\n';
    out << "[madrd]\ndivergence_threshold = " << format_double(spec.madrd_divergence_threshold) << '\n';
    out << "t_min = " << format_double(spec.madrd_t_min) << '\n';
    out << "period_growth = " << format_double(spec.madrd_period_growth) << '\n';
    out << "period_shrink = " << format_double(spec.madrd_period_shrink) << '\n';
    out << "[gauss_markov]\nmemory = " << format_double(spec.gm_memory) << '\n';
    out << "speed_sigma = " << format_double(spec.gm_speed_sigma) << '\n';
    out << "direction_sigma = " << format_double(spec.gm_direction_sigma) << '\n';
    return out.str();
}

std::vector<Cell> enumerate_cells(const SweepSpec& spec) {
    std::vector<Cell> cells;
    for (std::size_t s = 0; s < speed_count(spec); ++s) {
        for (std::size_t p = 0; p < pause_count(spec); ++p) {
            for (ProtocolKind kind : spec.protocols) {
                if (kind == ProtocolKind::SFR) {
                    cells.push_back({s, p, kind, std::nullopt});
                } else if (!spec.upper_threshold_sweep.empty()) {
                    for (double u : spec.upper_threshold_sweep) cells.push_back({s, p, kind, u});
                } else {
                    cells.push_back({s, p, kind, per_class(spec.upper_threshold, s)});
                }
            }
        }
    }
    return cells;
}

ProtocolConfig protocol_config(const SweepSpec& spec, const Cell& cell) {
    switch (cell.protocol) {
        case ProtocolKind::SFR: return SfrConfig{per_class(spec.sfr_period, cell.speed_index)};
        case ProtocolKind::DVM:
            return DvmConfig{spec.dvm_target_error, spec.dvm_t_min, cell.upper_threshold.value_or(10.0)};
        case ProtocolKind::MADRD:
            return MadrdConfig{spec.madrd_divergence_threshold, spec.madrd_t_min, cell.upper_threshold.value_or(6.0),
                               spec.madrd_period_growth, spec.madrd_period_shrink};
    }
    throw ValidationError("unknown protocol");
}

// Seeds depend only on the repetition, so every speed class and pause time
// replays the same waypoint draws (common random numbers).
std::uint64_t mobility_seed(const SweepSpec& spec, int rep) {
    return derive_seed(derive_seed(spec.seed_base, kMobilityStream), static_cast<std::uint64_t>(rep));
}

std::uint64_t noise_seed(const SweepSpec& spec, int rep) {
    return derive_seed(derive_seed(spec.seed_base, kNoiseStream), static_cast<std::uint64_t>(rep));
}

std::shared_ptr<const MobilityTrace> build_trace(const SweepSpec& spec, std::size_t speed_index,
                                                 std::size_t pause_index, int rep) {
    return trace_for(spec, speed_index, pause_index, rep, nullptr);
}

unsigned default_workers() {
    if (const char* env = std::getenv("LOCSCHED_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

RunResult run_cell(const SweepSpec& spec, const Cell& cell, int rep) {
    spec.validate();
    return run_on_trace(spec, cell, rep, build_trace(spec, cell.speed_index, cell.pause_index, rep), true);
}

std::vector<RunRow> run_sweep(const SweepSpec& spec, const SweepOptions& options) {
    spec.validate();
    const auto cells = enumerate_cells(spec);
    std::vector<MobilityTrace> imported;
    if (spec.mobility == MobilityModel::Imported) imported = load_imported(spec);
    if (options.event_log_dir) std::filesystem::create_directories(*options.event_log_dir);

    // Cells sharing (speed, pause) are contiguous; one task per group and rep
    // builds the trace once and runs every protocol over it.
    struct Group {
        std::size_t first = 0;
        std::size_t last = 0;
    };
    std::vector<Group> groups;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (groups.empty() || cells[i].speed_index != cells[groups.back().first].speed_index ||
            cells[i].pause_index != cells[groups.back().first].pause_index)
            groups.push_back({i, i});
        groups.back().last = i;
    }

    const auto reps = static_cast<std::size_t>(spec.repetitions);
    std::vector<RunRow> rows(cells.size() * reps);
    const std::size_t tasks = groups.size() * reps;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t task = next++; task < tasks; task = next++) {
            try {
                const Group& g = groups[task / reps];
                const int rep = static_cast<int>(task % reps);
                const auto trace = trace_for(spec, cells[g.first].speed_index, cells[g.first].pause_index, rep,
                                             imported.empty() ? nullptr : &imported);
                for (std::size_t c = g.first; c <= g.last; ++c) {
                    const bool record = options.event_log_dir.has_value();
                    const RunResult result = run_on_trace(spec, cells[c], rep, trace, record);
                    const RunMetrics& m = result.metrics;
                    rows[c * reps + static_cast<std::size_t>(rep)] =
                        RunRow{cells[c],         rep,          mobility_seed(spec, rep), noise_seed(spec, rep),
                               trace->hash(),    m.localization_count, std::nullopt, m.mean_error,
                               m.max_error,      m.accuracy,   m.correction_count};
                    if (record)
                        write_file(*options.event_log_dir / event_log_name(spec, cells[c], rep),
                                   render_event_log(spec, cells[c], rep, trace->hash(), result));
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };

    const unsigned workers =
        std::max(1u, std::min<unsigned>(options.workers ? options.workers : default_workers(),
                                        static_cast<unsigned>(tasks)));
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 1; i < workers; ++i) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);

    for (const Group& g : groups) {
        const auto sfr = std::find_if(cells.begin() + static_cast<std::ptrdiff_t>(g.first),
                                      cells.begin() + static_cast<std::ptrdiff_t>(g.last) + 1,
                                      [](const Cell& c) { return c.protocol == ProtocolKind::SFR; });
        if (sfr == cells.begin() + static_cast<std::ptrdiff_t>(g.last) + 1) continue;
        const auto sfr_index = static_cast<std::size_t>(sfr - cells.begin());
        for (std::size_t r = 0; r < reps; ++r) {
            const double base = rows[sfr_index * reps + r].localization_count;
            for (std::size_t c = g.first; c <= g.last; ++c)
                rows[c * reps + r].ratio_to_sfr = rows[c * reps + r].localization_count / base;
        }
    }
    return rows;
}

Stat summarize_values(const std::vector<double>& values) {
    Stat s;
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

std::vector<SummaryRow> summarize(const SweepSpec& spec, const std::vector<RunRow>& rows) {
    std::vector<SummaryRow> out;
    std::size_t i = 0;
    while (i < rows.size()) {
        std::size_t j = i;
        auto same_cell = [&](const RunRow& a, const RunRow& b) {
            return a.cell.speed_index == b.cell.speed_index && a.cell.pause_index == b.cell.pause_index &&
                   a.cell.protocol == b.cell.protocol && a.cell.upper_threshold == b.cell.upper_threshold;
        };
        std::vector<double> count, ratio, err, acc, corr;
        bool ratio_complete = true;
        while (j < rows.size() && same_cell(rows[i], rows[j])) {
            count.push_back(rows[j].localization_count);
            err.push_back(rows[j].mean_error);
            acc.push_back(rows[j].accuracy);
            corr.push_back(rows[j].correction_count);
            if (rows[j].ratio_to_sfr) ratio.push_back(*rows[j].ratio_to_sfr);
            else ratio_complete = false;
            ++j;
        }
        const Cell& c = rows[i].cell;
        SummaryRow row;
        row.speed_class = speed_label(spec, c.speed_index);
        row.pause_time = pause_value(spec, c.pause_index);
        row.protocol = c.protocol;
        row.upper_threshold = c.upper_threshold;
        row.repetitions = static_cast<int>(j - i);
        row.localization_count = summarize_values(count);
        if (ratio_complete) row.ratio_to_sfr = summarize_values(ratio);
        row.mean_error = summarize_values(err);
        row.accuracy = summarize_values(acc);
        row.correction_count = summarize_values(corr);
        out.push_back(std::move(row));
        i = j;
    }
    return out;
}

std::string provenance_header(const SweepSpec& spec, std::string_view kind) {
    std::string out = std::string(kProvenanceTag) + std::string(kind) + "\n";
    std::istringstream lines(to_config_text(spec));
    std::string line;
    while (std::getline(lines, line)) out += "# " + line + "\n";
    return out;
}

std::string render_runs_csv(const SweepSpec& spec, const std::vector<RunRow>& rows) {
    std::string out = provenance_header(spec, "runs");
    out += "speed_class,pause_time,protocol,upper_threshold,rep,mobility_seed,noise_seed,trace_hash,"
           "localization_count,ratio_to_sfr,mean_error,max_error,accuracy,correction_count\n";
    for (const auto& r : rows) {
        out += speed_label(spec, r.cell.speed_index) + ',' + format_double(pause_value(spec, r.cell.pause_index)) +
               ',' + std::string(to_string(r.cell.protocol)) + ',' + optional_number(r.cell.upper_threshold) + ',' +
               std::to_string(r.rep) + ',' + std::to_string(r.mobility_seed) + ',' + std::to_string(r.noise_seed) +
               ',' + hex64(r.trace_hash) + ',' + std::to_string(r.localization_count) + ',' +
               optional_number(r.ratio_to_sfr) + ',' + format_double(r.mean_error) + ',' +
               format_double(r.max_error) + ',' + format_double(r.accuracy) + ',' +
               std::to_string(r.correction_count) + '\n';
    }
    return out;
}

std::string render_summary_csv(const SweepSpec& spec, const std::vector<SummaryRow>& rows) {
    std::string out = provenance_header(spec, "summary");
    out += "speed_class,pause_time,protocol,upper_threshold,repetitions,localization_count,localization_count_std,"
           "ratio_to_sfr,ratio_to_sfr_std,mean_error,mean_error_std,accuracy,accuracy_std,correction_count,"
           "correction_count_std\n";
    auto stat = [](const Stat& s) { return format_double(s.mean) + ',' + format_double(s.stddev); };
    for (const auto& r : rows) {
        out += r.speed_class + ',' + format_double(r.pause_time) + ',' + std::string(to_string(r.protocol)) + ',' +
               optional_number(r.upper_threshold) + ',' + std::to_string(r.repetitions) + ',' +
               stat(r.localization_count) + ',' + (r.ratio_to_sfr ? stat(*r.ratio_to_sfr) : std::string(",")) +
               ',' + stat(r.mean_error) + ',' + stat(r.accuracy) + ',' + stat(r.correction_count) + '\n';
    }
    return out;
}

std::string event_log_name(const SweepSpec& spec, const Cell& cell, int rep) {
    std::string name = speed_label(spec, cell.speed_index);
    std::replace(name.begin(), name.end(), ':', '-');
    name += "_p" + format_double(pause_value(spec, cell.pause_index)) + "_" + std::string(to_string(cell.protocol));
    if (cell.upper_threshold) name += "_u" + format_double(*cell.upper_threshold);
    return name + "_r" + std::to_string(rep) + ".csv";
}

std::string render_event_log(const SweepSpec& spec, const Cell& cell, int rep, std::uint64_t trace_hash,
                             const RunResult& result) {
    std::string out = provenance_header(spec, "events");
    out += "# [run]\n";
    out += "# speed_index = " + std::to_string(cell.speed_index) + "\n";
    out += "# pause_index = " + std::to_string(cell.pause_index) + "\n";
    out += "# protocol = " + std::string(to_string(cell.protocol)) + "\n";
    if (cell.upper_threshold) out += "# upper_threshold = " + format_double(*cell.upper_threshold) + "\n";
    out += "# rep = " + std::to_string(rep) + "\n";
    out += "# mobility_seed = " + std::to_string(mobility_seed(spec, rep)) + "\n";
    out += "# noise_seed = " + std::to_string(noise_seed(spec, rep)) + "\n";
    out += "# trace_hash = " + hex64(trace_hash) + "\n";
    std::ostringstream body;
    write_event_log(body, result.events);
    return out + body.str();
}

std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
    std::vector<SummaryRow> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line.rfind("speed_class,pause_time,protocol,upper_threshold,repetitions,", 0) != 0)
                throw ParseError(line_no, "not a summary CSV header");
            header_seen = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 15) throw ParseError(line_no, "expected 15 fields, got " + std::to_string(f.size()));
        auto num = [&](std::size_t i) {
            double v = 0.0;
            if (!parse_double(f[i], v)) throw ParseError(line_no, "bad number in column " + std::to_string(i + 1));
            return v;
        };
        auto stat = [&](std::size_t i) { return Stat{num(i), num(i + 1)}; };
        SummaryRow r;
        r.speed_class = f[0];
        r.pause_time = num(1);
        r.protocol = parse_protocol_kind(f[2]);
        if (!f[3].empty()) r.upper_threshold = num(3);
        r.repetitions = static_cast<int>(num(4));
        r.localization_count = stat(5);
        if (!f[7].empty()) r.ratio_to_sfr = stat(7);
        r.mean_error = stat(9);
        r.accuracy = stat(11);
        r.correction_count = stat(13);
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw ParseError(line_no, "missing summary CSV header");
    return rows;
}

Provenance read_provenance(std::string_view file_text) {
    std::istringstream in{std::string(file_text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind(kProvenanceTag, 0) != 0)
        throw ValidationError("file has no locsched provenance header");
    Provenance p;
    p.kind = trim(std::string_view(line).substr(kProvenanceTag.size()));
    std::string config;
    std::map<std::string, std::string> run;
    bool in_run = false;
    while (std::getline(in, line) && line.rfind("# ", 0) == 0) {
        const std::string body = line.substr(2);
        if (body == "[run]") {
            in_run = true;
            continue;
        }
        if (in_run) {
            const auto eq = body.find('=');
            if (eq != std::string::npos) run[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
        } else {
            config += body + "\n";
        }
    }
    p.spec = parse_sweep_spec(config);
    if (p.kind == "events") {
        auto get = [&](const char* key) {
            const auto it = run.find(key);
            if (it == run.end()) throw ValidationError(std::string("provenance: missing run.") + key);
            return it->second;
        };
        Cell cell;
        cell.speed_index = static_cast<std::size_t>(to_number("run.speed_index", get("speed_index")));
        cell.pause_index = static_cast<std::size_t>(to_number("run.pause_index", get("pause_index")));
        cell.protocol = parse_protocol_kind(get("protocol"));
        if (run.count("upper_threshold")) cell.upper_threshold = to_number("run.upper_threshold", run["upper_threshold"]);
        p.cell = cell;
        p.rep = static_cast<int>(to_number("run.rep", get("rep")));
        p.trace_hash = parse_hex64(get("trace_hash"));
    } else if (p.kind != "runs" && p.kind != "summary") {
        throw ValidationError("provenance: unknown output kind '" + p.kind + "'");
    }
    return p;
}

std::string regenerate(std::string_view file_text) {
    const Provenance p = read_provenance(file_text);
    if (p.kind == "events") {
        p.spec.validate();
        const auto trace = build_trace(p.spec, p.cell->speed_index, p.cell->pause_index, p.rep);
        const auto result = run_on_trace(p.spec, *p.cell, p.rep, trace, true);
        return render_event_log(p.spec, *p.cell, p.rep, trace->hash(), result);
    }
    const auto rows = run_sweep(p.spec);
    if (p.kind == "runs") return render_runs_csv(p.spec, rows);
    return render_summary_csv(p.spec, summarize(p.spec, rows));
}

}  // namespace locsched
