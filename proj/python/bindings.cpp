#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "locsched/engine.hpp"
#include "locsched/errors.hpp"
#include "locsched/experiments.hpp"
#include "locsched/oracles.hpp"

namespace py = pybind11;
using namespace locsched;

namespace {

std::shared_ptr<const MobilityTrace> share(const MobilityTrace& t) { return std::make_shared<const MobilityTrace>(t); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Localization scheduling simulator: SFR, DVM and MADRD over mobility traces.";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<Position>(m, "Position")
        .def(py::init([](double x, double y) { return make_position(x, y); }), py::arg("x"), py::arg("y"))
        .def_readonly("x", &Position::x)
        .def_readonly("y", &Position::y)
        .def("__eq__", [](const Position& a, const Position& b) { return a == b; })
        .def("__repr__", [](const Position& p) {
            return "Position(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
        });

    m.def("distance", &distance, py::arg("a"), py::arg("b"));
    m.def("absolute_error", &absolute_error, py::arg("reported"), py::arg("actual"));
    m.def(
        "threshold_accuracy",
        [](const std::vector<double>& errors, double tol) { return threshold_accuracy(errors, tol); },
        py::arg("errors"), py::arg("dist_tolerance"));
    m.def(
        "localize",
        [](double t, Position truth, double max_magnitude, std::uint64_t seed, int draws) {
            RandomStream rng(seed);
            std::vector<Position> out;
            for (int i = 0; i < draws; ++i) out.push_back(localize(t, truth, {max_magnitude}, rng).measured);
            return out;
        },
        "Noisy fixes of `truth` from a fresh stream seeded with `seed`.", py::arg("t"), py::arg("truth"),
        py::arg("max_magnitude") = 0.5, py::arg("seed") = 0, py::arg("draws") = 1);

    py::class_<Area>(m, "Area")
        .def(py::init<double, double>(), py::arg("width") = 300.0, py::arg("height") = 300.0)
        .def_readwrite("width", &Area::width)
        .def_readwrite("height", &Area::height);

    py::class_<MobilityTrace>(m, "MobilityTrace")
        .def_property_readonly("node_id", &MobilityTrace::node_id)
        .def_property_readonly("dt", &MobilityTrace::dt)
        .def_property_readonly("end_time", &MobilityTrace::end_time)
        .def("__len__", &MobilityTrace::size)
        .def("position_at", &MobilityTrace::position_at, py::arg("t"))
        .def("hash", &MobilityTrace::hash)
        .def("times", [](const MobilityTrace& t) {
            std::vector<double> out;
            for (const auto& s : t.samples()) out.push_back(s.t);
            return out;
        })
        .def("positions", [](const MobilityTrace& t) {
            std::vector<std::pair<double, double>> out;
            for (const auto& s : t.samples()) out.emplace_back(s.pos.x, s.pos.y);
            return out;
        });

    m.def(
        "generate_rwp",
        [](double v_min, double v_max, double pause_time, double duration, double dt, std::uint64_t seed, Area area) {
            RandomStream rng(seed);
            return generate_rwp({area, v_min, v_max, pause_time, duration, dt}, rng);
        },
        py::arg("v_min"), py::arg("v_max"), py::arg("pause_time") = 0.0, py::arg("duration") = 900.0,
        py::arg("dt") = 0.1, py::arg("seed") = 0, py::arg("area") = Area{});
    m.def(
        "generate_gauss_markov",
        [](double mean_speed, double memory, double speed_sigma, double direction_sigma, double duration, double dt,
           std::uint64_t seed, Area area) {
            RandomStream rng(seed);
            return generate_gauss_markov({area, mean_speed, memory, speed_sigma, direction_sigma, duration, dt}, rng);
        },
        py::arg("mean_speed"), py::arg("memory") = 0.75, py::arg("speed_sigma") = 0.5,
        py::arg("direction_sigma") = 0.4, py::arg("duration") = 900.0, py::arg("dt") = 0.1, py::arg("seed") = 0,
        py::arg("area") = Area{});
    m.def("import_trace", &import_trace, py::arg("source"), py::arg("area") = Area{}, py::arg("dt") = 0.1);
    m.def("export_trace", &export_trace, py::arg("traces"));

    py::class_<SfrConfig>(m, "SfrConfig")
        .def(py::init<double>(), py::arg("period") = 2.0)
        .def_readwrite("period", &SfrConfig::period);
    py::class_<DvmConfig>(m, "DvmConfig")
        .def(py::init<double, double, double>(), py::arg("target_error") = 5.0, py::arg("t_min") = 0.5,
             py::arg("t_max") = 10.0)
        .def_readwrite("target_error", &DvmConfig::target_error)
        .def_readwrite("t_min", &DvmConfig::t_min)
        .def_readwrite("t_max", &DvmConfig::t_max);
    py::class_<MadrdConfig>(m, "MadrdConfig")
        .def(py::init<double, double, double, double, double>(), py::arg("divergence_threshold") = 5.0,
             py::arg("t_min") = 0.5, py::arg("t_max") = 6.0, py::arg("period_growth") = 2.0,
             py::arg("period_shrink") = 0.5)
        .def_readwrite("divergence_threshold", &MadrdConfig::divergence_threshold)
        .def_readwrite("t_min", &MadrdConfig::t_min)
        .def_readwrite("t_max", &MadrdConfig::t_max)
        .def_readwrite("period_growth", &MadrdConfig::period_growth)
        .def_readwrite("period_shrink", &MadrdConfig::period_shrink);

    py::class_<RunMetrics>(m, "RunMetrics")
        .def_readonly("localization_count", &RunMetrics::localization_count)
        .def_readonly("accuracy", &RunMetrics::accuracy)
        .def_readonly("mean_error", &RunMetrics::mean_error)
        .def_readonly("max_error", &RunMetrics::max_error)
        .def_readonly("correction_count", &RunMetrics::correction_count)
        .def_readonly("uncorrected_mean_error", &RunMetrics::uncorrected_mean_error)
        .def_property_readonly("errors", [](const RunMetrics& rm) {
            std::vector<double> out;
            for (const auto& e : rm.error_series) out.push_back(e.error);
            return out;
        });

    m.def(
        "run",
        [](const MobilityTrace& trace, const ProtocolConfig& protocol, double noise, double dist_tolerance,
           std::uint64_t seed, bool backtracking) {
            return run({share(trace), protocol, {noise}, dist_tolerance, seed, backtracking, false}).metrics;
        },
        py::arg("trace"), py::arg("protocol"), py::arg("noise") = 0.5, py::arg("dist_tolerance") = 5.0,
        py::arg("seed") = 0, py::arg("backtracking") = false);
    m.def(
        "run_paired",
        [](const std::vector<MobilityTrace>& traces, const std::vector<ProtocolConfig>& protocols, double noise,
           double dist_tolerance, std::uint64_t seed) {
            std::vector<std::shared_ptr<const MobilityTrace>> shared;
            for (const auto& t : traces) shared.push_back(share(t));
            const auto result = run_paired(shared, protocols, {noise}, dist_tolerance, seed);
            return py::make_tuple(result.runs, result.ratio_to_sfr);
        },
        "Returns (runs[trace][protocol], ratio_to_sfr[trace][protocol]).", py::arg("traces"), py::arg("protocols"),
        py::arg("noise") = 0.5, py::arg("dist_tolerance") = 5.0, py::arg("seed") = 0);

    auto oracles = m.def_submodule("oracles", "Closed-form turn and pause errors");
    oracles.def(
        "e_sfr_turn", [](double theta, double x, double n) { return oracles::e_sfr_turn({x, theta, 1.0, x + n + 1.0}, n); },
        py::arg("theta"), py::arg("x"), py::arg("n"));
    oracles.def("e_madrd_turn", &oracles::e_madrd_turn, py::arg("theta"), py::arg("n"));
    oracles.def(
        "e_sfr_pause", [](double d, double v, double travel) { return oracles::e_sfr_pause({d, v}, travel); },
        py::arg("d"), py::arg("v"), py::arg("travel"));
    oracles.def(
        "e_madrd_pause", [](double d, double v, double t) { return oracles::e_madrd_pause({d, v}, t); },
        py::arg("d"), py::arg("v"), py::arg("t_since_pause"));
    oracles.def(
        "crossover", [](double theta, double x, double n) { return std::string(to_string(oracles::crossover_angle_check(theta, x, n))); },
        py::arg("theta"), py::arg("x"), py::arg("n"));

    m.def(
        "sweep_summary_csv",
        [](const std::string& config_text, unsigned workers) {
            const SweepSpec spec = parse_sweep_spec(config_text);
            py::gil_scoped_release release;
            const auto rows = run_sweep(spec, {workers, std::nullopt});
            return render_summary_csv(spec, summarize(spec, rows));
        },
        "Runs the sweep described by a config text and returns the summary CSV.", py::arg("config_text"),
        py::arg("workers") = 0);
    m.def("default_config", [] { return to_config_text(SweepSpec{}); });
}
