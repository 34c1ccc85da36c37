#include "locsched/mobility.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "locsched/errors.hpp"
#include "locsched/numfmt.hpp"

namespace locsched {

namespace {

Position lerp(Position a, Position b, double f) { return {std::lerp(a.x, b.x, f), std::lerp(a.y, b.y, f)}; }

void require(bool ok, const char* what) {
    if (!ok) throw ValidationError(what);
}

void validate_area(const Area& area) {
    require(area.width > 0.0 && area.height > 0.0, "area dimensions must be positive");
}

// Mirrors a coordinate back into [0, limit]; returns true if it reflected.
bool reflect(double& v, double limit) {
    bool flipped = false;
    while (v < 0.0 || v > limit) {
        v = v < 0.0 ? -v : 2.0 * limit - v;
        flipped = !flipped;
    }
    return flipped;
}

}  // namespace

MobilityTrace::MobilityTrace(int node_id, double dt, std::vector<TraceSample> samples)
    : node_id_(node_id), dt_(dt), samples_(std::move(samples)) {
    require(dt_ > 0.0, "trace dt must be positive");
    require(!samples_.empty(), "trace must contain at least one sample");
    for (std::size_t i = 1; i < samples_.size(); ++i)
        require(samples_[i].t > samples_[i - 1].t, "trace times must be strictly increasing");
}

Position MobilityTrace::position_at(double t) const {
    const double tol = 1e-9 * std::max(1.0, end_time());
    if (!(t >= 0.0) || t > end_time() + tol) throw ValidationError("position_at: time outside trace range");
    const auto k = std::min(static_cast<std::size_t>(std::floor(t / dt_)), samples_.size() - 1);
    if (k + 1 >= samples_.size()) return samples_.back().pos;
    const auto& a = samples_[k];
    const auto& b = samples_[k + 1];
    const double f = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
    return lerp(a.pos, b.pos, f);
}

std::uint64_t MobilityTrace::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](double v) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(dt_);
    for (const auto& s : samples_) {
        mix(s.t);
        mix(s.pos.x);
        mix(s.pos.y);
    }
    return h;
}

void RandomWaypointConfig::validate() const {
    validate_area(area);
    require(v_min > 0.0 && v_min <= v_max, "speed range must satisfy 0 < v_min <= v_max");
    require(pause_time >= 0.0, "pause_time must be non-negative");
    require(dt > 0.0, "dt must be positive");
    require(duration > 0.0, "duration must be positive");
}

void GaussMarkovConfig::validate() const {
    validate_area(area);
    require(mean_speed >= 0.0, "mean_speed must be non-negative");
    require(memory >= 0.0 && memory <= 1.0, "memory must lie in [0, 1]");
    require(speed_sigma >= 0.0 && direction_sigma >= 0.0, "sigmas must be non-negative");
    require(dt > 0.0, "dt must be positive");
    require(duration > 0.0, "duration must be positive");
}

std::size_t sample_count(double duration, double dt) {
    return static_cast<std::size_t>(std::ceil(duration / dt - 1e-9)) + 1;
}

MobilityTrace resample_waypoints(int node_id, const std::vector<Waypoint>& waypoints, double dt, double duration) {
    require(!waypoints.empty(), "at least one waypoint required");
    require(dt > 0.0, "dt must be positive");
    const std::size_t n = duration > 0.0 ? sample_count(duration, dt) : 1;
    std::vector<TraceSample> samples;
    samples.reserve(n);
    std::size_t w = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * dt;
        while (w + 1 < waypoints.size() && waypoints[w + 1].t <= t) ++w;
        Position p;
        if (t <= waypoints[w].t || w + 1 == waypoints.size()) {
            p = waypoints[w].pos;
        } else {
            const auto& a = waypoints[w];
            const auto& b = waypoints[w + 1];
            p = lerp(a.pos, b.pos, (t - a.t) / (b.t - a.t));
        }
        samples.push_back({t, p});
    }
    return MobilityTrace(node_id, dt, std::move(samples));
}

std::vector<Waypoint> rwp_waypoints(const RandomWaypointConfig& cfg, RandomStream& rng) {
    cfg.validate();
    auto random_point = [&] {
        return Position{rng.uniform(0.0, cfg.area.width), rng.uniform(0.0, cfg.area.height)};
    };
    std::vector<Waypoint> out;
    Position here = random_point();
    double t = 0.0;
    out.push_back({t, here});
    while (t < cfg.duration) {
        const Position dest = random_point();
        const double speed = rng.uniform(cfg.v_min, cfg.v_max);
        const double travel = distance(here, dest) / speed;
        if (travel <= 0.0) continue;
        t += travel;
        out.push_back({t, dest});
        here = dest;
        if (cfg.pause_time > 0.0) {
            t += cfg.pause_time;
            out.push_back({t, dest});
        }
    }
    return out;
}

MobilityTrace generate_rwp(const RandomWaypointConfig& cfg, RandomStream& rng, int node_id) {
    return resample_waypoints(node_id, rwp_waypoints(cfg, rng), cfg.dt, cfg.duration);
}

MobilityTrace generate_gauss_markov(const GaussMarkovConfig& cfg, RandomStream& rng, int node_id) {
    cfg.validate();
    const double m = cfg.memory;
    const double innovation = std::sqrt(1.0 - m * m);
    Position p{rng.uniform(0.0, cfg.area.width), rng.uniform(0.0, cfg.area.height)};
    double mean_dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
    double dir = mean_dir;
    double speed = cfg.mean_speed;

    const std::size_t n = sample_count(cfg.duration, cfg.dt);
    std::vector<TraceSample> samples;
    samples.reserve(n);
    samples.push_back({0.0, p});
    for (std::size_t k = 1; k < n; ++k) {
        p.x += speed * std::cos(dir) * cfg.dt;
        p.y += speed * std::sin(dir) * cfg.dt;
        if (reflect(p.x, cfg.area.width)) {
            dir = std::numbers::pi - dir;
            mean_dir = std::numbers::pi - mean_dir;
        }
        if (reflect(p.y, cfg.area.height)) {
            dir = -dir;
            mean_dir = -mean_dir;
        }
        samples.push_back({static_cast<double>(k) * cfg.dt, p});

        speed = m * speed + (1.0 - m) * cfg.mean_speed + innovation * rng.normal(0.0, cfg.speed_sigma);
        speed = std::max(speed, 0.0);
        dir = m * dir + (1.0 - m) * mean_dir + innovation * rng.normal(0.0, cfg.direction_sigma);
    }
    return MobilityTrace(node_id, cfg.dt, std::move(samples));
}

std::vector<std::vector<Waypoint>> parse_waypoints(std::string_view source) {
    std::vector<std::vector<Waypoint>> nodes;
    std::size_t line_no = 0;
    std::istringstream in{std::string(source)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;

        std::vector<double> values;
        std::istringstream fields(line);
        std::string tok;
        while (fields >> tok) {
            double v = 0.0;
            if (!parse_double(tok, v) || !std::isfinite(v)) throw ParseError(line_no, "not a finite number: '" + tok + "'");
            values.push_back(v);
        }
        if (values.size() % 3 != 0) throw ParseError(line_no, "expected repeating 't x y' triples");

        std::vector<Waypoint> wps;
        for (std::size_t i = 0; i < values.size(); i += 3) {
            Waypoint wp{values[i], {values[i + 1], values[i + 2]}};
            if (wp.t < 0.0) throw ValidationError("line " + std::to_string(line_no) + ": negative waypoint time");
            if (!wps.empty() && !(wp.t > wps.back().t))
                throw ValidationError("line " + std::to_string(line_no) + ": waypoint times must be strictly increasing");
            wps.push_back(wp);
        }
        nodes.push_back(std::move(wps));
    }
    return nodes;
}

std::vector<MobilityTrace> import_trace(std::string_view source, const Area& area, double dt) {
    validate_area(area);
    require(dt > 0.0, "dt must be positive");
    auto nodes = parse_waypoints(source);
    std::vector<MobilityTrace> traces;
    traces.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (const auto& wp : nodes[i])
            if (!area.contains(wp.pos))
                throw ValidationError("node " + std::to_string(i) + ": waypoint outside simulation area");
        traces.push_back(resample_waypoints(static_cast<int>(i), nodes[i], dt, nodes[i].back().t));
    }
    return traces;
}

std::string export_trace(const std::vector<MobilityTrace>& traces) {
    std::string out;
    for (const auto& trace : traces) {
        bool first = true;
        for (const auto& s : trace.samples()) {
            if (!first) out += ' ';
            first = false;
            out += format_double(s.t) + ' ' + format_double(s.pos.x) + ' ' + format_double(s.pos.y);
        }
        out += '\n';
    }
    return out;
}

}  // namespace locsched
