#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "locsched/geometry.hpp"

namespace locsched {

struct Area {
    double width = 300.0;
    double height = 300.0;

    bool contains(Position p) const { return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height; }
};

struct TraceSample {
    double t = 0.0;
    Position pos;
};

// Ground-truth path of one node, sampled every dt seconds starting at t = 0.
// Immutable once built; share freely across protocol runs.
class MobilityTrace {
public:
    MobilityTrace(int node_id, double dt, std::vector<TraceSample> samples);

    int node_id() const { return node_id_; }
    double dt() const { return dt_; }
    double end_time() const { return samples_.back().t; }
    std::size_t size() const { return samples_.size(); }
    const std::vector<TraceSample>& samples() const { return samples_; }
    const TraceSample& operator[](std::size_t i) const { return samples_[i]; }

    /// Linear interpolation between the bracketing samples; throws
    /// ValidationError outside [0, end_time].
    Position position_at(double t) const;

    /// FNV-1a over the raw sample bytes; identifies a trace in provenance headers.
    std::uint64_t hash() const;

private:
    int node_id_;
    double dt_;
    std::vector<TraceSample> samples_;
};

struct RandomWaypointConfig {
    Area area;
    double v_min = 4.0;
    double v_max = 5.0;
    double pause_time = 0.0;
    double duration = 900.0;
    double dt = 0.1;

    void validate() const;
};

struct GaussMarkovConfig {
    Area area;
    double mean_speed = 4.5;
    double memory = 0.75;
    double speed_sigma = 0.5;
    double direction_sigma = 0.4;
    double duration = 900.0;
    double dt = 0.1;

    void validate() const;
};

struct Waypoint {
    double t = 0.0;
    Position pos;
};

/// Number of grid samples covering [0, duration]: ceil(duration/dt) + 1.
std::size_t sample_count(double duration, double dt);

/// Piecewise-linear resampling of waypoints on the dt grid over
/// [0, last waypoint time]; the first waypoint is held before its time.
MobilityTrace resample_waypoints(int node_id, const std::vector<Waypoint>& waypoints, double dt, double duration);

MobilityTrace generate_rwp(const RandomWaypointConfig& cfg, RandomStream& rng, int node_id = 0);

/// Leg endpoints of a random-waypoint run; generate_rwp resamples these.
std::vector<Waypoint> rwp_waypoints(const RandomWaypointConfig& cfg, RandomStream& rng);

MobilityTrace generate_gauss_markov(const GaussMarkovConfig& cfg, RandomStream& rng, int node_id = 0);

/// Parses the waypoint text format: one node per line, repeating `t x y`
/// triples with strictly increasing t. Blank lines and `#` comments are skipped.
std::vector<std::vector<Waypoint>> parse_waypoints(std::string_view source);

std::vector<MobilityTrace> import_trace(std::string_view source, const Area& area, double dt);

/// Emits one line of `t x y` triples per trace, readable by import_trace.
std::string export_trace(const std::vector<MobilityTrace>& traces);

}  // namespace locsched
