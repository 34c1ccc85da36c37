#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace locsched {

// 2-D coordinate in meters.
struct Position {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Position operator+(Position p, Vec2 v) { return {p.x + v.x, p.y + v.y}; }
inline Vec2 operator-(Position a, Position b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 v, double s) { return {v.x * s, v.y * s}; }
inline Vec2 operator/(Vec2 v, double s) { return {v.x / s, v.y / s}; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Throws std::invalid_argument if either coordinate is NaN or infinite.
Position make_position(double x, double y);

// Seeded pseudo-random stream. Single owner; never shared across runs.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal(double mean, double sigma) {
        if (sigma == 0.0) return mean;
        return std::normal_distribution<double>(mean, sigma)(engine_);
    }

private:
    std::mt19937_64 engine_;
};

/// Mixes a base seed with a key into an independent substream seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key);

struct NoiseModel {
    double max_magnitude = 0.5;
};

struct LocalizationSample {
    double t = 0.0;
    Position measured;
};

double distance(Position a, Position b);

/// Noisy fix of `true_pos` at time `t`: displacement magnitude uniform in
/// [0, max_magnitude], direction uniform in [0, 2pi).
LocalizationSample localize(double t, Position true_pos, const NoiseModel& noise, RandomStream& rng);

inline double absolute_error(Position reported, Position actual) { return distance(reported, actual); }

/// Fraction of errors <= dist_tolerance. Throws on an empty sequence or a
/// non-positive tolerance.
double threshold_accuracy(std::span<const double> errors, double dist_tolerance);

}  // namespace locsched
