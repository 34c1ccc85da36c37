#include "locsched/geometry.hpp"

#include <algorithm>
#include <numbers>

namespace locsched {

Position make_position(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) throw std::invalid_argument("position coordinates must be finite");
    return {x, y};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t key) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (key + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double distance(Position a, Position b) { return norm(a - b); }

LocalizationSample localize(double t, Position true_pos, const NoiseModel& noise, RandomStream& rng) {
    if (noise.max_magnitude <= 0.0) return {t, true_pos};
    const double magnitude = rng.uniform(0.0, noise.max_magnitude);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return {t, {true_pos.x + magnitude * std::cos(angle), true_pos.y + magnitude * std::sin(angle)}};
}

double threshold_accuracy(std::span<const double> errors, double dist_tolerance) {
    if (errors.empty()) throw std::invalid_argument("threshold_accuracy: empty error sequence");
    if (!(dist_tolerance > 0.0)) throw std::invalid_argument("threshold_accuracy: dist_tolerance must be positive");
    const auto within = std::count_if(errors.begin(), errors.end(), [&](double e) { return e <= dist_tolerance; });
    return static_cast<double>(within) / static_cast<double>(errors.size());
}

}  // namespace locsched
