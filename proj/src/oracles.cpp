#include "locsched/oracles.hpp"

#include <cmath>
#include <numbers>

#include "locsched/errors.hpp"

namespace locsched::oracles {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ValidationError(what);
}

// Angles within this distance of 0 or pi are treated as collinear.
constexpr double kCollinear = 1e-12;

}  // namespace

void TurnScenario::validate() const {
    require(x >= 0.0, "turn scenario: x must be non-negative");
    require(theta >= 0.0 && theta < 2.0 * std::numbers::pi, "turn scenario: theta must lie in [0, 2pi)");
    require(v > 0.0, "turn scenario: v must be positive");
    require(t_sfr > 0.0 && x <= v * t_sfr, "turn scenario: turn must fall inside the SFR interval");
}

void PauseScenario::validate() const {
    require(d >= 0.0, "pause scenario: d must be non-negative");
    require(v > 0.0, "pause scenario: v must be positive");
}

double e_sfr_turn(const TurnScenario& s, double n) {
    require(n >= 0.0, "e_sfr_turn: n must be non-negative");
    require(s.x >= 0.0, "e_sfr_turn: x must be non-negative");
    const double sin_t = std::sin(s.theta);
    const double cos_t = std::cos(s.theta);
    if (n == 0.0) return s.x;
    if (std::abs(sin_t) < kCollinear) return cos_t > 0.0 ? s.x + n : std::abs(s.x - n);
    const double alpha = std::atan2(n * sin_t, s.x + n * cos_t);
    return std::abs(n * sin_t / std::sin(alpha));
}

double e_madrd_turn(double theta, double n) {
    require(n >= 0.0, "e_madrd_turn: n must be non-negative");
    return std::abs(2.0 * n * std::sin(theta / 2.0));
}

double e_sfr_pause(const PauseScenario& s, double travel) {
    s.validate();
    require(travel >= 0.0, "e_sfr_pause: travel must be non-negative");
    return std::min(travel, s.d);
}

double e_madrd_pause(const PauseScenario& s, double t_since_pause) {
    s.validate();
    require(t_since_pause >= 0.0, "e_madrd_pause: time must be non-negative");
    return s.v * t_since_pause;
}

ProtocolKind crossover_angle_check(double theta, double x, double n) {
    const TurnScenario s{x, theta, 1.0, x + n + 1.0};
    return e_madrd_turn(theta, n) <= e_sfr_turn(s, n) ? ProtocolKind::MADRD : ProtocolKind::SFR;
}

}  // namespace locsched::oracles
