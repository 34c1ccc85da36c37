#pragma once

#include "locsched/protocols.hpp"

// Closed-form errors of SFR and MADRD for noise-free turn and pause scenarios.
namespace locsched::oracles {

// Node passes the last fix, travels `x` meters in a straight line, then
// deviates by `theta` radians. `n` is the arclength travelled after the turn.
struct TurnScenario {
    double x = 0.0;
    double theta = 0.0;
    double v = 1.0;
    double t_sfr = 1.0;

    void validate() const;
};

// Node moving at `v` stops `d` meters after the last fix.
struct PauseScenario {
    double d = 0.0;
    double v = 1.0;

    void validate() const;
};

/// Distance from the fix to the node, via the angle alpha the node subtends
/// with the original line of motion:
///   tan(alpha) = n sin(theta) / (x + n cos(theta)),  e = n sin(theta) / sin(alpha).
/// Where sin(theta) = 0 the ratio is 0/0 and the collinear limits apply:
/// x + n at theta = 0, |x - n| at theta = pi.
double e_sfr_turn(const TurnScenario& s, double n);

/// Chord between the predicted and actual positions after equal arclength n:
/// 2 n sin(theta / 2).
double e_madrd_turn(double theta, double n);

/// SFR error grows with distance travelled until the node stops at d.
double e_sfr_pause(const PauseScenario& s, double travel);

/// MADRD keeps extrapolating at v after the node stops.
double e_madrd_pause(const PauseScenario& s, double t_since_pause);

/// Protocol with the smaller analytic error at (theta, x, n); ties go to MADRD.
ProtocolKind crossover_angle_check(double theta, double x, double n);

}  // namespace locsched::oracles
