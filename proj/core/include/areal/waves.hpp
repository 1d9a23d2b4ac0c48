#pragma once

#include <vector>

#include "areal/fd.hpp"

namespace areal {

/// One constant traffic state under a given FD, SI units.
struct TrafficState {
  double k_a = 0.0;
};

/// One wave of a Riemann solution: a shock (single speed, Rankine-Hugoniot
/// chord slope) or a rarefaction spanning characteristic speeds head <=
/// tail. A degenerate rarefaction with head == tail is a contact (the
/// linear congested branch of the two-regime flow).
struct Wave {
  enum class Kind { shock, rarefaction };
  Kind kind = Kind::shock;
  double k_left = 0.0;
  double k_right = 0.0;
  double speed = 0.0;  // shock speed, m/s
  double head = 0.0;   // left edge speed of a fan, m/s
  double tail = 0.0;   // right edge speed of a fan, m/s
};

/// Ordered waves separating constant states, speeds non-decreasing left to
/// right.
struct WaveFan {
  double k_left = 0.0;
  double k_right = 0.0;
  std::vector<Wave> waves;
};

/// Rankine-Hugoniot chord slope (q_L - q_R)/(k_L - k_R), m/s. The states
/// must differ.
double shock_speed(const FdParams& params, double k_left, double k_right);

/// dq_a/dk_a of the two-regime families (Smulders, Daganzo): linear in the
/// free regime, the constant -omega in congestion. Other families are
/// rejected.
double characteristic_speed(const FdParams& params, double k_a);

/// Entropy solution of the Riemann problem for the concave two-regime flow:
/// a single shock when k_left < k_right, a rarefaction otherwise, split at
/// the k_crit kink into a congested contact plus a free-regime fan.
WaveFan solve_riemann(const FdParams& params, double k_left, double k_right);

/// Self-similar density of the exact Riemann solution at slope xi = x/t.
double riemann_density(const FdParams& params, double k_left, double k_right, double xi);

}  // namespace areal
