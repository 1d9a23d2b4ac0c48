#include "areal/waves.hpp"

#include <cmath>

#include "areal/errors.hpp"

namespace areal {

namespace {

void require_two_regime(const FdParams& params) {
  if (params.family != FdFamily::smulders && params.family != FdFamily::daganzo)
    throw DomainError("wave analytics: only the two-regime families (smulders, daganzo) "
                      "have an implemented flow derivative");
}

// Daganzo is Smulders with a flat free branch (v_crit == v_max).
double free_branch_v_crit(const FdParams& params) {
  return params.family == FdFamily::daganzo ? params.v_max : params.v_crit;
}

void check_density(const FdParams& params, double k) {
  if (k < 0.0 || k > params.k_jam)
    throw DomainError("wave analytics: density outside [0, k_jam]");
}

}  // namespace

double shock_speed(const FdParams& params, double k_left, double k_right) {
  check_density(params, k_left);
  check_density(params, k_right);
  if (k_left == k_right)
    throw DomainError("shock_speed: equal densities define no shock");
  return (flow_at(params, k_left) - flow_at(params, k_right)) / (k_left - k_right);
}

double characteristic_speed(const FdParams& params, double k_a) {
  require_two_regime(params);
  check_density(params, k_a);
  if (k_a <= params.k_crit) {
    const double v_crit = free_branch_v_crit(params);
    return params.v_max - 2.0 * k_a * (params.v_max - v_crit) / params.k_crit;
  }
  return -params.omega;
}

WaveFan solve_riemann(const FdParams& params, double k_left, double k_right) {
  require_two_regime(params);
  check_density(params, k_left);
  check_density(params, k_right);

  WaveFan fan;
  fan.k_left = k_left;
  fan.k_right = k_right;
  if (k_left == k_right) return fan;

  if (k_left < k_right) {
    Wave shock;
    shock.kind = Wave::Kind::shock;
    shock.k_left = k_left;
    shock.k_right = k_right;
    shock.speed = shock_speed(params, k_left, k_right);
    fan.waves.push_back(shock);
    return fan;
  }

  auto rarefaction = [&](double kl, double kr) {
    Wave w;
    w.kind = Wave::Kind::rarefaction;
    w.k_left = kl;
    w.k_right = kr;
    w.head = characteristic_speed(params, kl);
    w.tail = characteristic_speed(params, kr);
    return w;
  };

  const double k_crit = params.k_crit;
  if (k_left > k_crit && k_right < k_crit) {
    // Transcritical: a contact along the linear congested branch, then a
    // genuine fan on the free branch. The constant k_crit wedge between
    // them absorbs the derivative jump at the kink.
    fan.waves.push_back(rarefaction(k_left, k_crit));
    fan.waves.push_back(rarefaction(k_crit, k_right));
  } else {
    fan.waves.push_back(rarefaction(k_left, k_right));
  }
  return fan;
}

double riemann_density(const FdParams& params, double k_left, double k_right, double xi) {
  require_two_regime(params);
  check_density(params, k_left);
  check_density(params, k_right);

  if (k_left == k_right) return k_left;
  if (k_left < k_right) {
    const double s = shock_speed(params, k_left, k_right);
    return xi < s ? k_left : k_right;
  }

  const double head = characteristic_speed(params, k_left);
  const double tail = characteristic_speed(params, k_right);
  if (xi <= head) return k_left;
  if (xi >= tail) return k_right;

  // Inside the fan. The congested branch is linearly degenerate, so every
  // congested density collapses onto the single slope -omega; any interior
  // slope therefore lies in the free-branch fan or the k_crit wedge.
  const double v_crit = free_branch_v_crit(params);
  const double spread = 2.0 * (params.v_max - v_crit) / params.k_crit;
  if (spread == 0.0) return params.k_crit;  // flat free branch (Daganzo)
  const double c_at_crit = params.v_max - 2.0 * (params.v_max - v_crit);
  if (xi <= c_at_crit) return params.k_crit;
  return (params.v_max - xi) / spread;
}

}  // namespace areal
