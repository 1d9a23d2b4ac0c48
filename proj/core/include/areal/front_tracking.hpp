#pragma once

#include <string>
#include <vector>

#include "areal/errors.hpp"
#include "areal/waves.hpp"

namespace areal {

/// Piecewise-constant initial density on [domain_min, domain_max]:
/// densities[i] holds between breaks[i-1] and breaks[i].
struct PiecewiseInitialCondition {
  double domain_min = 0.0;
  double domain_max = 0.0;
  std::vector<double> breaks;     // interior breakpoints, strictly increasing
  std::vector<double> densities;  // breaks.size() + 1 values

  void validate(const FdParams& params) const;
};

struct FrontTrackingOptions {
  int n_fan = 32;                  // wavelets per rarefaction fan
  std::size_t max_interactions = 200000;
  double tie_tolerance = 1e-9;     // s, simultaneous-collision merge window
};

/// Thrown when the interaction cap trips; reports how far the solution got.
struct FrontTrackingError : ConvergenceError {
  FrontTrackingError(const std::string& what, double reached)
      : ConvergenceError(what), reached_time(reached) {}
  double reached_time = 0.0;
};

struct FrontEvent {
  double t = 0.0;
  double x = 0.0;
  std::string kind;  // "shock", "fan", "interaction"
  double k_left = 0.0;
  double k_right = 0.0;
  double speed = 0.0;
};

/// One straight piece of a tracked discontinuity: alive on [t_birth,
/// t_death), position x(t) = x_birth + speed * (t - t_birth).
struct FrontSegment {
  double t_birth = 0.0;
  double x_birth = 0.0;
  double speed = 0.0;
  double t_death = 0.0;
  double k_left = 0.0;
  double k_right = 0.0;
};

/// Front-tracking solution: piecewise-constant in x for every t up to the
/// horizon; density() samples it and integrate_density() integrates it
/// exactly (no quadrature error).
class MocSolution {
 public:
  MocSolution(double leftmost_density, double horizon, std::vector<FrontSegment> segments,
              std::vector<FrontEvent> events)
      : leftmost_(leftmost_density),
        horizon_(horizon),
        segments_(std::move(segments)),
        events_(std::move(events)) {}

  double density(double x, double t) const;
  double integrate_density(double t, double a, double b) const;

  double horizon() const { return horizon_; }
  const std::vector<FrontEvent>& events() const { return events_; }
  const std::vector<FrontSegment>& segments() const { return segments_; }

 private:
  struct ActiveFront {
    double x;
    double k_left;
    double k_right;
  };
  std::vector<ActiveFront> active_at(double t) const;

  double leftmost_;
  double horizon_;
  std::vector<FrontSegment> segments_;
  std::vector<FrontEvent> events_;
};

/// Exact (front-tracking) evolution of a piecewise-constant initial
/// condition: Riemann fans at every breakpoint, rarefactions discretized
/// into n_fan chord-speed wavelets, pairwise interactions re-solved in
/// chronological order. Requires a two-regime family with a continuous
/// flux (formula-consistent omega).
MocSolution moc_solve(const FdParams& params, const PiecewiseInitialCondition& init,
                      double horizon, const FrontTrackingOptions& options = {});

}  // namespace areal
