#pragma once

#include <optional>
#include <span>
#include <vector>

#include "areal/errors.hpp"
#include "areal/fd.hpp"

namespace areal {

/// One steady-state observation, SI units (k_a dimensionless, v in m/s).
struct Observation {
  double k_a = 0.0;
  double v = 0.0;
};

/// Goodness of fit in the speed-density and flow-density planes. The flow
/// residuals reuse the speed-plane parameters (no refit), so the q-k score
/// is typically the lower one.
struct FitReport {
  double r2_speed = 0.0;
  double rmse_speed = 0.0;  // m/s
  double r2_flow = 0.0;
  double rmse_flow = 0.0;  // m^2/(s*m)
};

struct CalibrationOptions {
  double k_jam = 1.0;       // fixed, dimensionless (1.0 = 1000 m^2/(km*m))
  unsigned seed = 42;       // jitter for the multi-start polish
  int starts = 8;           // simplex restarts (first one from the profile fit)
  int max_iterations = 4000;
};

struct CalibrationResult {
  FdParams params;
  FitReport report;
};

/// Thrown when the optimizer cannot produce a usable fit; carries the best
/// parameters found so far when any evaluation succeeded.
struct CalibrationError : ConvergenceError {
  CalibrationError(const std::string& what, std::optional<CalibrationResult> best_so_far)
      : ConvergenceError(what), best(std::move(best_so_far)) {}
  std::optional<CalibrationResult> best;
};

/// Least-squares fit of one family to (k_a, v) observations with k_jam held
/// fixed. Speeds drive the objective; v_max is bounded to [max observed v,
/// 1.5 * max observed v] and k_crit to (0, k_jam). Needs at least 10
/// observations, covering both regimes for the two-regime families.
CalibrationResult calibrate(FdFamily family, std::span<const Observation> observations,
                            const CalibrationOptions& options = {});

/// Fit metrics of arbitrary parameters against observations (also used to
/// re-score a calibrated model on fresh data).
FitReport evaluate_fit(const FdParams& params, std::span<const Observation> observations);

}  // namespace areal
