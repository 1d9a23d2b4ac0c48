#include "areal/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace areal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double model_speed_or_nan(const FdParams& params, double k) {
  try {
    return speed_at(params, k);
  } catch (const DomainError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

double sse_speed(const FdParams& params, std::span<const Observation> obs) {
  double sse = 0.0;
  for (const Observation& o : obs) {
    const double v = model_speed_or_nan(params, o.k_a);
    if (std::isnan(v)) return kInf;
    const double r = o.v - v;
    sse += r * r;
  }
  return sse;
}

struct Bounds {
  std::vector<double> lo, hi;
};

// Nelder-Mead over a box; out-of-bounds vertices score +inf. Deterministic
// for a given start simplex.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> start, const Bounds& bounds,
                                int max_iterations, double* best_value) {
  const std::size_t n = start.size();
  auto feasible = [&](const std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i)
      if (x[i] < bounds.lo[i] || x[i] > bounds.hi[i]) return false;
    return true;
  };
  auto eval = [&](const std::vector<double>& x) { return feasible(x) ? f(x) : kInf; };

  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) {
    const double span = bounds.hi[i] - bounds.lo[i];
    double step = 0.05 * span;
    if (simplex[i + 1][i] + step > bounds.hi[i]) step = -step;
    simplex[i + 1][i] += step;
  }
  std::vector<double> value(n + 1);
  for (std::size_t i = 0; i <= n; ++i) value[i] = eval(simplex[i]);

  for (int iter = 0; iter < max_iterations; ++iter) {
    std::vector<std::size_t> order(n + 1);
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return value[a] < value[b];
    });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[n - 1];

    double spread = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double span = std::max(bounds.hi[i] - bounds.lo[i], 1e-300);
      spread = std::max(spread, std::abs(simplex[best][i] - simplex[worst][i]) / span);
    }
    if (spread < 1e-12 && std::isfinite(value[best])) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d];
    }
    for (std::size_t d = 0; d < n; ++d) centroid[d] /= double(n);

    auto blend = [&](double coeff) {
      std::vector<double> x(n);
      for (std::size_t d = 0; d < n; ++d)
        x[d] = centroid[d] + coeff * (centroid[d] - simplex[worst][d]);
      return x;
    };

    const std::vector<double> reflected = blend(1.0);
    const double fr = eval(reflected);
    if (fr < value[order[0]]) {
      const std::vector<double> expanded = blend(2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        value[worst] = fe;
      } else {
        simplex[worst] = reflected;
        value[worst] = fr;
      }
    } else if (fr < value[second_worst]) {
      simplex[worst] = reflected;
      value[worst] = fr;
    } else {
      const std::vector<double> contracted = blend(fr < value[worst] ? 0.5 : -0.5);
      const double fc = eval(contracted);
      if (fc < std::min(fr, value[worst])) {
        simplex[worst] = contracted;
        value[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d)
            simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
          value[i] = eval(simplex[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (value[i] < value[best]) best = i;
  if (best_value) *best_value = value[best];
  return simplex[best];
}

struct DataStats {
  double v_max_obs = 0.0;
  double k_at_max_flow = 0.0;
  double v_at_max_flow = 0.0;
};

DataStats data_stats(std::span<const Observation> obs) {
  DataStats s;
  double best_q = -kInf;
  for (const Observation& o : obs) {
    s.v_max_obs = std::max(s.v_max_obs, o.v);
    const double q = o.k_a * o.v;
    if (q > best_q) {
      best_q = q;
      s.k_at_max_flow = o.k_a;
      s.v_at_max_flow = o.v;
    }
  }
  return s;
}

// Least-squares scale for v ~ c * phi(k) with c clamped to [lo, hi].
double linear_scale(std::span<const Observation> obs,
                    const std::function<double(double)>& phi, double lo, double hi) {
  double num = 0.0, den = 0.0;
  for (const Observation& o : obs) {
    const double p = phi(o.k_a);
    num += o.v * p;
    den += p * p;
  }
  const double c = den > 0.0 ? num / den : lo;
  return std::clamp(c, lo, hi);
}

struct TwoRegimeFit {
  double sse = kInf;
  double v_max = 0.0, v_crit = 0.0, k_crit = 0.0, omega = 0.0;
};

// Profile fit of the Smulders (or Daganzo, with the free branch flat) form
// over one candidate breakpoint: both sub-fits are closed-form.
TwoRegimeFit two_regime_at(std::span<const Observation> obs, double k_crit, double k_jam,
                           bool flat_free_branch, double v_lo, double v_hi) {
  double sk = 0.0, sv = 0.0, skk = 0.0, skv = 0.0;
  double sg = 0.0, sgv = 0.0;
  std::size_t n_free = 0, n_cong = 0;
  for (const Observation& o : obs) {
    if (o.k_a <= k_crit) {
      sk += o.k_a;
      sv += o.v;
      skk += o.k_a * o.k_a;
      skv += o.k_a * o.v;
      ++n_free;
    } else {
      const double g = k_jam / o.k_a - 1.0;
      sg += g * g;
      sgv += g * o.v;
      ++n_cong;
    }
  }
  TwoRegimeFit fit;
  if (n_free < 2 || n_cong < 2) return fit;
  fit.k_crit = k_crit;

  if (flat_free_branch) {
    fit.v_max = std::clamp(sv / double(n_free), v_lo, v_hi);
    fit.v_crit = fit.v_max;
  } else {
    const double denom = double(n_free) * skk - sk * sk;
    double slope;
    double intercept;
    if (denom > 0.0) {
      slope = (double(n_free) * skv - sk * sv) / denom;
      intercept = (sv - slope * sk) / double(n_free);
    } else {
      slope = 0.0;
      intercept = sv / double(n_free);
    }
    intercept = std::clamp(intercept, v_lo, v_hi);
    // Re-solve the slope with the clamped intercept; speeds must not rise
    // with density.
    slope = skk > 0.0 ? (skv - intercept * sk) / skk : 0.0;
    slope = std::min(slope, 0.0);
    fit.v_max = intercept;
    fit.v_crit = intercept + slope * k_crit;
    if (fit.v_crit <= 0.0 || fit.v_crit >= fit.v_max) return fit;
  }

  fit.omega = sg > 0.0 ? std::max(sgv / sg, 1e-6) : 1e-6;

  double sse = 0.0;
  for (const Observation& o : obs) {
    double v;
    if (o.k_a <= k_crit) {
      v = fit.v_max - (fit.v_max - fit.v_crit) * o.k_a / k_crit;
    } else {
      v = fit.omega * (k_jam / o.k_a - 1.0);
    }
    const double r = o.v - v;
    sse += r * r;
  }
  fit.sse = sse;
  return fit;
}

std::vector<double> breakpoint_candidates(std::span<const Observation> obs, double k_jam) {
  std::vector<double> ks;
  ks.reserve(obs.size());
  for (const Observation& o : obs)
    if (o.k_a > 0.02 * k_jam && o.k_a < 0.9 * k_jam) ks.push_back(o.k_a);
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  if (ks.size() > 120) {
    std::vector<double> thinned;
    const double stride = double(ks.size()) / 120.0;
    for (double i = 0.0; i < double(ks.size()); i += stride)
      thinned.push_back(ks[std::size_t(i)]);
    ks = std::move(thinned);
  }
  return ks;
}

FdParams params_from_vector(FdFamily family, const std::vector<double>& x, double k_jam) {
  FdParams p;
  p.family = family;
  p.k_jam = k_jam;
  switch (family) {
    case FdFamily::underwood:
      p.v_max = x[0];
      p.k_crit = x[1];
      p.k_jam = 0.0;  // unbounded family
      break;
    case FdFamily::del_castillo:
      p.v_max = x[0];
      p.omega = x[1];
      break;
    case FdFamily::daganzo:
      p.v_max = x[0];
      p.k_crit = x[1];
      p.omega = x[2];
      break;
    case FdFamily::smulders:
      p.v_max = x[0];
      p.v_crit = x[1];
      p.k_crit = x[2];
      p.omega = x[3];
      break;
    default:
      break;
  }
  return p;
}

}  // namespace

FitReport evaluate_fit(const FdParams& params, std::span<const Observation> observations) {
  FitReport report;
  double sse_v = 0.0, sse_q = 0.0;
  double sum_v = 0.0, sum_q = 0.0;
  const double n = double(observations.size());
  for (const Observation& o : observations) {
    sum_v += o.v;
    sum_q += o.k_a * o.v;
  }
  const double mean_v = sum_v / n;
  const double mean_q = sum_q / n;
  double sst_v = 0.0, sst_q = 0.0;
  for (const Observation& o : observations) {
    const double v_model = model_speed_or_nan(params, o.k_a);
    const double v_hat = std::isnan(v_model) ? 0.0 : v_model;
    const double q_obs = o.k_a * o.v;
    const double q_hat = o.k_a * v_hat;
    sse_v += (o.v - v_hat) * (o.v - v_hat);
    sse_q += (q_obs - q_hat) * (q_obs - q_hat);
    sst_v += (o.v - mean_v) * (o.v - mean_v);
    sst_q += (q_obs - mean_q) * (q_obs - mean_q);
  }
  report.rmse_speed = std::sqrt(sse_v / n);
  report.rmse_flow = std::sqrt(sse_q / n);
  report.r2_speed = sst_v > 0.0 ? 1.0 - sse_v / sst_v : 0.0;
  report.r2_flow = sst_q > 0.0 ? 1.0 - sse_q / sst_q : 0.0;
  return report;
}

CalibrationResult calibrate(FdFamily family, std::span<const Observation> observations,
                            const CalibrationOptions& options) {
  if (observations.size() < 10)
    throw CalibrationError("calibrate: need at least 10 observations", std::nullopt);
  for (const Observation& o : observations) {
    if (!std::isfinite(o.k_a) || !std::isfinite(o.v) || o.k_a < 0.0 || o.v < 0.0)
      throw CalibrationError("calibrate: observations must be finite and non-negative",
                             std::nullopt);
    if (o.k_a > options.k_jam)
      throw CalibrationError("calibrate: observation density above the fixed k_jam",
                             std::nullopt);
  }

  const double k_jam = options.k_jam;
  const DataStats stats = data_stats(observations);
  const double v_lo = stats.v_max_obs;
  const double v_hi = 1.5 * stats.v_max_obs;

  FdParams params;
  params.family = family;
  params.k_jam = k_jam;

  // Closed-form families.
  if (family == FdFamily::greenshields) {
    params.v_max = linear_scale(observations,
                                [&](double k) { return 1.0 - k / k_jam; }, v_lo, v_hi);
    return {params, evaluate_fit(params, observations)};
  }
  if (family == FdFamily::greenberg) {
    for (const Observation& o : observations)
      if (o.k_a <= 0.0)
        throw CalibrationError("greenberg: zero-density observation", std::nullopt);
    params.v_crit = linear_scale(observations,
                                 [&](double k) { return std::log(k_jam / k); }, 1e-6, v_hi);
    return {params, evaluate_fit(params, observations)};
  }

  // Profile start for the breakpoint families.
  std::vector<double> start;
  Bounds bounds;
  switch (family) {
    case FdFamily::underwood: {
      double best_sse = kInf, best_kc = std::max(stats.k_at_max_flow, 0.05 * k_jam);
      double best_v = v_lo;
      for (const double kc : breakpoint_candidates(observations, k_jam)) {
        const double v = linear_scale(observations,
                                      [&](double k) { return std::exp(-k / kc); }, v_lo, v_hi);
        FdParams trial = params_from_vector(family, {v, kc}, k_jam);
        const double sse = sse_speed(trial, observations);
        if (sse < best_sse) {
          best_sse = sse;
          best_kc = kc;
          best_v = v;
        }
      }
      start = {best_v, best_kc};
      bounds.lo = {v_lo, 1e-3 * k_jam};
      bounds.hi = {v_hi, 2.0 * k_jam};
      break;
    }
    case FdFamily::del_castillo: {
      const double omega0 = std::clamp(
          wave_speed_congested(std::max(stats.v_at_max_flow, 0.1 * v_lo),
                               std::max(stats.k_at_max_flow, 0.05 * k_jam), k_jam),
          1e-3, v_hi);
      start = {v_lo, omega0};
      bounds.lo = {v_lo, 1e-4};
      bounds.hi = {v_hi, v_hi};
      break;
    }
    case FdFamily::daganzo:
    case FdFamily::smulders: {
      const bool flat = family == FdFamily::daganzo;
      TwoRegimeFit best;
      for (const double kc : breakpoint_candidates(observations, k_jam)) {
        const TwoRegimeFit fit = two_regime_at(observations, kc, k_jam, flat, v_lo, v_hi);
        if (fit.sse < best.sse) best = fit;
      }
      if (!std::isfinite(best.sse))
        throw CalibrationError(
            "calibrate: observations do not span both regimes of the two-regime family",
            std::nullopt);
      if (flat) {
        start = {best.v_max, best.k_crit, best.omega};
        bounds.lo = {v_lo, 1e-3 * k_jam, 1e-4};
        bounds.hi = {v_hi, 0.999 * k_jam, v_hi};
      } else {
        start = {best.v_max, best.v_crit, best.k_crit, best.omega};
        bounds.lo = {v_lo, 1e-3, 1e-3 * k_jam, 1e-4};
        bounds.hi = {v_hi, v_hi, 0.999 * k_jam, v_hi};
      }
      break;
    }
    default:
      throw CalibrationError("calibrate: unsupported family", std::nullopt);
  }

  auto objective = [&](const std::vector<double>& x) {
    const FdParams trial = params_from_vector(family, x, k_jam);
    if (family == FdFamily::smulders && trial.v_crit >= trial.v_max) return kInf;
    try {
      trial.validate();
    } catch (const DomainError&) {
      return kInf;
    }
    return sse_speed(trial, observations);
  };

  std::mt19937 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double best_value = kInf;
  std::vector<double> best_x = start;
  for (int s = 0; s < std::max(options.starts, 1); ++s) {
    std::vector<double> x0 = start;
    if (s > 0) {
      for (std::size_t d = 0; d < x0.size(); ++d) {
        const double span = bounds.hi[d] - bounds.lo[d];
        const double jitter = (unit(rng) - 0.5) * 0.6 * span;
        x0[d] = std::clamp(x0[d] + jitter, bounds.lo[d] + 1e-12 * span,
                           bounds.hi[d] - 1e-12 * span);
      }
    }
    double value = kInf;
    std::vector<double> x = nelder_mead(objective, x0, bounds, options.max_iterations, &value);
    if (value < best_value) {
      best_value = value;
      best_x = x;
    }
  }

  if (!std::isfinite(best_value))
    throw CalibrationError("calibrate: optimizer found no feasible parameters", std::nullopt);

  params = params_from_vector(family, best_x, k_jam);
  return {params, evaluate_fit(params, observations)};
}

}  // namespace areal
