#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "areal/measures.hpp"
#include "areal/vehicle.hpp"

namespace areal {

/// Non-decreasing step curve of cumulative vehicle area (m^2) or cumulative
/// occupancy time (s) at a detector.
struct CumulativeCurve {
  enum class Kind { area, occupancy };
  struct Point {
    double t = 0.0;
    double value = 0.0;
  };
  Kind kind = Kind::area;
  std::vector<Point> points;

  /// Step-curve evaluation: value of the last point at or before t, zero
  /// before the first point.
  double value_at(double t) const;
};

/// Cumulative projected area of arriving vehicles. Events must be sorted
/// by time; negative areas are rejected.
CumulativeCurve cumulative_area(std::span<const DetectorPassage> passages);

/// Cumulative detector occupancy time, summing (L_i + d)/v_i per arrival.
CumulativeCurve cumulative_occupancy(std::span<const DetectorPassage> passages,
                                     double detector_length);

/// A curve sampled on a uniform time grid.
struct TimeSeries {
  double t_start = 0.0;
  double dt = 1.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double time_at(std::size_t i) const { return t_start + dt * double(i); }
};

TimeSeries resample(const CumulativeCurve& curve, double t0, double t1, double dt);

/// A cumulative curve minus its chord trend a0*t; slope changes of the
/// original appear as kinks around zero.
struct ObliqueCurve {
  TimeSeries series;
  double rate = 0.0;  // chord slope a0 (or b0) subtracted from the curve
};

/// Subtract the chord rate over [t_s, t_e]: rate = (y(t_e) - y(t_s)) /
/// (t_e - t_s). The output takes equal values at t_s and t_e.
ObliqueCurve oblique_transform(const TimeSeries& series, double t_s, double t_e);

/// Same transform with a caller-chosen rate (rate = 0 is the identity).
ObliqueCurve oblique_transform_with_rate(const TimeSeries& series, double rate);

struct SteadyDetectionParams {
  double min_duration = 30.0;   // s
  double max_residual = 0.02;   // fraction of the window's value range
};

/// A near-stationary period: both oblique curves linear over [t_start,
/// t_end]. a0/b0 are the mean arrival rates of the cumulative area and
/// occupancy curves over the window; state is filled by the passage-level
/// pipeline (zeroed when only curves are available).
struct SteadyWindow {
  double t_start = 0.0;
  double t_end = 0.0;
  double a0 = 0.0;  // m^2/s
  double b0 = 0.0;  // s/s
  ArealState state;
};

/// Maximal non-overlapping windows of length >= min_duration over which
/// BOTH oblique curves are linear: candidate breakpoints from recursive
/// max-deviation splitting, each window validated by an ordinary
/// least-squares fit whose max |residual| stays below max_residual times
/// the window's value range. Both curves must share one time grid.
std::vector<SteadyWindow> detect_steady_windows(const ObliqueCurve& oblique_area,
                                                const ObliqueCurve& oblique_occupancy,
                                                const SteadyDetectionParams& params = {});

/// Full pipeline at one detector: build both cumulative curves from the
/// passages, transform, detect, and annotate every window with the areal
/// state measured from the passages inside it (q_a = summed area over
/// T*w, v_a = harmonic mean crossing speed, k_a = q_a / v_a).
std::vector<SteadyWindow> steady_windows_from_passages(
    std::span<const DetectorPassage> passages, double detector_length, double road_width,
    double grid_dt = 1.0, const SteadyDetectionParams& params = {});

}  // namespace areal
