#include "areal/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "areal/errors.hpp"

namespace areal {

double CumulativeCurve::value_at(double t) const {
  if (points.empty() || t < points.front().t) return 0.0;
  auto it = std::upper_bound(points.begin(), points.end(), t,
                             [](double tv, const Point& p) { return tv < p.t; });
  return (it - 1)->value;
}

CumulativeCurve cumulative_area(std::span<const DetectorPassage> passages) {
  CumulativeCurve curve;
  curve.kind = CumulativeCurve::Kind::area;
  double total = 0.0;
  double last_t = -std::numeric_limits<double>::infinity();
  for (const DetectorPassage& p : passages) {
    if (p.t < last_t) throw DomainError("cumulative_area: passages must be sorted by time");
    if (p.area() < 0.0) throw DomainError("cumulative_area: negative vehicle area");
    last_t = p.t;
    total += p.area();
    curve.points.push_back({p.t, total});
  }
  return curve;
}

CumulativeCurve cumulative_occupancy(std::span<const DetectorPassage> passages,
                                     double detector_length) {
  CumulativeCurve curve;
  curve.kind = CumulativeCurve::Kind::occupancy;
  double total = 0.0;
  double last_t = -std::numeric_limits<double>::infinity();
  for (const DetectorPassage& p : passages) {
    if (p.t < last_t) throw DomainError("cumulative_occupancy: passages must be sorted by time");
    last_t = p.t;
    total += p.dwell_time(detector_length);
    curve.points.push_back({p.t, total});
  }
  return curve;
}

TimeSeries resample(const CumulativeCurve& curve, double t0, double t1, double dt) {
  if (!(t1 > t0) || !(dt > 0.0)) throw DomainError("resample: need t1 > t0 and dt > 0");
  TimeSeries series;
  series.t_start = t0;
  series.dt = dt;
  const std::size_t n = std::size_t(std::floor((t1 - t0) / dt + 1e-9)) + 1;
  series.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) series.values.push_back(curve.value_at(t0 + dt * double(i)));
  return series;
}

ObliqueCurve oblique_transform(const TimeSeries& series, double t_s, double t_e) {
  if (!(t_e > t_s)) throw DomainError("oblique_transform: degenerate interval");
  const double span = series.dt * double(series.size() - 1);
  if (t_s < series.t_start - 1e-9 || t_e > series.t_start + span + 1e-9)
    throw DomainError("oblique_transform: interval outside the curve domain");
  auto index_of = [&](double t) {
    const auto i = std::size_t(std::llround((t - series.t_start) / series.dt));
    return std::min(i, series.size() - 1);
  };
  const double rate =
      (series.values[index_of(t_e)] - series.values[index_of(t_s)]) / (t_e - t_s);
  return oblique_transform_with_rate(series, rate);
}

ObliqueCurve oblique_transform_with_rate(const TimeSeries& series, double rate) {
  ObliqueCurve out;
  out.rate = rate;
  out.series.t_start = series.t_start;
  out.series.dt = series.dt;
  out.series.values.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i)
    out.series.values.push_back(series.values[i] - rate * series.time_at(i));
  return out;
}

namespace {

struct Segment {
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive
};

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double max_abs_residual = 0.0;
};

LineFit fit_line(const TimeSeries& s, std::size_t lo, std::size_t hi) {
  const double n = double(hi - lo + 1);
  double st = 0.0, sv = 0.0, stt = 0.0, stv = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double t = s.time_at(i);
    st += t;
    sv += s.values[i];
    stt += t * t;
    stv += t * s.values[i];
  }
  LineFit fit;
  const double denom = n * stt - st * st;
  if (denom == 0.0) {
    fit.intercept = sv / n;
  } else {
    fit.slope = (n * stv - st * sv) / denom;
    fit.intercept = (sv - fit.slope * st) / n;
  }
  for (std::size_t i = lo; i <= hi; ++i) {
    const double r = std::abs(s.values[i] - (fit.intercept + fit.slope * s.time_at(i)));
    fit.max_abs_residual = std::max(fit.max_abs_residual, r);
  }
  return fit;
}

double value_range(const TimeSeries& s, std::size_t lo, std::size_t hi) {
  auto [mn, mx] = std::minmax_element(s.values.begin() + long(lo), s.values.begin() + long(hi) + 1);
  return *mx - *mn;
}

// Absolute floor keeping exactly-linear (near-zero-range) windows valid in
// the presence of rounding noise.
double residual_threshold(const TimeSeries& s, std::size_t lo, std::size_t hi,
                          double max_residual) {
  const double global = value_range(s, 0, s.size() - 1);
  return max_residual * value_range(s, lo, hi) + 1e-9 * global + 1e-12;
}

bool window_is_linear(const TimeSeries& s, std::size_t lo, std::size_t hi, double max_residual) {
  if (hi <= lo) return true;
  return fit_line(s, lo, hi).max_abs_residual <= residual_threshold(s, lo, hi, max_residual);
}

// Recursive max-deviation-from-chord splitting; emits breakpoint indices.
void split_at_kinks(const TimeSeries& s, std::size_t lo, std::size_t hi, double max_residual,
                    std::vector<std::size_t>& breaks) {
  if (hi - lo < 2) return;
  const double t_lo = s.time_at(lo);
  const double t_hi = s.time_at(hi);
  const double v_lo = s.values[lo];
  const double v_hi = s.values[hi];
  const double slope = (v_hi - v_lo) / (t_hi - t_lo);
  double worst = 0.0;
  std::size_t worst_i = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    const double d = std::abs(s.values[i] - (v_lo + slope * (s.time_at(i) - t_lo)));
    if (d > worst) {
      worst = d;
      worst_i = i;
    }
  }
  if (worst > residual_threshold(s, lo, hi, max_residual)) {
    breaks.push_back(worst_i);
    split_at_kinks(s, lo, worst_i, max_residual, breaks);
    split_at_kinks(s, worst_i, hi, max_residual, breaks);
  }
}

std::vector<Segment> linear_segments(const TimeSeries& s, double max_residual) {
  std::vector<std::size_t> breaks;
  split_at_kinks(s, 0, s.size() - 1, max_residual, breaks);
  breaks.push_back(0);
  breaks.push_back(s.size() - 1);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<Segment> segments;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    Segment seg{breaks[b], breaks[b + 1]};
    if (!window_is_linear(s, seg.lo, seg.hi, max_residual)) continue;
    // Extend over following segments while the union still fits one line.
    while (!segments.empty() && segments.back().hi == seg.lo &&
           window_is_linear(s, segments.back().lo, seg.hi, max_residual)) {
      seg.lo = segments.back().lo;
      segments.pop_back();
    }
    segments.push_back(seg);
  }
  return segments;
}

}  // namespace

std::vector<SteadyWindow> detect_steady_windows(const ObliqueCurve& oblique_area,
                                                const ObliqueCurve& oblique_occupancy,
                                                const SteadyDetectionParams& params) {
  const TimeSeries& a = oblique_area.series;
  const TimeSeries& o = oblique_occupancy.series;
  if (a.size() != o.size() || a.dt != o.dt || a.t_start != o.t_start)
    throw DomainError("detect_steady_windows: curves must share one time grid");
  if (a.size() < 3) return {};

  const std::vector<Segment> seg_a = linear_segments(a, params.max_residual);
  const std::vector<Segment> seg_o = linear_segments(o, params.max_residual);

  std::vector<SteadyWindow> windows;
  std::size_t ia = 0, io = 0;
  while (ia < seg_a.size() && io < seg_o.size()) {
    const std::size_t lo = std::max(seg_a[ia].lo, seg_o[io].lo);
    const std::size_t hi = std::min(seg_a[ia].hi, seg_o[io].hi);
    if (hi > lo) {
      const double duration = a.dt * double(hi - lo);
      if (duration >= params.min_duration && window_is_linear(a, lo, hi, params.max_residual) &&
          window_is_linear(o, lo, hi, params.max_residual)) {
        SteadyWindow w;
        w.t_start = a.time_at(lo);
        w.t_end = a.time_at(hi);
        w.a0 = (a.values[hi] - a.values[lo]) / duration + oblique_area.rate;
        w.b0 = (o.values[hi] - o.values[lo]) / duration + oblique_occupancy.rate;
        windows.push_back(w);
      }
    }
    if (seg_a[ia].hi < seg_o[io].hi) ++ia;
    else ++io;
  }
  return windows;
}

std::vector<SteadyWindow> steady_windows_from_passages(
    std::span<const DetectorPassage> passages, double detector_length, double road_width,
    double grid_dt, const SteadyDetectionParams& params) {
  if (road_width <= 0.0) throw DomainError("steady pipeline: road width must be positive");
  if (passages.size() < 2) return {};
  const CumulativeCurve area_curve = cumulative_area(passages);
  const CumulativeCurve occ_curve = cumulative_occupancy(passages, detector_length);
  const double t0 = passages.front().t;
  const double t1 = passages.back().t;
  if (!(t1 > t0)) return {};
  const TimeSeries area_series = resample(area_curve, t0, t1, grid_dt);
  const TimeSeries occ_series = resample(occ_curve, t0, t1, grid_dt);
  const double t_end = area_series.time_at(area_series.size() - 1);
  const ObliqueCurve oblique_a = oblique_transform(area_series, t0, t_end);
  const ObliqueCurve oblique_o = oblique_transform(occ_series, t0, t_end);

  std::vector<SteadyWindow> windows = detect_steady_windows(oblique_a, oblique_o, params);
  for (SteadyWindow& w : windows) {
    double area_sum = 0.0, inv_speed_sum = 0.0;
    std::size_t n = 0;
    for (const DetectorPassage& p : passages) {
      if (p.t < w.t_start || p.t > w.t_end) continue;
      area_sum += p.area();
      inv_speed_sum += 1.0 / p.speed;
      ++n;
    }
    if (n == 0) continue;
    w.state.q_a = area_sum / ((w.t_end - w.t_start) * road_width);
    w.state.v_a = double(n) / inv_speed_sum;
    w.state.k_a = w.state.q_a / w.state.v_a;
  }
  return windows;
}

}  // namespace areal
