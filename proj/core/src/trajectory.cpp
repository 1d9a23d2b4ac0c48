#include "areal/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace areal {

void Trajectory::validate() const {
  if (samples.size() < 2)
    throw DomainError("trajectory '" + vehicle_id + "': needs at least 2 samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t))
      throw DomainError("trajectory '" + vehicle_id + "': timestamps must be strictly increasing");
    if (samples[i].x < samples[i - 1].x)
      throw DomainError("trajectory '" + vehicle_id + "': positions must be non-decreasing");
  }
  category.validate();
}

double Trajectory::position(double t) const {
  if (t < t_begin() || t > t_end())
    throw DomainError("trajectory '" + vehicle_id + "': time outside sampled range");
  auto it = std::lower_bound(samples.begin(), samples.end(), t,
                             [](const TrajectorySample& s, double tv) { return s.t < tv; });
  if (it == samples.begin()) return it->x;
  const TrajectorySample& b = *it;
  const TrajectorySample& a = *(it - 1);
  const double u = (t - a.t) / (b.t - a.t);
  return a.x + u * (b.x - a.x);
}

double Trajectory::speed(double t) const {
  if (t < t_begin() || t > t_end())
    throw DomainError("trajectory '" + vehicle_id + "': time outside sampled range");
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double tv, const TrajectorySample& s) { return tv < s.t; });
  if (it == samples.end()) --it;
  if (it == samples.begin()) ++it;
  const TrajectorySample& a = *(it - 1);
  const TrajectorySample& b = *it;
  return (b.x - a.x) / (b.t - a.t);
}

ClippedPath clip_to_region(const Trajectory& traj, const RegionVolume& region) {
  region.validate();
  ClippedPath out;
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const TrajectorySample& a = traj.samples[i - 1];
    const TrajectorySample& b = traj.samples[i];
    // Time window where the segment lies inside [t0, t1].
    double lo = std::max(a.t, region.t0);
    double hi = std::min(b.t, region.t1);
    if (lo >= hi) continue;
    const double v = (b.x - a.x) / (b.t - a.t);
    if (v > 0.0) {
      // Times at which the segment crosses the spatial bounds.
      const double t_at_x0 = a.t + (region.x0 - a.x) / v;
      const double t_at_x1 = a.t + (region.x1 - a.x) / v;
      lo = std::max(lo, t_at_x0);
      hi = std::min(hi, t_at_x1);
    } else {
      // Stationary segment: inside iff x within bounds.
      if (a.x < region.x0 || a.x > region.x1) continue;
    }
    if (lo >= hi) continue;
    out.present = true;
    out.duration += hi - lo;
    out.distance += v * (hi - lo);
  }
  return out;
}

std::optional<Crossing> crossing_at(const Trajectory& traj, double position) {
  for (std::size_t i = 1; i < traj.samples.size(); ++i) {
    const TrajectorySample& a = traj.samples[i - 1];
    const TrajectorySample& b = traj.samples[i];
    if (a.x <= position && position < b.x) {
      const double v = (b.x - a.x) / (b.t - a.t);
      return Crossing{a.t + (position - a.x) / v, v};
    }
  }
  return std::nullopt;
}

}  // namespace areal
