#pragma once

#include <optional>
#include <string>
#include <vector>

#include "areal/errors.hpp"
#include "areal/vehicle.hpp"

namespace areal {

struct TrajectorySample {
  double t = 0.0;  // s
  double x = 0.0;  // m
};

/// Time-stamped longitudinal positions of one vehicle. Samples must be
/// strictly increasing in t and non-decreasing in x (one-directional flow);
/// positions between samples are linearly interpolated.
struct Trajectory {
  std::string vehicle_id;
  VehicleCategory category;
  std::vector<TrajectorySample> samples;

  void validate() const;

  double t_begin() const { return samples.front().t; }
  double t_end() const { return samples.back().t; }

  /// Interpolated position at time t; t must lie within [t_begin, t_end].
  double position(double t) const;

  /// Instantaneous speed at time t (slope of the active segment), m/s.
  double speed(double t) const;
};

/// A time-space-width measurement volume: x in [x0, x1], t in [t0, t1],
/// full road width w.
struct RegionVolume {
  double x0 = 0.0, x1 = 0.0;  // m, x1 > x0
  double t0 = 0.0, t1 = 0.0;  // s, t1 > t0
  double width = 0.0;         // m

  double dx() const { return x1 - x0; }
  double dt() const { return t1 - t0; }
  double volume() const { return dx() * dt() * width; }

  void validate() const {
    if (!(x1 > x0) || !(t1 > t0) || !(width > 0.0))
      throw DomainError("region volume: all extents must be strictly positive");
  }
};

/// The part of a trajectory inside a region: clipped travel distance and
/// time. A vehicle that never enters has present == false.
struct ClippedPath {
  bool present = false;
  double distance = 0.0;  // m inside the region
  double duration = 0.0;  // s inside the region
};

ClippedPath clip_to_region(const Trajectory& traj, const RegionVolume& region);

/// First crossing of the screenline x = position: crossing time and the
/// interpolated speed there. Empty when the trajectory never crosses.
struct Crossing {
  double t = 0.0;      // s
  double speed = 0.0;  // m/s
};
std::optional<Crossing> crossing_at(const Trajectory& traj, double position);

}  // namespace areal
