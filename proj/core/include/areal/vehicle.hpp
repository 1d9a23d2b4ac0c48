#pragma once

#include <string>

#include "areal/errors.hpp"

namespace areal {

/// One vehicle class: physical dimensions plus the observed speed range.
/// Dimensions in meters, speeds in m/s.
struct VehicleCategory {
  std::string name;
  double length = 0.0;          // m
  double width = 0.0;           // m
  double v_max_observed = 0.0;  // m/s
  double v_min_observed = 0.0;  // m/s

  void validate() const {
    if (length <= 0.0 || width <= 0.0)
      throw DomainError("vehicle category '" + name + "': length and width must be positive");
    if (v_min_observed < 0.0 || v_max_observed < v_min_observed)
      throw DomainError("vehicle category '" + name + "': require v_max >= v_min >= 0");
  }
};

/// Projected (plan-view) area of one vehicle of this category, m^2.
inline double projected_area(const VehicleCategory& c) { return c.length * c.width; }

/// One vehicle crossing a point detector: arrival time, dimensions and the
/// speed held while crossing.
struct DetectorPassage {
  double t = 0.0;       // s, arrival at the detector
  double length = 0.0;  // m
  double width = 0.0;   // m
  double speed = 0.0;   // m/s while crossing; must be > 0 for dwell times

  double area() const { return length * width; }

  /// Time the detector of length d is covered: (L + d) / v.
  double dwell_time(double detector_length) const {
    if (speed <= 0.0) throw DomainError("detector passage with non-positive speed");
    return (length + detector_length) / speed;
  }
};

}  // namespace areal
