#pragma once

#include <span>
#include <vector>

#include "areal/trajectory.hpp"
#include "areal/vehicle.hpp"

namespace areal {

/// The (q_a, k_a, v_a) triple in SI units: q_a in m^2/(s*m), k_a
/// dimensionless, v_a in m/s. Invariant: v_a = q_a / k_a whenever k_a > 0.
struct ArealState {
  double q_a = 0.0;
  double k_a = 0.0;
  double v_a = 0.0;
};

/// Areal flow over a region: mean projected area of the vehicles touching
/// the region times the total distance they travel inside it, divided by
/// the region volume. A vehicle only partially inside contributes its
/// clipped distance but its full projected area to the mean. Empty regions
/// yield zero.
double areal_flow(std::span<const Trajectory> trajectories, const RegionVolume& region);

/// Areal density over a region: mean projected area times total time spent
/// inside, divided by the region volume. Empty regions yield zero.
double areal_density(std::span<const Trajectory> trajectories, const RegionVolume& region);

/// v_a = q_a / k_a. Throws DomainError when k_a <= 0 and q_a > 0; the
/// all-empty state (0, 0) maps to speed 0.
double areal_speed(double q_a, double k_a);

/// Flow, density and speed of one region in a single pass. The speed is
/// total distance / total time, so vehicle areas cancel.
ArealState areal_state(std::span<const Trajectory> trajectories, const RegionVolume& region);

enum class EdieMode { distance_window, time_window };

struct EdieOptions {
  // Largest tolerated ratio of the triangular boundary correction to the
  // full box volume T*X*W; beyond it the window formulas are meaningless.
  double max_boundary_fraction = 0.5;
};

/// Windowed estimates of the areal variables for a platoon crossing a
/// distance window X (mode distance_window) or tracked over a period T
/// (mode time_window). The region volume is the bounding box minus the
/// triangular cutouts spanned by the first and last vehicle trajectories.
/// Only vehicles traversing the full window contribute.
ArealState edie_region_estimates(std::span<const Trajectory> trajectories,
                                 const RegionVolume& region, EdieMode mode,
                                 const EdieOptions& options = {});

// Scaling between conventional and areal variables: the factor is the mean
// projected area over the road width. Exact inverse pairs.
double ka_from_k(double k, double mean_area, double road_width);   // veh/m -> k_a
double k_from_ka(double k_a, double mean_area, double road_width); // k_a -> veh/m
double qa_from_q(double q, double mean_area, double road_width);   // veh/s -> q_a
double q_from_qa(double q_a, double mean_area, double road_width); // q_a -> veh/s

/// Point-detector occupancy over an interval of length T: fraction of time
/// the detector of length d is covered, sum of (L_i + d)/v_i over T.
double occupancy(std::span<const DetectorPassage> passages, double detector_length,
                 double interval);

/// Closed form for a homogeneous stream: O_c = k_a (w/B)(1 + d/L).
double occupancy_homogeneous(double k_a, double road_width, double length, double width,
                             double detector_length);

/// Area occupancy over an interval: sum of (L_i + d) B_i / v_i over T*w.
double area_occupancy(std::span<const DetectorPassage> passages, double detector_length,
                      double road_width, double interval);

/// Closed form for a homogeneous stream: ao = k_a (1 + d/L); exceeds k_a
/// for any d > 0.
double area_occupancy_homogeneous(double k_a, double length, double detector_length);

}  // namespace areal
