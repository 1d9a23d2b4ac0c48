#include "areal/measures.hpp"

#include <algorithm>
#include <cmath>

namespace areal {

namespace {

struct RegionTotals {
  double distance = 0.0;
  double duration = 0.0;
  double area_sum = 0.0;
  std::size_t contributing = 0;

  double mean_area() const { return contributing ? area_sum / double(contributing) : 0.0; }
};

RegionTotals accumulate(std::span<const Trajectory> trajectories, const RegionVolume& region) {
  region.validate();
  RegionTotals totals;
  for (const Trajectory& traj : trajectories) {
    const ClippedPath path = clip_to_region(traj, region);
    if (!path.present) continue;
    totals.distance += path.distance;
    totals.duration += path.duration;
    totals.area_sum += projected_area(traj.category);
    ++totals.contributing;
  }
  return totals;
}

}  // namespace

double areal_flow(std::span<const Trajectory> trajectories, const RegionVolume& region) {
  const RegionTotals totals = accumulate(trajectories, region);
  if (totals.contributing == 0) return 0.0;
  return totals.mean_area() * totals.distance / region.volume();
}

double areal_density(std::span<const Trajectory> trajectories, const RegionVolume& region) {
  const RegionTotals totals = accumulate(trajectories, region);
  if (totals.contributing == 0) return 0.0;
  return totals.mean_area() * totals.duration / region.volume();
}

double areal_speed(double q_a, double k_a) {
  if (k_a < 0.0) throw DomainError("areal_speed: negative density");
  if (k_a == 0.0) {
    if (q_a == 0.0) return 0.0;
    throw DomainError("areal_speed: zero density with nonzero flow");
  }
  return q_a / k_a;
}

ArealState areal_state(std::span<const Trajectory> trajectories, const RegionVolume& region) {
  const RegionTotals totals = accumulate(trajectories, region);
  ArealState state;
  if (totals.contributing == 0) return state;
  const double mean_area = totals.mean_area();
  state.q_a = mean_area * totals.distance / region.volume();
  state.k_a = mean_area * totals.duration / region.volume();
  state.v_a = totals.duration > 0.0 ? totals.distance / totals.duration : 0.0;
  return state;
}

ArealState edie_region_estimates(std::span<const Trajectory> trajectories,
                                 const RegionVolume& region, EdieMode mode,
                                 const EdieOptions& options) {
  region.validate();
  const double window_x = region.dx();
  const double window_t = region.dt();
  const double width = region.width;

  // Vehicles traversing the full window, with the first/last one supplying
  // the boundary speeds that carve the triangular cutouts off the box.
  double area_sum = 0.0;
  double total_distance = 0.0;
  double total_time = 0.0;
  std::size_t n = 0;
  double first_key = 0.0, last_key = 0.0;
  double v_first = 0.0, v_last = 0.0;

  for (const Trajectory& traj : trajectories) {
    if (mode == EdieMode::distance_window) {
      const auto enter = crossing_at(traj, region.x0);
      const auto exit = crossing_at(traj, region.x1);
      if (!enter || !exit) continue;
      if (enter->t < region.t0 || exit->t > region.t1) continue;
      const double dt = exit->t - enter->t;
      if (dt <= 0.0) throw DomainError("edie window: vehicle with non-positive transit time");
      const double v = window_x / dt;
      if (n == 0 || enter->t < first_key) { first_key = enter->t; v_first = v; }
      if (n == 0 || enter->t > last_key) { last_key = enter->t; v_last = v; }
      total_distance += window_x;
      total_time += dt;
    } else {
      if (traj.t_begin() > region.t0 || traj.t_end() < region.t1) continue;
      const double xa = traj.position(region.t0);
      const double xb = traj.position(region.t1);
      if (xa < region.x0 || xb > region.x1) continue;
      const double dx = xb - xa;
      const double v = dx / window_t;
      if (n == 0 || xa < first_key) { first_key = xa; v_first = v; }
      if (n == 0 || xa > last_key) { last_key = xa; v_last = v; }
      total_distance += dx;
      total_time += window_t;
    }
    area_sum += projected_area(traj.category);
    ++n;
  }

  if (n == 0) return {};

  if (v_first <= 0.0 || v_last <= 0.0)
    throw DomainError("edie window: boundary vehicle speed must be positive");

  const double box = window_t * window_x * width;
  double cutout;
  if (mode == EdieMode::distance_window) {
    cutout = window_x * window_x * width / 2.0 * (1.0 / v_first + 1.0 / v_last);
  } else {
    cutout = window_t * window_t * width / 2.0 * (v_first + v_last);
  }
  if (cutout > options.max_boundary_fraction * box)
    throw DomainError("edie window: boundary correction exceeds the configured fraction; shrink the window");

  const double vol = box - cutout;
  const double mean_area = area_sum / double(n);
  ArealState state;
  state.q_a = mean_area * total_distance / vol;
  state.k_a = mean_area * total_time / vol;
  state.v_a = total_distance / total_time;
  return state;
}

namespace {
void check_scaling(double mean_area, double road_width) {
  if (mean_area <= 0.0 || road_width <= 0.0)
    throw DomainError("areal conversion: mean area and road width must be positive");
}
}  // namespace

double ka_from_k(double k, double mean_area, double road_width) {
  check_scaling(mean_area, road_width);
  return mean_area / road_width * k;
}

double k_from_ka(double k_a, double mean_area, double road_width) {
  check_scaling(mean_area, road_width);
  return k_a * road_width / mean_area;
}

double qa_from_q(double q, double mean_area, double road_width) {
  check_scaling(mean_area, road_width);
  return mean_area / road_width * q;
}

double q_from_qa(double q_a, double mean_area, double road_width) {
  check_scaling(mean_area, road_width);
  return q_a * road_width / mean_area;
}

double occupancy(std::span<const DetectorPassage> passages, double detector_length,
                 double interval) {
  if (interval <= 0.0) throw DomainError("occupancy: interval must be positive");
  double covered = 0.0;
  for (const DetectorPassage& p : passages) covered += p.dwell_time(detector_length);
  return covered / interval;
}

double occupancy_homogeneous(double k_a, double road_width, double length, double width,
                             double detector_length) {
  if (length <= 0.0 || width <= 0.0 || road_width <= 0.0)
    throw DomainError("occupancy_homogeneous: dimensions must be positive");
  return k_a * (road_width / width) * (1.0 + detector_length / length);
}

double area_occupancy(std::span<const DetectorPassage> passages, double detector_length,
                      double road_width, double interval) {
  if (interval <= 0.0 || road_width <= 0.0)
    throw DomainError("area_occupancy: interval and road width must be positive");
  double covered = 0.0;
  for (const DetectorPassage& p : passages)
    covered += p.dwell_time(detector_length) * p.width;
  return covered / (interval * road_width);
}

double area_occupancy_homogeneous(double k_a, double length, double detector_length) {
  if (length <= 0.0) throw DomainError("area_occupancy_homogeneous: length must be positive");
  return k_a * (1.0 + detector_length / length);
}

}  // namespace areal
