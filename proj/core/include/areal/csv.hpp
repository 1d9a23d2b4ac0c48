#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "areal/calibrate.hpp"
#include "areal/fd.hpp"
#include "areal/front_tracking.hpp"
#include "areal/steady.hpp"
#include "areal/trajectory.hpp"

// File formats. All numeric output is printed at 6 significant digits;
// presentation units (km/h, m^2/(km*m), m^2/(h*m)) on every external
// surface.

namespace areal::csv {

std::string format_number(double value);

/// `category,length_m,width_m,vmax_kmh,vmin_kmh`
std::map<std::string, VehicleCategory> load_categories(const std::string& path);

/// `vehicle_id,category,t_s,x_m`, one row per sample; rows of one vehicle
/// must be in time order. Unknown categories and malformed fields raise
/// ParseError naming the line.
std::vector<Trajectory> load_trajectories(const std::string& path,
                                          const std::map<std::string, VehicleCategory>& categories);

/// `ka,v` in m^2/(km*m) and km/h.
std::vector<Observation> load_observations(const std::string& path);
void save_observations(const std::string& path, std::span<const Observation> observations);

/// `family,vmax,vcrit,ka_crit,ka_jam,omega` (presentation units); one row
/// per parameter set. An optional leading `# seed N` comment is preserved
/// by save when seed >= 0.
std::vector<FdParams> load_fd_params(const std::string& path);
void save_fd_params(const std::string& path, std::span<const FdParams> params,
                    long seed = -1);

void save_fit_report(const std::string& path, const FitReport& report);

/// `t_start,t_end,a0,b0,ka,qa,va` per steady window.
void save_steady_windows(const std::string& path, std::span<const SteadyWindow> windows);

/// `t,x,kind,left_state,right_state,speed` per front-tracking event.
void save_front_events(const std::string& path, std::span<const FrontEvent> events);

/// Density raster: header `t,x_<center>...`, one row per requested time.
void save_density_grid(const std::string& path, std::span<const double> times,
                       std::span<const std::vector<double>> rows, double cell_length);

}  // namespace areal::csv
