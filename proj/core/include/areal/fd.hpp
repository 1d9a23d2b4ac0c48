#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "areal/errors.hpp"

namespace areal {

enum class FdFamily {
  greenshields,
  greenberg,
  underwood,
  del_castillo,
  daganzo,
  smulders,
};

std::string_view to_string(FdFamily family);
FdFamily fd_family_from_string(std::string_view name);

/// Parameters of one speed-density family over areal variables, SI units:
/// speeds m/s, densities dimensionless. Only the fields a family uses are
/// required; k_jam == 0 means unbounded (Underwood). omega is stored as a
/// free parameter; wave_speed_congested() derives the value implied by
/// continuity at the critical density.
struct FdParams {
  FdFamily family = FdFamily::smulders;
  double v_max = 0.0;   // m/s
  double v_crit = 0.0;  // m/s
  double k_crit = 0.0;  // dimensionless areal density
  double k_jam = 0.0;   // dimensionless areal density; 0 = unbounded
  double omega = 0.0;   // m/s, congested wave speed

  /// Build from table/file units: km/h and m^2/(km*m). Unused fields may
  /// be zero.
  static FdParams presentation(FdFamily family, double v_max_kmh, double v_crit_kmh,
                               double ka_crit, double ka_jam, double omega_kmh);

  void validate() const;
};

/// Speed at areal density k_a, m/s. Throws DomainError outside [0, k_jam]
/// and at k_a = 0 for Greenberg (no finite free-flow speed).
double speed_at(const FdParams& params, double k_a);

/// Flow k_a * v(k_a), with the k_a = 0 limit pinned to zero for every
/// family.
double flow_at(const FdParams& params, double k_a);

/// Density at which the flow branch peaks. Closed form where available,
/// numeric for Del Castillo.
double critical_density(const FdParams& params);

/// Maximum admissible flow. For the two-regime families this follows the
/// capped rule q_max = min(v_crit*k_crit, omega*(k_jam - k_crit)), which
/// stays well-defined when a free omega breaks continuity at k_crit; for
/// the others it is the flow at the critical density.
double capacity(const FdParams& params);

/// omega implied by continuity of the two-regime flow at the critical
/// density: v_crit * k_crit / (k_jam - k_crit). Unit-agnostic: the result
/// carries the unit of v_crit.
double wave_speed_congested(double v_crit, double k_crit, double k_jam);

/// True when the speed branches agree at k_crit to rel_tol. Families
/// without a branch switch are always continuous.
bool has_continuous_flux(const FdParams& params, double rel_tol = 1e-9);

/// Per-category Smulders-form parameters sharing one jam density. Class
/// speeds are evaluated at the *total* areal density.
struct CategoryFdSet {
  struct Entry {
    std::string name;
    FdParams fd;
  };
  std::vector<Entry> categories;
  double k_jam = 0.0;  // shared, dimensionless

  void validate() const;
  const Entry& at(std::string_view name) const;
};

/// Speed of one category at the total areal density, m/s.
double class_speed_at(const CategoryFdSet& set, std::size_t category_index, double k_a_total);

/// Per-category flow contribution k^i * v^i(k_total), m^2/(s*m).
double class_flow_at(const CategoryFdSet& set, std::size_t category_index, double k_a_category,
                     double k_a_total);

}  // namespace areal
