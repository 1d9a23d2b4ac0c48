#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "areal/fd.hpp"

namespace areal {

/// Sending function: the flow a cell at density k_a can discharge.
double demand(const FdParams& params, double k_a);

/// Receiving function: the flow a cell at density k_a can absorb.
double supply(const FdParams& params, double k_a);

/// Godunov interface flux min(demand(k_up), supply(k_down)).
double interface_flux(const FdParams& params, double k_up, double k_down);

/// Per-category fluxes through one interface of the multiclass scheme.
/// Sending-side demands are the category demand functions evaluated at the
/// total density, scaled by the density split fractions p^i (zero-density
/// cells send nothing). When the receiving supply mu_mix covers the summed
/// demand every category sends it in full; otherwise each category sends
/// min{lambda^i, mu_mix - sum of the other demands, p^i * mu_mix,
/// q_max^i}, floored at zero. The optional redistribution pass hands
/// unused supply back to categories with unmet demand, proportionally.
std::vector<double> multiclass_interface_flux(const CategoryFdSet& set,
                                              std::span<const double> k_sending,
                                              double mu_mix,
                                              bool redistribute_residual = false);

struct BoundaryCondition {
  enum class Kind { closed, free_outflow, prescribed_demand };
  Kind kind = Kind::closed;
  std::vector<double> demand;  // per category, m^2/(s*m); prescribed_demand only
};

/// Net vehicle-area source: density added at `rate` (1/s) over [x0, x1]
/// while t is in [t0, t1).
struct AreaSource {
  std::size_t category = 0;
  double x0 = 0.0, x1 = 0.0;
  double t0 = 0.0, t1 = 0.0;
  double rate = 0.0;
};

enum class SupplyModel {
  mixture,  // receiving supply from density-weighted mixture parameters
  stream,   // receiving supply from one fixed stream FD
};

struct Scenario {
  std::string name;
  double cell_length = 0.0;  // m, uniform
  std::size_t cell_count = 0;
  double dt = 0.0;      // s
  double horizon = 0.0; // s
  CategoryFdSet categories;
  std::vector<std::vector<double>> initial_density;  // [category][cell]
  BoundaryCondition left;   // inflow end: closed or prescribed_demand
  BoundaryCondition right;  // outflow end: closed or free_outflow
  std::vector<AreaSource> sources;
  SupplyModel supply_model = SupplyModel::mixture;
  std::optional<FdParams> stream_fd;  // required for SupplyModel::stream
  bool redistribute_residual_supply = false;

  double length() const { return cell_length * double(cell_count); }
  /// Largest stable time step min_j l_j / max_i v_max^i.
  double cfl_limit() const;
  void validate() const;

  /// Fill a category's density with `k_a` over [x0, x1], partial cells by
  /// overlap fraction.
  void set_block(std::size_t category, double x0, double x1, double k_a);
};

struct StepLedger {
  double inflow = 0.0;        // area/width entering through the left face
  double outflow = 0.0;       // area/width leaving through the right face
  double source = 0.0;        // net area/width added by sources
  double stored_delta = 0.0;  // change of total stored area/width
};

struct FluxRecord {
  double t = 0.0;
  std::size_t interface = 0;
  std::size_t category = 0;
  double flux = 0.0;  // m^2/(s*m)
};

class CtmSimulator {
 public:
  explicit CtmSimulator(Scenario scenario);

  void step();

  double time() const { return t_; }
  const Scenario& scenario() const { return scenario_; }
  /// Current densities, [category][cell], dimensionless.
  const std::vector<std::vector<double>>& density() const { return k_; }
  /// Fluxes of the last step, [category][face] with cell_count + 1 faces.
  const std::vector<std::vector<double>>& last_fluxes() const { return flux_; }
  const StepLedger& last_ledger() const { return ledger_; }
  /// Total stored area per unit width of one category, sum k * l.
  double stored_area(std::size_t category) const;

 private:
  double mixture_supply(std::size_t cell, double k_total) const;

  Scenario scenario_;
  std::vector<std::vector<double>> k_;
  std::vector<std::vector<double>> flux_;
  std::vector<double> k_total_;
  StepLedger ledger_;
  double t_ = 0.0;
};

struct RunOptions {
  std::size_t snapshot_every = 1;  // record every n-th step; 0 = none
  bool log_fluxes = false;
  bool ledger = false;
};

struct SimulationResult {
  std::vector<std::string> category_names;
  double cell_length = 0.0;
  double dt = 0.0;
  std::vector<double> times;                              // snapshot times
  std::vector<std::vector<std::vector<double>>> density;  // [snapshot][category][cell]
  std::vector<FluxRecord> fluxes;
  std::vector<StepLedger> ledgers;
  std::vector<std::vector<double>> final_density;

  /// Interval [min, max] of cell centers where a category's density
  /// exceeds `threshold` at one snapshot; empty optional when nowhere.
  std::optional<std::pair<double, double>> support(std::size_t snapshot, std::size_t category,
                                                   double threshold) const;
};

SimulationResult run(const Scenario& scenario, double horizon, const RunOptions& options = {});

/// Platoon-dispersion experiment: cars and HVs stacked on [50, 100] m at
/// 150 m^2/(km*m) each, Chennai-style class FDs, 300 m domain.
Scenario paper_scenario_1();

/// Overtaking experiment: a car platoon on [50, 100] m trailing an HV
/// platoon on [135, 180] m, both at 150 m^2/(km*m).
Scenario paper_scenario_2();

}  // namespace areal
