#include "areal/ctm.hpp"

#include <algorithm>
#include <cmath>

#include "areal/errors.hpp"
#include "areal/units.hpp"

namespace areal {

double demand(const FdParams& params, double k_a) {
  const double k_crit = critical_density(params);
  const double q_max = capacity(params);
  if (k_a <= k_crit) return std::min(flow_at(params, k_a), q_max);
  return q_max;
}

double supply(const FdParams& params, double k_a) {
  const double k_crit = critical_density(params);
  const double q_max = capacity(params);
  if (k_a <= k_crit) return q_max;
  return std::min(flow_at(params, k_a), q_max);
}

double interface_flux(const FdParams& params, double k_up, double k_down) {
  return std::min(demand(params, k_up), supply(params, k_down));
}

std::vector<double> multiclass_interface_flux(const CategoryFdSet& set,
                                              std::span<const double> k_sending,
                                              double mu_mix,
                                              bool redistribute_residual) {
  const std::size_t n = set.categories.size();
  if (k_sending.size() != n)
    throw DomainError("multiclass flux: one sending density per category required");
  if (mu_mix < 0.0) throw DomainError("multiclass flux: negative receiving supply");

  double k_total = 0.0;
  for (const double k : k_sending) {
    if (k < 0.0) throw DomainError("multiclass flux: negative sending density");
    k_total += k;
  }

  std::vector<double> flux(n, 0.0);
  if (k_total <= 0.0) return flux;

  std::vector<double> lambda(n, 0.0);
  std::vector<double> q_max(n, 0.0);
  std::vector<double> p(n, 0.0);
  double lambda_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = k_sending[i] / k_total;
    lambda[i] = p[i] * demand(set.categories[i].fd, k_total);
    q_max[i] = capacity(set.categories[i].fd);
    lambda_sum += lambda[i];
  }

  if (lambda_sum <= mu_mix) {
    return lambda;  // uncongested receiving cell: everyone sends in full
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double others = lambda_sum - lambda[i];
    const double f = std::min(std::min(lambda[i], mu_mix - others),
                              std::min(p[i] * mu_mix, q_max[i]));
    flux[i] = std::max(f, 0.0);
  }

  if (redistribute_residual) {
    // The merge formula can leave receiving supply unused; hand it back to
    // categories that still have demand, proportionally to the shortfall.
    for (int pass = 0; pass < 8; ++pass) {
      double sent = 0.0, shortfall = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        sent += flux[i];
        shortfall += lambda[i] - flux[i];
      }
      const double residual = mu_mix - sent;
      if (residual <= 1e-15 || shortfall <= 1e-15) break;
      for (std::size_t i = 0; i < n; ++i) {
        const double want = lambda[i] - flux[i];
        flux[i] += std::min(want, residual * (want / shortfall));
      }
    }
  }
  return flux;
}

double Scenario::cfl_limit() const {
  double v_max = 0.0;
  for (const auto& entry : categories.categories) v_max = std::max(v_max, entry.fd.v_max);
  if (stream_fd) v_max = std::max(v_max, stream_fd->v_max);
  if (v_max <= 0.0) throw DomainError("scenario: no positive free-flow speed");
  return cell_length / v_max;
}

void Scenario::validate() const {
  if (cell_length <= 0.0 || cell_count == 0 || dt <= 0.0)
    throw DomainError("scenario: cell_length, cell_count and dt must be positive");
  categories.validate();
  const std::size_t n = categories.categories.size();
  if (initial_density.size() != n)
    throw DomainError("scenario: one initial density row per category required");
  for (const auto& row : initial_density)
    if (row.size() != cell_count)
      throw DomainError("scenario: initial density row length must equal cell_count");
  for (std::size_t c = 0; c < cell_count; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (initial_density[i][c] < 0.0) throw DomainError("scenario: negative initial density");
      total += initial_density[i][c];
    }
    if (total > categories.k_jam * (1.0 + 1e-12))
      throw DomainError("scenario: initial total density exceeds k_jam");
  }
  if (left.kind == BoundaryCondition::Kind::free_outflow)
    throw DomainError("scenario: left boundary must be closed or prescribed-demand");
  if (right.kind == BoundaryCondition::Kind::prescribed_demand)
    throw DomainError("scenario: right boundary must be closed or free-outflow");
  if (left.kind == BoundaryCondition::Kind::prescribed_demand && left.demand.size() != n)
    throw DomainError("scenario: left demand needs one rate per category");
  if (supply_model == SupplyModel::stream && !stream_fd)
    throw DomainError("scenario: stream supply model needs stream_fd");
  for (const AreaSource& s : sources) {
    if (s.category >= n) throw DomainError("scenario: source category out of range");
    if (!(s.x1 > s.x0) || !(s.t1 > s.t0))
      throw DomainError("scenario: source extents must be positive");
  }
  if (dt > cfl_limit() * (1.0 + 1e-12))
    throw CflError("scenario: dt violates the CFL bound cell_length / max v_max");
}

void Scenario::set_block(std::size_t category, double x0, double x1, double k_a) {
  if (category >= initial_density.size())
    throw DomainError("scenario: category index out of range");
  for (std::size_t c = 0; c < cell_count; ++c) {
    const double lo = cell_length * double(c);
    const double hi = lo + cell_length;
    const double overlap = std::max(0.0, std::min(hi, x1) - std::max(lo, x0));
    if (overlap > 0.0) initial_density[category][c] += k_a * overlap / cell_length;
  }
}

CtmSimulator::CtmSimulator(Scenario scenario) : scenario_(std::move(scenario)) {
  scenario_.validate();
  k_ = scenario_.initial_density;
  const std::size_t n = scenario_.categories.categories.size();
  flux_.assign(n, std::vector<double>(scenario_.cell_count + 1, 0.0));
  k_total_.assign(scenario_.cell_count, 0.0);
}

double CtmSimulator::stored_area(std::size_t category) const {
  double total = 0.0;
  for (const double k : k_[category]) total += k;
  return total * scenario_.cell_length;
}

double CtmSimulator::mixture_supply(std::size_t cell, double k_total) const {
  if (scenario_.supply_model == SupplyModel::stream)
    return supply(*scenario_.stream_fd, k_total);

  const auto& cats = scenario_.categories.categories;
  FdParams mix;
  mix.family = FdFamily::smulders;
  mix.k_jam = scenario_.categories.k_jam;
  if (k_total <= 0.0) {
    const double w = 1.0 / double(cats.size());
    for (const auto& entry : cats) {
      const double v_crit =
          entry.fd.family == FdFamily::daganzo ? entry.fd.v_max : entry.fd.v_crit;
      mix.v_max += w * entry.fd.v_max;
      mix.v_crit += w * v_crit;
      mix.k_crit += w * entry.fd.k_crit;
      mix.omega += w * entry.fd.omega;
    }
  } else {
    for (std::size_t i = 0; i < cats.size(); ++i) {
      const double w = k_[i][cell] / k_total;
      const FdParams& fd = cats[i].fd;
      const double v_crit = fd.family == FdFamily::daganzo ? fd.v_max : fd.v_crit;
      mix.v_max += w * fd.v_max;
      mix.v_crit += w * v_crit;
      mix.k_crit += w * fd.k_crit;
      mix.omega += w * fd.omega;
    }
  }
  return supply(mix, k_total);
}

void CtmSimulator::step() {
  const std::size_t n_cat = scenario_.categories.categories.size();
  const std::size_t n_cells = scenario_.cell_count;
  const double dt = scenario_.dt;
  const double l = scenario_.cell_length;

  for (std::size_t c = 0; c < n_cells; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n_cat; ++i) total += k_[i][c];
    k_total_[c] = total;
  }

  std::vector<double> k_send(n_cat, 0.0);

  // Interface f is the upstream face of cell f; cell c gains through face c
  // and loses through face c + 1.
  for (std::size_t f = 0; f <= n_cells; ++f) {
    if (f == 0) {
      if (scenario_.left.kind == BoundaryCondition::Kind::prescribed_demand) {
        const double mu = mixture_supply(0, k_total_[0]);
        double sum = 0.0;
        for (std::size_t i = 0; i < n_cat; ++i) sum += scenario_.left.demand[i];
        if (sum <= mu) {
          for (std::size_t i = 0; i < n_cat; ++i) flux_[i][f] = scenario_.left.demand[i];
        } else {
          for (std::size_t i = 0; i < n_cat; ++i) {
            const double lambda = scenario_.left.demand[i];
            const double p = sum > 0.0 ? lambda / sum : 0.0;
            const double q_max = capacity(scenario_.categories.categories[i].fd);
            flux_[i][f] = std::max(
                0.0, std::min(std::min(lambda, mu - (sum - lambda)), std::min(p * mu, q_max)));
          }
        }
      } else {
        for (std::size_t i = 0; i < n_cat; ++i) flux_[i][f] = 0.0;
      }
      continue;
    }
    if (f == n_cells) {
      if (scenario_.right.kind == BoundaryCondition::Kind::free_outflow) {
        // Unbounded receiving supply: every category discharges its demand.
        const std::size_t up = n_cells - 1;
        const double k_total = k_total_[up];
        for (std::size_t i = 0; i < n_cat; ++i) {
          const double p = k_total > 0.0 ? k_[i][up] / k_total : 0.0;
          flux_[i][f] =
              p > 0.0 ? p * demand(scenario_.categories.categories[i].fd, k_total) : 0.0;
        }
      } else {
        for (std::size_t i = 0; i < n_cat; ++i) flux_[i][f] = 0.0;
      }
      continue;
    }
    const std::size_t up = f - 1;
    for (std::size_t i = 0; i < n_cat; ++i) k_send[i] = k_[i][up];
    const double mu = mixture_supply(f, k_total_[f]);
    const std::vector<double> fluxes = multiclass_interface_flux(
        scenario_.categories, k_send, mu, scenario_.redistribute_residual_supply);
    for (std::size_t i = 0; i < n_cat; ++i) flux_[i][f] = fluxes[i];
  }

  ledger_ = StepLedger{};
  for (std::size_t i = 0; i < n_cat; ++i) {
    ledger_.inflow += flux_[i][0] * dt;
    ledger_.outflow += flux_[i][n_cells] * dt;
  }

  for (std::size_t i = 0; i < n_cat; ++i) {
    for (std::size_t c = 0; c < n_cells; ++c) {
      const double delta = dt / l * (flux_[i][c] - flux_[i][c + 1]);
      ledger_.stored_delta += delta * l;
      k_[i][c] += delta;
    }
  }

  for (const AreaSource& s : scenario_.sources) {
    if (t_ < s.t0 || t_ >= s.t1) continue;
    for (std::size_t c = 0; c < n_cells; ++c) {
      const double lo = l * double(c);
      const double hi = lo + l;
      const double overlap = std::max(0.0, std::min(hi, s.x1) - std::max(lo, s.x0));
      if (overlap <= 0.0) continue;
      const double delta = s.rate * dt * overlap / l;
      if (k_[s.category][c] + delta < 0.0)
        throw DomainError("ctm: sink would drive a density negative");
      k_[s.category][c] += delta;
      ledger_.source += delta * l;
      ledger_.stored_delta += delta * l;
    }
  }

  t_ += dt;
}

SimulationResult run(const Scenario& scenario, double horizon, const RunOptions& options) {
  if (!(horizon > 0.0)) throw DomainError("run: horizon must be positive");
  CtmSimulator sim(scenario);
  const std::size_t steps = std::size_t(std::llround(horizon / scenario.dt));

  SimulationResult result;
  for (const auto& entry : scenario.categories.categories)
    result.category_names.push_back(entry.name);
  result.cell_length = scenario.cell_length;
  result.dt = scenario.dt;

  auto snapshot = [&]() {
    result.times.push_back(sim.time());
    result.density.push_back(sim.density());
  };
  if (options.snapshot_every > 0) snapshot();

  for (std::size_t s = 1; s <= steps; ++s) {
    sim.step();
    if (options.log_fluxes) {
      const auto& fluxes = sim.last_fluxes();
      for (std::size_t i = 0; i < fluxes.size(); ++i)
        for (std::size_t f = 0; f < fluxes[i].size(); ++f)
          result.fluxes.push_back({sim.time(), f, i, fluxes[i][f]});
    }
    if (options.ledger) result.ledgers.push_back(sim.last_ledger());
    if (options.snapshot_every > 0 && s % options.snapshot_every == 0) snapshot();
  }
  result.final_density = sim.density();
  return result;
}

std::optional<std::pair<double, double>> SimulationResult::support(std::size_t snapshot,
                                                                   std::size_t category,
                                                                   double threshold) const {
  const auto& row = density.at(snapshot).at(category);
  double lo = 0.0, hi = 0.0;
  bool found = false;
  for (std::size_t c = 0; c < row.size(); ++c) {
    if (row[c] <= threshold) continue;
    const double center = cell_length * (double(c) + 0.5);
    if (!found) lo = center;
    hi = center;
    found = true;
  }
  if (!found) return std::nullopt;
  return std::make_pair(lo, hi);
}

namespace {

Scenario paper_base() {
  Scenario s;
  s.cell_length = 5.0;
  s.cell_count = 60;  // 300 m
  s.dt = 0.25;
  s.categories.k_jam = units::ka_to_si(1000.0);
  s.categories.categories.push_back(
      {"cars", FdParams::presentation(FdFamily::smulders, 50.0, 25.0, 200.0, 1000.0, 5.25)});
  s.categories.categories.push_back(
      {"HVs", FdParams::presentation(FdFamily::smulders, 45.0, 23.0, 250.0, 1000.0, 7.7)});
  s.initial_density.assign(2, std::vector<double>(s.cell_count, 0.0));
  s.left.kind = BoundaryCondition::Kind::closed;
  s.right.kind = BoundaryCondition::Kind::free_outflow;
  return s;
}

}  // namespace

Scenario paper_scenario_1() {
  Scenario s = paper_base();
  s.name = "paper1";
  s.horizon = 160.0;
  s.set_block(0, 50.0, 100.0, units::ka_to_si(150.0));
  s.set_block(1, 50.0, 100.0, units::ka_to_si(150.0));
  return s;
}

Scenario paper_scenario_2() {
  Scenario s = paper_base();
  s.name = "paper2";
  s.horizon = 140.0;
  s.set_block(0, 50.0, 100.0, units::ka_to_si(150.0));
  s.set_block(1, 135.0, 180.0, units::ka_to_si(150.0));
  return s;
}

}  // namespace areal
