#include "areal/fd.hpp"

#include <algorithm>
#include <cmath>

#include "areal/units.hpp"

namespace areal {

std::string_view to_string(FdFamily family) {
  switch (family) {
    case FdFamily::greenshields: return "greenshields";
    case FdFamily::greenberg: return "greenberg";
    case FdFamily::underwood: return "underwood";
    case FdFamily::del_castillo: return "del_castillo";
    case FdFamily::daganzo: return "daganzo";
    case FdFamily::smulders: return "smulders";
  }
  return "unknown";
}

FdFamily fd_family_from_string(std::string_view name) {
  if (name == "greenshields") return FdFamily::greenshields;
  if (name == "greenberg") return FdFamily::greenberg;
  if (name == "underwood") return FdFamily::underwood;
  if (name == "del_castillo" || name == "delcastillo") return FdFamily::del_castillo;
  if (name == "daganzo") return FdFamily::daganzo;
  if (name == "smulders") return FdFamily::smulders;
  throw ParseError("unknown FD family '" + std::string(name) + "'");
}

FdParams FdParams::presentation(FdFamily family, double v_max_kmh, double v_crit_kmh,
                                double ka_crit, double ka_jam, double omega_kmh) {
  FdParams p;
  p.family = family;
  p.v_max = units::kmh_to_ms(v_max_kmh);
  p.v_crit = units::kmh_to_ms(v_crit_kmh);
  p.k_crit = units::ka_to_si(ka_crit);
  p.k_jam = units::ka_to_si(ka_jam);
  p.omega = units::kmh_to_ms(omega_kmh);
  p.validate();
  return p;
}

void FdParams::validate() const {
  switch (family) {
    case FdFamily::greenshields:
      if (v_max <= 0.0 || k_jam <= 0.0)
        throw DomainError("greenshields: v_max and k_jam must be positive");
      break;
    case FdFamily::greenberg:
      if (v_crit <= 0.0 || k_jam <= 0.0)
        throw DomainError("greenberg: v_crit and k_jam must be positive");
      break;
    case FdFamily::underwood:
      if (v_max <= 0.0 || k_crit <= 0.0)
        throw DomainError("underwood: v_max and k_crit must be positive");
      break;
    case FdFamily::del_castillo:
      if (v_max <= 0.0 || omega <= 0.0 || k_jam <= 0.0)
        throw DomainError("del_castillo: v_max, omega and k_jam must be positive");
      break;
    case FdFamily::daganzo:
      if (v_max <= 0.0 || omega <= 0.0)
        throw DomainError("daganzo: v_max and omega must be positive");
      if (!(0.0 < k_crit && k_crit < k_jam))
        throw DomainError("daganzo: require 0 < k_crit < k_jam");
      break;
    case FdFamily::smulders:
      if (v_max <= 0.0 || v_crit <= 0.0 || omega <= 0.0)
        throw DomainError("smulders: speeds and omega must be positive");
      if (!(v_crit < v_max))
        throw DomainError("smulders: require v_crit < v_max");
      if (!(0.0 < k_crit && k_crit < k_jam))
        throw DomainError("smulders: require 0 < k_crit < k_jam");
      break;
  }
}

namespace {

void check_density(const FdParams& params, double k_a) {
  if (k_a < 0.0) throw DomainError("fd: negative areal density");
  if (params.k_jam > 0.0 && k_a > params.k_jam * (1.0 + 1e-12))
    throw DomainError("fd: areal density exceeds jam density");
}

}  // namespace

double speed_at(const FdParams& params, double k_a) {
  check_density(params, k_a);
  switch (params.family) {
    case FdFamily::greenshields:
      return params.v_max * (1.0 - k_a / params.k_jam);
    case FdFamily::greenberg:
      if (k_a <= 0.0)
        throw DomainError("greenberg: speed is unbounded at zero density");
      return params.v_crit * std::log(params.k_jam / k_a);
    case FdFamily::underwood:
      return params.v_max * std::exp(-k_a / params.k_crit);
    case FdFamily::del_castillo: {
      if (k_a == 0.0) return params.v_max;
      const double a = params.omega / params.v_max * (params.k_jam / k_a - 1.0);
      // exp(1 - exp(a)) underflows to 0 for large a, giving the v_max limit.
      return params.v_max * (1.0 - std::exp(1.0 - std::exp(a)));
    }
    case FdFamily::daganzo:
      if (k_a <= params.k_crit) return params.v_max;
      return params.omega * (params.k_jam / k_a - 1.0);
    case FdFamily::smulders:
      if (k_a <= params.k_crit)
        return params.v_max - (params.v_max - params.v_crit) * k_a / params.k_crit;
      return params.omega * (params.k_jam / k_a - 1.0);
  }
  throw DomainError("fd: unknown family");
}

double flow_at(const FdParams& params, double k_a) {
  check_density(params, k_a);
  if (k_a == 0.0) return 0.0;
  return k_a * speed_at(params, k_a);
}

namespace {

// Golden-section maximum of the flow over (0, k_jam); used where the
// critical density has no closed form.
double argmax_flow(const FdParams& params) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = params.k_jam * 1e-9;
  double hi = params.k_jam;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = flow_at(params, x1);
  double f2 = flow_at(params, x2);
  for (int i = 0; i < 200 && (hi - lo) > 1e-14 * params.k_jam; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = flow_at(params, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = flow_at(params, x1);
    }
  }
  return (lo + hi) / 2.0;
}

}  // namespace

double critical_density(const FdParams& params) {
  switch (params.family) {
    case FdFamily::greenshields: return params.k_jam / 2.0;
    case FdFamily::greenberg: return params.k_jam / std::exp(1.0);
    case FdFamily::underwood: return params.k_crit;
    case FdFamily::del_castillo: return argmax_flow(params);
    case FdFamily::daganzo: return params.k_crit;
    case FdFamily::smulders: return params.k_crit;
  }
  throw DomainError("fd: unknown family");
}

double capacity(const FdParams& params) {
  switch (params.family) {
    case FdFamily::daganzo:
      return std::min(params.v_max * params.k_crit,
                      params.omega * (params.k_jam - params.k_crit));
    case FdFamily::smulders:
      return std::min(params.v_crit * params.k_crit,
                      params.omega * (params.k_jam - params.k_crit));
    default:
      return flow_at(params, critical_density(params));
  }
}

double wave_speed_congested(double v_crit, double k_crit, double k_jam) {
  if (!(k_jam > k_crit) || !(k_crit > 0.0))
    throw DomainError("wave speed: require k_jam > k_crit > 0");
  return v_crit * k_crit / (k_jam - k_crit);
}

bool has_continuous_flux(const FdParams& params, double rel_tol) {
  double free_side, congested_side;
  switch (params.family) {
    case FdFamily::daganzo:
      free_side = params.v_max;
      congested_side = params.omega * (params.k_jam / params.k_crit - 1.0);
      break;
    case FdFamily::smulders:
      free_side = params.v_crit;
      congested_side = params.omega * (params.k_jam / params.k_crit - 1.0);
      break;
    default:
      return true;
  }
  const double scale = std::max(std::abs(free_side), std::abs(congested_side));
  return std::abs(free_side - congested_side) <= rel_tol * scale;
}

void CategoryFdSet::validate() const {
  if (categories.empty()) throw DomainError("category FD set: no categories");
  if (k_jam <= 0.0) throw DomainError("category FD set: shared k_jam must be positive");
  for (const Entry& entry : categories) {
    if (entry.fd.k_jam != k_jam)
      throw DomainError("category FD set: '" + entry.name + "' does not share the jam density");
    entry.fd.validate();
  }
}

const CategoryFdSet::Entry& CategoryFdSet::at(std::string_view name) const {
  for (const Entry& entry : categories)
    if (entry.name == name) return entry;
  throw DomainError("category FD set: unknown category '" + std::string(name) + "'");
}

double class_speed_at(const CategoryFdSet& set, std::size_t category_index, double k_a_total) {
  return speed_at(set.categories.at(category_index).fd, k_a_total);
}

double class_flow_at(const CategoryFdSet& set, std::size_t category_index, double k_a_category,
                     double k_a_total) {
  if (k_a_category < 0.0) throw DomainError("class flow: negative category density");
  if (k_a_category == 0.0) return 0.0;
  return k_a_category * class_speed_at(set, category_index, k_a_total);
}

}  // namespace areal
