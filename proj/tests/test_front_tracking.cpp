#include <doctest.h>

#include <cmath>

#include "areal/front_tracking.hpp"
#include "areal/units.hpp"

using namespace areal;

namespace {

FdParams consistent_stream() {
  return FdParams::presentation(FdFamily::smulders, 45.0, 21.0, 255.0, 1000.0,
                                wave_speed_congested(21.0, 255.0, 1000.0));
}

double ka(double presentation) { return units::ka_to_si(presentation); }

}  // namespace

TEST_CASE("uniform initial density stays uniform") {
  const FdParams p = consistent_stream();
  PiecewiseInitialCondition init;
  init.domain_min = 0.0;
  init.domain_max = 500.0;
  init.breaks = {250.0};
  init.densities = {ka(120.0), ka(120.0)};
  const MocSolution sol = moc_solve(p, init, 60.0);
  CHECK(sol.events().empty());
  for (double t : {0.0, 30.0, 60.0})
    for (double x : {10.0, 250.0, 490.0})
      CHECK(sol.density(x, t) == doctest::Approx(ka(120.0)));
}

TEST_CASE("single step-up produces one shock line") {
  const FdParams p = consistent_stream();
  PiecewiseInitialCondition init;
  init.domain_min = 0.0;
  init.domain_max = 1000.0;
  init.breaks = {500.0};
  init.densities = {ka(100.0), ka(600.0)};
  const MocSolution sol = moc_solve(p, init, 120.0);
  REQUIRE(sol.events().size() == 1);
  const double s = sol.events()[0].speed;

  const WaveFan fan = solve_riemann(p, ka(100.0), ka(600.0));
  CHECK(s == doctest::Approx(fan.waves[0].speed));
  for (double t : {10.0, 60.0, 120.0}) {
    const double x_shock = 500.0 + s * t;
    CHECK(sol.density(x_shock - 0.5, t) == doctest::Approx(ka(100.0)));
    CHECK(sol.density(x_shock + 0.5, t) == doctest::Approx(ka(600.0)));
    // Exact agreement with the self-similar solution.
    for (double dx : {-200.0, -50.0, 50.0, 200.0})
      CHECK(sol.density(x_shock + dx, t) ==
            doctest::Approx(riemann_density(p, ka(100.0), ka(600.0), s + dx / t)));
  }
}

TEST_CASE("discretized rarefaction tracks the exact fan and refines with n_fan") {
  const FdParams p = consistent_stream();
  PiecewiseInitialCondition init;
  init.domain_min = 0.0;
  init.domain_max = 2000.0;
  init.breaks = {1000.0};
  init.densities = {ka(600.0), ka(100.0)};

  const double t = 60.0;
  double previous_worst = 1e300;
  for (const int n_fan : {8, 32, 128}) {
    FrontTrackingOptions options;
    options.n_fan = n_fan;
    const MocSolution sol = moc_solve(p, init, t, options);
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double x = 500.0 + 1000.0 * double(i) / 400.0;
      const double exact = riemann_density(p, ka(600.0), ka(100.0), (x - 1000.0) / t);
      worst = std::max(worst, std::abs(sol.density(x, t) - exact));
    }
    CHECK(worst < previous_worst + 1e-15);
    // The staircase can be off by at most one wavelet.
    CHECK(worst <= (ka(600.0) - ka(100.0)) / double(n_fan) + 1e-12);
    previous_worst = worst;
  }
}

TEST_CASE("shock-rarefaction interaction conserves area") {
  const FdParams p = consistent_stream();
  PiecewiseInitialCondition init;
  init.domain_min = 0.0;
  init.domain_max = 3000.0;
  init.breaks = {1000.0, 1600.0};
  init.densities = {ka(100.0), ka(600.0), ka(100.0)};

  FrontTrackingOptions options;
  options.n_fan = 48;
  const MocSolution sol = moc_solve(p, init, 200.0, options);

  const double initial_area =
      ka(100.0) * 1000.0 + ka(600.0) * 600.0 + ka(100.0) * 1400.0;
  std::size_t interactions = 0;
  for (const FrontEvent& e : sol.events())
    if (e.kind == "interaction") ++interactions;
  CHECK(interactions > 0);  // the deceleration shock meets the acceleration fan

  for (double t : {0.0, 50.0, 100.0, 150.0, 200.0}) {
    const double area = sol.integrate_density(t, 0.0, 3000.0);
    CHECK(area == doctest::Approx(initial_area).epsilon(1e-3));
  }
  // With front tracking the conservation defect is rounding-level.
  CHECK(sol.integrate_density(200.0, 0.0, 3000.0) ==
        doctest::Approx(initial_area).epsilon(1e-9));
}

TEST_CASE("discontinuous capacity parameters are rejected") {
  const FdParams free_omega =
      FdParams::presentation(FdFamily::smulders, 45.0, 21.0, 255.0, 1000.0, 7.5);
  PiecewiseInitialCondition init;
  init.domain_min = 0.0;
  init.domain_max = 100.0;
  init.densities = {ka(100.0)};
  CHECK_THROWS_AS(moc_solve(free_omega, init, 10.0), DomainError);
}

TEST_CASE("interaction cap raises a partial-solution error") {
  const FdParams p = consistent_stream();
  PiecewiseInitialCondition init;
  init.domain_min = 0.0;
  init.domain_max = 3000.0;
  init.breaks = {1000.0, 1600.0};
  init.densities = {ka(100.0), ka(600.0), ka(100.0)};
  FrontTrackingOptions options;
  options.n_fan = 64;
  options.max_interactions = 3;
  try {
    moc_solve(p, init, 200.0, options);
    FAIL("expected FrontTrackingError");
  } catch (const FrontTrackingError& e) {
    CHECK(e.reached_time >= 0.0);
    CHECK(e.reached_time < 200.0);
  }
}

TEST_CASE("initial condition validation") {
  const FdParams p = consistent_stream();
  PiecewiseInitialCondition init;
  init.domain_min = 0.0;
  init.domain_max = 100.0;
  init.breaks = {50.0, 40.0};
  init.densities = {0.1, 0.2, 0.3};
  CHECK_THROWS_AS(moc_solve(p, init, 10.0), DomainError);
  init.breaks = {40.0, 50.0};
  init.densities = {0.1, 2.5, 0.3};
  CHECK_THROWS_AS(moc_solve(p, init, 10.0), DomainError);
}
