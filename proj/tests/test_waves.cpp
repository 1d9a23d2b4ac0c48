#include <doctest.h>

#include <cmath>
#include <random>

#include "areal/units.hpp"
#include "areal/waves.hpp"

using namespace areal;

namespace {

FdParams chennai_stream_table() {
  return FdParams::presentation(FdFamily::smulders, 45.0, 21.0, 255.0, 1000.0, 7.5);
}

double ka(double presentation) { return units::ka_to_si(presentation); }

}  // namespace

TEST_CASE("shock speed fixtures") {
  const FdParams p = chennai_stream_table();
  // Free-branch flow at 100 is 3558.8, congested flow at 600 is 3000; the
  // chord gives -1.1176 km/h.
  const double s = shock_speed(p, ka(100.0), ka(600.0));
  CHECK(units::ms_to_kmh(s) == doctest::Approx(-1.11765).epsilon(1e-4));
  CHECK_THROWS_AS(shock_speed(p, ka(100.0), ka(100.0)), DomainError);
  // Chord between the two zero-flow endpoints.
  CHECK(shock_speed(p, 0.0, p.k_jam) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("characteristic speed fixtures") {
  const FdParams p = chennai_stream_table();
  CHECK(units::ms_to_kmh(characteristic_speed(p, 0.0)) == doctest::Approx(45.0));
  CHECK(units::ms_to_kmh(characteristic_speed(p, p.k_crit)) ==
        doctest::Approx(-3.0).epsilon(1e-9));
  CHECK(units::ms_to_kmh(characteristic_speed(p, ka(600.0))) == doctest::Approx(-7.5));
  CHECK(units::ms_to_kmh(characteristic_speed(p, ka(100.0))) ==
        doctest::Approx(26.1765).epsilon(1e-4));
  const FdParams g = FdParams::presentation(FdFamily::greenshields, 38.0, 0.0, 0.0, 1000.0, 0.0);
  CHECK_THROWS_AS(characteristic_speed(g, 0.1), DomainError);
}

TEST_CASE("riemann fan structures") {
  const FdParams p = chennai_stream_table();

  CHECK(solve_riemann(p, ka(150.0), ka(150.0)).waves.empty());

  const WaveFan compression = solve_riemann(p, ka(100.0), ka(600.0));
  REQUIRE(compression.waves.size() == 1);
  CHECK(compression.waves[0].kind == Wave::Kind::shock);
  CHECK(units::ms_to_kmh(compression.waves[0].speed) == doctest::Approx(-1.11765).epsilon(1e-4));

  const WaveFan expansion = solve_riemann(p, ka(600.0), ka(100.0));
  REQUIRE(expansion.waves.size() == 2);  // contact along the congested branch, then the fan
  CHECK(units::ms_to_kmh(expansion.waves.front().head) == doctest::Approx(-7.5));
  CHECK(units::ms_to_kmh(expansion.waves.back().tail) == doctest::Approx(26.1765).epsilon(1e-4));
  CHECK(expansion.waves.front().k_right == doctest::Approx(p.k_crit));
  CHECK(expansion.waves.back().k_left == doctest::Approx(p.k_crit));

  // Purely congested expansion collapses to the single slope -omega.
  const WaveFan contact = solve_riemann(p, ka(800.0), ka(400.0));
  REQUIRE(contact.waves.size() == 1);
  CHECK(contact.waves[0].head == doctest::Approx(contact.waves[0].tail));
  CHECK(units::ms_to_kmh(contact.waves[0].head) == doctest::Approx(-7.5));
}

TEST_CASE("rankine-hugoniot and entropy hold for random riemann problems") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double v_max = 10.0 + 8.0 * unit(rng);
    const double v_crit = 3.0 + 0.6 * (v_max - 3.0) * unit(rng);
    const double k_jam = 0.8 + 0.4 * unit(rng);
    const double k_crit = k_jam * (0.15 + 0.3 * unit(rng));
    FdParams p;
    p.family = FdFamily::smulders;
    p.v_max = v_max;
    p.v_crit = v_crit;
    p.k_crit = k_crit;
    p.k_jam = k_jam;
    p.omega = wave_speed_congested(v_crit, k_crit, k_jam);
    const double kl = k_jam * unit(rng);
    const double kr = k_jam * unit(rng);

    const WaveFan fan = solve_riemann(p, kl, kr);
    double k_cursor = kl;
    double previous_speed = -1e300;
    for (const Wave& wave : fan.waves) {
      CHECK(wave.k_left == doctest::Approx(k_cursor));
      if (wave.kind == Wave::Kind::shock) {
        const double lhs = wave.speed * (wave.k_right - wave.k_left);
        const double rhs = flow_at(p, wave.k_right) - flow_at(p, wave.k_left);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        CHECK(characteristic_speed(p, wave.k_left) >= wave.speed - 1e-9);
        CHECK(wave.speed >= characteristic_speed(p, wave.k_right) - 1e-9);
        CHECK(wave.speed >= previous_speed - 1e-9);
        previous_speed = wave.speed;
      } else {
        CHECK(wave.head <= wave.tail + 1e-12);
        CHECK(wave.head == doctest::Approx(characteristic_speed(p, wave.k_left)));
        CHECK(wave.tail == doctest::Approx(characteristic_speed(p, wave.k_right)));
        CHECK(wave.head >= previous_speed - 1e-9);
        previous_speed = wave.tail;
      }
      k_cursor = wave.k_right;
    }
    if (!fan.waves.empty()) CHECK(k_cursor == doctest::Approx(kr));
  }
}

TEST_CASE("self-similar sampler agrees with the fan") {
  const FdParams p = chennai_stream_table();
  SUBCASE("shock") {
    const double s = shock_speed(p, ka(100.0), ka(600.0));
    CHECK(riemann_density(p, ka(100.0), ka(600.0), s - 1e-6) == doctest::Approx(ka(100.0)));
    CHECK(riemann_density(p, ka(100.0), ka(600.0), s + 1e-6) == doctest::Approx(ka(600.0)));
  }
  SUBCASE("transcritical fan") {
    const double kl = ka(600.0), kr = ka(100.0);
    CHECK(riemann_density(p, kl, kr, units::kmh_to_ms(-20.0)) == doctest::Approx(kl));
    CHECK(riemann_density(p, kl, kr, units::kmh_to_ms(40.0)) == doctest::Approx(kr));
    // Between -omega and the free-branch edge the density holds at k_crit.
    CHECK(riemann_density(p, kl, kr, units::kmh_to_ms(-5.0)) == doctest::Approx(p.k_crit));
    // Inside the free fan the characteristic speed of the sampled density
    // reproduces the slope.
    const double xi = units::kmh_to_ms(10.0);
    const double k = riemann_density(p, kl, kr, xi);
    CHECK(characteristic_speed(p, k) == doctest::Approx(xi).epsilon(1e-12));
  }
  SUBCASE("daganzo flat branch") {
    const FdParams d = FdParams::presentation(
        FdFamily::daganzo, 38.0, 0.0, 135.0, 1000.0, wave_speed_congested(38.0, 135.0, 1000.0));
    const double kl = ka(700.0), kr = ka(30.0);
    // Fan edges: -omega on the left, v_max on the right.
    CHECK(riemann_density(d, kl, kr, -d.omega - 1e-9) == doctest::Approx(kl));
    CHECK(riemann_density(d, kl, kr, d.v_max + 1e-9) == doctest::Approx(kr));
    CHECK(riemann_density(d, kl, kr, 0.5 * (d.v_max - d.omega)) == doctest::Approx(d.k_crit));
  }
}
