#include <doctest.h>

#include <cmath>
#include <vector>

#include "areal/fd.hpp"
#include "areal/units.hpp"

using namespace areal;

namespace {

FdParams chennai_stream_table() {
  // Table values with the reported (free) omega = 7.5.
  return FdParams::presentation(FdFamily::smulders, 45.0, 21.0, 255.0, 1000.0, 7.5);
}

FdParams smulders_consistent(double v_max, double v_crit, double ka_crit, double ka_jam) {
  return FdParams::presentation(FdFamily::smulders, v_max, v_crit, ka_crit, ka_jam,
                                wave_speed_congested(v_crit, ka_crit, ka_jam));
}

double speed_kmh(const FdParams& p, double ka_presentation) {
  return units::ms_to_kmh(speed_at(p, units::ka_to_si(ka_presentation)));
}

}  // namespace

TEST_CASE("smulders speed fixtures, Chennai stream") {
  const FdParams p = chennai_stream_table();
  CHECK(speed_kmh(p, 0.0) == doctest::Approx(45.0));
  CHECK(speed_kmh(p, 255.0) == doctest::Approx(21.0).epsilon(1e-12));
  CHECK(speed_kmh(p, 500.0) == doctest::Approx(7.5).epsilon(1e-12));
  CHECK_THROWS_AS(speed_at(p, units::ka_to_si(1001.0)), DomainError);
  CHECK_THROWS_AS(speed_at(p, -0.1), DomainError);
}

TEST_CASE("wave speed formula") {
  // Table 5 fixture: TW Chennai.
  CHECK(wave_speed_congested(29.0, 170.0, 1000.0) == doctest::Approx(5.94).epsilon(0.002));
  // Surat stream: formula gives 5.25 against the reported 5.2.
  CHECK(wave_speed_congested(21.0, 200.0, 1000.0) == doctest::Approx(5.25).epsilon(1e-12));
  CHECK(wave_speed_congested(1e-9, 200.0, 1000.0) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK_THROWS_AS(wave_speed_congested(20.0, 1000.0, 1000.0), DomainError);
}

TEST_CASE("class-specific speeds at the total density") {
  CategoryFdSet set;
  set.k_jam = units::ka_to_si(1000.0);
  set.categories.push_back(
      {"cars", FdParams::presentation(FdFamily::smulders, 49.0, 25.0, 200.0, 1000.0, 5.25)});
  set.categories.push_back(
      {"HVs", FdParams::presentation(FdFamily::smulders, 49.0, 23.0, 250.0, 1000.0, 7.67)});
  set.validate();
  CHECK(units::ms_to_kmh(class_speed_at(set, 0, 0.0)) == doctest::Approx(49.0));
  CHECK(units::ms_to_kmh(class_speed_at(set, 1, units::ka_to_si(250.0))) ==
        doctest::Approx(23.0).epsilon(1e-12));
  // Congested branch arithmetic with the table omega.
  CHECK(units::ms_to_kmh(class_speed_at(set, 0, units::ka_to_si(300.0))) ==
        doctest::Approx(12.25).epsilon(1e-12));
  CHECK(class_flow_at(set, 0, 0.0, 0.0) == 0.0);
}

TEST_CASE("class wave-speed ordering from the calibrated tables") {
  // omega derived from the calibrated (v_crit, k_crit) per location;
  // largest vehicles carry the fastest congestion wave.
  struct Row {
    double v_crit, ka_crit;
  };
  const std::vector<std::vector<Row>> locations = {
      {{29.0, 170.0}, {25.0, 200.0}, {23.0, 250.0}},     // Chennai: TW, car, HV
      {{19.5, 193.0}, {19.7, 195.0}, {20.0, 210.0}},     // Surat
      {{29.4, 170.0}, {25.6, 195.0}, {30.0, 200.0}},     // Guwahati
  };
  for (const auto& rows : locations) {
    const double tw = wave_speed_congested(rows[0].v_crit, rows[0].ka_crit, 1000.0);
    const double car = wave_speed_congested(rows[1].v_crit, rows[1].ka_crit, 1000.0);
    const double hv = wave_speed_congested(rows[2].v_crit, rows[2].ka_crit, 1000.0);
    CHECK(hv > car);
    CHECK(car > tw);
  }
}

TEST_CASE("speed is non-increasing for every family") {
  const std::vector<FdParams> all = {
      FdParams::presentation(FdFamily::greenshields, 38.0, 0.0, 0.0, 1000.0, 0.0),
      FdParams::presentation(FdFamily::greenberg, 0.0, 14.5, 0.0, 1000.0, 0.0),
      FdParams::presentation(FdFamily::underwood, 50.0, 0.0, 290.0, 0.0, 0.0),
      FdParams::presentation(FdFamily::del_castillo, 40.0, 0.0, 0.0, 1000.0, 6.4),
      FdParams::presentation(FdFamily::daganzo, 38.0, 0.0, 135.0, 1000.0, 5.9),
      chennai_stream_table(),
  };
  for (const FdParams& p : all) {
    const double k_hi = p.k_jam > 0.0 ? p.k_jam : units::ka_to_si(1200.0);
    double prev = 1e300;
    for (int i = 1; i <= 400; ++i) {
      const double k = k_hi * double(i) / 400.0;
      const double v = speed_at(p, k);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("flow vanishes at jam density for bounded families") {
  const std::vector<FdParams> bounded = {
      FdParams::presentation(FdFamily::greenshields, 38.0, 0.0, 0.0, 1000.0, 0.0),
      FdParams::presentation(FdFamily::greenberg, 0.0, 14.5, 0.0, 1000.0, 0.0),
      FdParams::presentation(FdFamily::del_castillo, 40.0, 0.0, 0.0, 1000.0, 6.4),
      FdParams::presentation(FdFamily::daganzo, 38.0, 0.0, 135.0, 1000.0, 5.9),
      smulders_consistent(45.0, 21.0, 255.0, 1000.0),
  };
  for (const FdParams& p : bounded) {
    CHECK(flow_at(p, p.k_jam) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(flow_at(p, 0.0) == 0.0);
  }
}

TEST_CASE("greenberg needs positive density for a speed") {
  const FdParams p = FdParams::presentation(FdFamily::greenberg, 0.0, 14.5, 0.0, 1000.0, 0.0);
  CHECK_THROWS_AS(speed_at(p, 0.0), DomainError);
  CHECK(flow_at(p, 0.0) == 0.0);
  // Del Castillo has the v_max limit instead.
  const FdParams dc = FdParams::presentation(FdFamily::del_castillo, 40.0, 0.0, 0.0, 1000.0, 6.4);
  CHECK(units::ms_to_kmh(speed_at(dc, 0.0)) == doctest::Approx(40.0));
  CHECK(units::ms_to_kmh(speed_at(dc, units::ka_to_si(1e-6))) == doctest::Approx(40.0));
}

TEST_CASE("continuity at the critical density with formula omega") {
  const FdParams p = smulders_consistent(45.0, 21.0, 255.0, 1000.0);
  const double below = speed_at(p, p.k_crit * (1.0 - 1e-12));
  const double above = speed_at(p, p.k_crit * (1.0 + 1e-12));
  CHECK(std::abs(below - above) <= 1e-9 * std::abs(below));
  CHECK(has_continuous_flux(p));
  CHECK_FALSE(has_continuous_flux(chennai_stream_table()));

  const FdParams d = FdParams::presentation(
      FdFamily::daganzo, 38.0, 0.0, 135.0, 1000.0, wave_speed_congested(38.0, 135.0, 1000.0));
  CHECK(has_continuous_flux(d));
}

TEST_CASE("flow is concave for the continuous two-regime families") {
  const FdParams p = smulders_consistent(45.0, 21.0, 255.0, 1000.0);
  for (int i = 0; i <= 100; ++i) {
    for (int j = i + 2; j <= 100; j += 7) {
      const double a = p.k_jam * double(i) / 100.0;
      const double b = p.k_jam * double(j) / 100.0;
      const double mid = 0.5 * (a + b);
      CHECK(flow_at(p, mid) >= 0.5 * (flow_at(p, a) + flow_at(p, b)) - 1e-12);
    }
  }
}

TEST_CASE("capacity and critical density are consistent") {
  const std::vector<FdParams> all = {
      FdParams::presentation(FdFamily::greenshields, 38.0, 0.0, 0.0, 1000.0, 0.0),
      FdParams::presentation(FdFamily::greenberg, 0.0, 14.5, 0.0, 1000.0, 0.0),
      FdParams::presentation(FdFamily::underwood, 50.0, 0.0, 290.0, 0.0, 0.0),
      FdParams::presentation(FdFamily::del_castillo, 40.0, 0.0, 0.0, 1000.0, 6.4),
      FdParams::presentation(FdFamily::daganzo, 38.0, 0.0, 135.0, 1000.0,
                             wave_speed_congested(38.0, 135.0, 1000.0)),
      smulders_consistent(45.0, 21.0, 255.0, 1000.0),
  };
  for (const FdParams& p : all) {
    const double k_crit = critical_density(p);
    const double q_max = capacity(p);
    CHECK(q_max > 0.0);
    // No sampled flow beats the capacity.
    const double k_hi = p.k_jam > 0.0 ? p.k_jam : 3.0 * k_crit;
    for (int i = 0; i <= 500; ++i)
      CHECK(flow_at(p, k_hi * double(i) / 500.0) <= q_max * (1.0 + 1e-9));
    CHECK(flow_at(p, k_crit) == doctest::Approx(q_max).epsilon(1e-9));
  }
}

TEST_CASE("category set validation") {
  CategoryFdSet set;
  set.k_jam = units::ka_to_si(1000.0);
  set.categories.push_back(
      {"cars", FdParams::presentation(FdFamily::smulders, 49.0, 25.0, 200.0, 900.0, 5.25)});
  CHECK_THROWS_AS(set.validate(), DomainError);
  CHECK_THROWS_AS(fd_family_from_string("parabolic"), ParseError);
}
