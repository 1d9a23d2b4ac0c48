#include <doctest.h>

#include <cmath>
#include <vector>

#include "areal/measures.hpp"
#include "areal/units.hpp"

using namespace areal;

namespace {

VehicleCategory car() { return {"car", 4.7, 1.7, units::kmh_to_ms(65), units::kmh_to_ms(3)}; }
VehicleCategory tw() { return {"TW", 1.8, 0.6, units::kmh_to_ms(65), units::kmh_to_ms(5)}; }
VehicleCategory bus() { return {"bus", 10.5, 2.5, units::kmh_to_ms(50), units::kmh_to_ms(3)}; }

Trajectory straight_line(std::string id, VehicleCategory cat, double t0, double x0, double v,
                         double duration) {
  Trajectory traj;
  traj.vehicle_id = std::move(id);
  traj.category = std::move(cat);
  traj.samples = {{t0, x0}, {t0 + duration, x0 + v * duration}};
  return traj;
}

VehicleCategory square_vehicle(double area) {
  VehicleCategory cat{"synthetic", std::sqrt(area), std::sqrt(area), 30.0, 0.0};
  return cat;
}

}  // namespace

TEST_CASE("projected areas of the observed vehicle classes") {
  CHECK(projected_area(car()) == doctest::Approx(7.99));
  CHECK(projected_area(tw()) == doctest::Approx(1.08));
  CHECK(projected_area(bus()) == doctest::Approx(26.25));
}

TEST_CASE("areal flow of three vehicles crossing a short section") {
  // Independent oracle: the area-sum definition sum(a_i) / (dt * w) for a
  // section every vehicle fully traverses.
  const RegionVolume region{0.0, 1.0, 0.0, 60.0, 10.5};
  std::vector<Trajectory> trajectories;
  const VehicleCategory eight = square_vehicle(8.0);
  for (int i = 0; i < 3; ++i)
    trajectories.push_back(straight_line("v" + std::to_string(i), eight, 5.0 * double(i) ,
                                         -10.0, 10.0, 10.0));
  const double oracle_si = 3.0 * 8.0 / (60.0 * 10.5);
  const double q = areal_flow(trajectories, region);
  CHECK(q == doctest::Approx(oracle_si).epsilon(1e-12));
  CHECK(units::qa_to_presentation(q) == doctest::Approx(137.142857).epsilon(1e-6));
}

TEST_CASE("areal flow edge cases") {
  const RegionVolume region{0.0, 100.0, 0.0, 60.0, 10.5};
  CHECK(areal_flow({}, region) == 0.0);

  Trajectory parked = straight_line("p", square_vehicle(8.0), 0.0, 50.0, 0.0, 60.0);
  std::vector<Trajectory> trajectories{parked};
  CHECK(areal_flow(trajectories, region) == 0.0);
  CHECK(areal_density(trajectories, region) > 0.0);
}

TEST_CASE("areal density of two vehicles present the whole interval") {
  // Oracle: snapshot form sum(a_i) / (dx * w).
  const RegionVolume region{0.0, 100.0, 0.0, 60.0, 10.5};
  std::vector<Trajectory> trajectories;
  const VehicleCategory eight = square_vehicle(8.0);
  trajectories.push_back(straight_line("a", eight, -1.0, 20.0, 0.0, 62.0));
  trajectories.push_back(straight_line("b", eight, -1.0, 70.0, 0.0, 62.0));
  const double k = areal_density(trajectories, region);
  CHECK(k == doctest::Approx(16.0 / (100.0 * 10.5)).epsilon(1e-12));
  CHECK(units::ka_to_presentation(k) == doctest::Approx(15.238095).epsilon(1e-6));
}

TEST_CASE("bumper-to-bumper jam stays below the theoretical 1000") {
  // Six files of cars abreast, one car length of road: oracle by explicit
  // placement, 6 * 7.99 / (4.7 * 10.5).
  const RegionVolume region{0.0, 4.7, 0.0, 30.0, 10.5};
  std::vector<Trajectory> jam;
  for (int file = 0; file < 6; ++file)
    jam.push_back(straight_line("f" + std::to_string(file), car(), -1.0, 2.0, 0.0, 32.0));
  const double k = areal_density(jam, region);
  CHECK(units::ka_to_presentation(k) == doctest::Approx(6.0 * 7.99 / (0.0047 * 10.5)));
  CHECK(units::ka_to_presentation(k) < 1000.0);
}

TEST_CASE("areal speed is the flow-density ratio") {
  const double q = units::qa_to_si(137.142857);
  const double k = units::ka_to_si(15.238095);
  CHECK(units::ms_to_kmh(areal_speed(q, k)) == doctest::Approx(9.0).epsilon(1e-6));
  CHECK(areal_speed(0.0, k) == 0.0);
  CHECK(areal_speed(0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(areal_speed(1.0, 0.0), DomainError);
}

TEST_CASE("homogeneous stream: areal measures are scaled Edie measures") {
  // Vehicles with identical area crossing the region completely; the
  // conventional Edie measures are computed from the known entry/exit
  // times, not from the library's clipping.
  const RegionVolume region{0.0, 100.0, 0.0, 50.0, 10.5};
  const VehicleCategory cat = square_vehicle(6.25);
  const double area = projected_area(cat);
  std::vector<Trajectory> trajectories;
  const std::vector<double> speeds{8.0, 10.0, 12.5, 16.0, 20.0};
  double sum_dx = 0.0, sum_dt = 0.0;
  for (std::size_t i = 0; i < speeds.size(); ++i) {
    const double t0 = 2.0 * double(i);
    trajectories.push_back(straight_line("v" + std::to_string(i), cat, t0, 0.0, speeds[i],
                                         region.dx() / speeds[i]));
    sum_dx += region.dx();
    sum_dt += region.dx() / speeds[i];
  }
  const double q_conventional = sum_dx / (region.dx() * region.dt());  // veh/s
  const double k_conventional = sum_dt / (region.dx() * region.dt());  // veh/m

  const double q = areal_flow(trajectories, region);
  const double k = areal_density(trajectories, region);
  CHECK(q == doctest::Approx(area / region.width * q_conventional).epsilon(1e-13));
  CHECK(k == doctest::Approx(area / region.width * k_conventional).epsilon(1e-13));

  // Speed equals total distance over total time regardless of areas.
  const ArealState state = areal_state(trajectories, region);
  CHECK(state.v_a == doctest::Approx(sum_dx / sum_dt).epsilon(1e-13));

  // Conversion helpers are exact inverses on the same figures.
  CHECK(k_from_ka(ka_from_k(k_conventional, area, region.width), area, region.width) ==
        doctest::Approx(k_conventional).epsilon(1e-15));
  CHECK(q_from_qa(qa_from_q(q_conventional, area, region.width), area, region.width) ==
        doctest::Approx(q_conventional).epsilon(1e-15));
}

TEST_CASE("conversion fixtures") {
  // k = 100 veh/km, mean area 7.99, width 10.5 -> 76.1 m^2/(km*m).
  const double ka = ka_from_k(units::k_to_si(100.0), 7.99, 10.5);
  CHECK(units::ka_to_presentation(ka) == doctest::Approx(76.0952381).epsilon(1e-8));
  CHECK(ka_from_k(0.0, 7.99, 10.5) == 0.0);
  CHECK_THROWS_AS(ka_from_k(1.0, 0.0, 10.5), DomainError);
  CHECK_THROWS_AS(ka_from_k(1.0, 7.99, -1.0), DomainError);
}

TEST_CASE("edie window estimates: single vehicle") {
  // One car at 10 m/s through a 50 m window from t = 0, observed for 20 s:
  // volume = T X W - X^2 W / 2 * (2 / v) = 10500 - 2625 = 7875.
  const RegionVolume region{0.0, 50.0, 0.0, 20.0, 10.5};
  std::vector<Trajectory> one{straight_line("solo", square_vehicle(7.99), 0.0, 0.0, 10.0, 20.0)};
  const ArealState state = edie_region_estimates(one, region, EdieMode::distance_window);
  CHECK(state.q_a == doctest::Approx(7.99 * 50.0 / 7875.0).epsilon(1e-12));
  CHECK(state.k_a == doctest::Approx(7.99 * 5.0 / 7875.0).epsilon(1e-12));
  CHECK(state.v_a == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("edie window estimates: homogeneous platoon matches the screenline") {
  // Identical speeds and areas: v_a is exact and the flow equals the
  // area-sum screenline value computed over the effective observation span.
  const double v = 10.0;
  const double headway = 2.0;
  const RegionVolume region{0.0, 50.0, 0.0, 20.0, 10.5};
  const VehicleCategory cat = square_vehicle(8.0);
  std::vector<Trajectory> platoon;
  for (int i = 0; i < 6; ++i)
    platoon.push_back(straight_line("p" + std::to_string(i), cat, headway * double(i), 0.0, v,
                                    region.dx() / v));
  const ArealState state = edie_region_estimates(platoon, region, EdieMode::distance_window);
  CHECK(state.v_a == doctest::Approx(v).epsilon(1e-12));
  // n fully-crossing vehicles over the triangle-corrected volume:
  // q = a * n * X / (X W (T - X/v)).
  const double expect_q = 8.0 * 6.0 / (10.5 * (20.0 - 5.0));
  CHECK(state.q_a == doctest::Approx(expect_q).epsilon(1e-12));
}

TEST_CASE("edie window estimates: error shrinks as the window shrinks") {
  // Dense constant-rate stream; truth is the screenline flow a / (h w).
  const double v = 10.0;
  const double headway = 0.25;
  const VehicleCategory cat = square_vehicle(4.0);
  std::vector<Trajectory> stream;
  for (int i = 0; i < 500; ++i)
    stream.push_back(straight_line("s" + std::to_string(i), cat, headway * double(i) - 20.0,
                                   -40.0, v, 30.0));
  const double truth = 4.0 / (headway * 10.5);
  double previous_error = 1e300;
  for (const double window : {80.0, 40.0, 20.0, 10.0}) {
    const RegionVolume region{0.0, window, 0.0, 100.0, 10.5};
    const ArealState state = edie_region_estimates(stream, region, EdieMode::distance_window);
    const double error = std::abs(state.q_a - truth);
    CHECK(error < previous_error);
    previous_error = error;
  }
}

TEST_CASE("edie window estimates: time window mode") {
  const double v = 12.0;
  const RegionVolume region{0.0, 400.0, 10.0, 20.0, 10.5};
  const VehicleCategory cat = square_vehicle(8.0);
  std::vector<Trajectory> group;
  for (int i = 0; i < 4; ++i)
    group.push_back(straight_line("g" + std::to_string(i), cat, 0.0, 30.0 * double(i) + 20.0,
                                  v, 40.0));
  const ArealState state = edie_region_estimates(group, region, EdieMode::time_window);
  // volume = T X W - T^2 W / 2 * (v_first + v_last); all speeds equal.
  const double vol = 10.0 * 400.0 * 10.5 - 100.0 * 10.5 / 2.0 * (2.0 * v);
  CHECK(state.q_a == doctest::Approx(8.0 * 4.0 * v * 10.0 / vol).epsilon(1e-12));
  CHECK(state.k_a == doctest::Approx(8.0 * 4.0 * 10.0 / vol).epsilon(1e-12));
  CHECK(state.v_a == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("edie window rejects degenerate setups") {
  const RegionVolume region{0.0, 50.0, 0.0, 6.0, 10.5};
  std::vector<Trajectory> slow{straight_line("x", square_vehicle(8.0), 0.0, 0.0, 10.0, 5.0)};
  // Transit takes 5 s of a 6 s horizon: the triangle cutout swamps the box.
  CHECK_THROWS_AS(edie_region_estimates(slow, region, EdieMode::distance_window), DomainError);
  CHECK(edie_region_estimates({}, region, EdieMode::distance_window).k_a == 0.0);
}

TEST_CASE("occupancy fixtures") {
  // Homogeneous closed form: 0.0761 * (10.5 / 1.7) * (1 + 2 / 4.7).
  const double oc = occupancy_homogeneous(0.0761, 10.5, 4.7, 1.7, 2.0);
  CHECK(oc == doctest::Approx(0.670057).epsilon(1e-4));
  CHECK(occupancy_homogeneous(0.0761, 10.5, 4.7, 1.7, 0.0) ==
        doctest::Approx(0.0761 * 10.5 / 1.7).epsilon(1e-12));
  CHECK(occupancy({}, 2.0, 60.0) == 0.0);

  // General sum against the closed form on a synthetic homogeneous stream.
  std::vector<DetectorPassage> passages;
  const double interval = 120.0;
  for (int i = 0; i < 40; ++i)
    passages.push_back({3.0 * double(i), 4.7, 1.7, 9.0 + 0.1 * double(i % 7)});
  double inv_speed_sum = 0.0;
  for (const DetectorPassage& p : passages) inv_speed_sum += 1.0 / p.speed;
  const double k_conventional = inv_speed_sum / interval;  // veh/m at the detector
  const double k_a = ka_from_k(k_conventional, 4.7 * 1.7, 10.5);
  const double general = occupancy(passages, 2.0, interval);
  CHECK(general == doctest::Approx(occupancy_homogeneous(k_a, 10.5, 4.7, 1.7, 2.0))
                       .epsilon(1e-12));

  DetectorPassage stopped{0.0, 4.7, 1.7, 0.0};
  std::vector<DetectorPassage> bad{stopped};
  CHECK_THROWS_AS(occupancy(bad, 2.0, 60.0), DomainError);
}

TEST_CASE("area occupancy fixtures") {
  CHECK(area_occupancy_homogeneous(0.0761, 4.7, 2.0) ==
        doctest::Approx(0.0761 * (1.0 + 2.0 / 4.7)).epsilon(1e-12));
  CHECK(area_occupancy_homogeneous(0.0761, 4.7, 0.0) == doctest::Approx(0.0761).epsilon(1e-15));

  std::vector<DetectorPassage> passages;
  const double interval = 90.0;
  for (int i = 0; i < 30; ++i)
    passages.push_back({3.0 * double(i), 4.7, 1.7, 8.0 + 0.2 * double(i % 5)});
  double inv_speed_sum = 0.0;
  for (const DetectorPassage& p : passages) inv_speed_sum += 1.0 / p.speed;
  const double k_a = ka_from_k(inv_speed_sum / interval, 4.7 * 1.7, 10.5);
  const double general = area_occupancy(passages, 2.0, 10.5, interval);
  CHECK(general == doctest::Approx(area_occupancy_homogeneous(k_a, 4.7, 2.0)).epsilon(1e-12));
  // ao exceeds k_a whenever the detector has any length.
  CHECK(general > k_a);
}

TEST_CASE("region and trajectory validation") {
  CHECK_THROWS_AS((RegionVolume{10.0, 5.0, 0.0, 1.0, 10.5}).validate(), DomainError);
  CHECK_THROWS_AS((RegionVolume{0.0, 5.0, 0.0, 1.0, 0.0}).validate(), DomainError);
  Trajectory bad;
  bad.vehicle_id = "b";
  bad.category = car();
  bad.samples = {{0.0, 0.0}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.samples = {{0.0, 10.0}, {1.0, 5.0}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
}
