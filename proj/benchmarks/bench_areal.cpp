#include <benchmark/benchmark.h>

#include "areal/ctm.hpp"
#include "areal/front_tracking.hpp"
#include "areal/units.hpp"
#include "areal/waves.hpp"

namespace {

areal::FdParams chennai_stream() {
  return areal::FdParams::presentation(areal::FdFamily::smulders, 45.0, 21.0, 255.0, 1000.0,
                                       areal::wave_speed_congested(21.0, 255.0, 1000.0));
}

void BM_SpeedAt(benchmark::State& state) {
  const areal::FdParams params = chennai_stream();
  double k = 0.0;
  for (auto _ : state) {
    k += 1e-4;
    if (k > params.k_jam) k = 0.0;
    benchmark::DoNotOptimize(areal::speed_at(params, k));
  }
}
BENCHMARK(BM_SpeedAt);

void BM_InterfaceFlux(benchmark::State& state) {
  const areal::FdParams params = chennai_stream();
  double k = 0.0;
  for (auto _ : state) {
    k += 1e-4;
    if (k > params.k_jam) k = 0.0;
    benchmark::DoNotOptimize(areal::interface_flux(params, k, params.k_jam - k));
  }
}
BENCHMARK(BM_InterfaceFlux);

void BM_SolveRiemann(benchmark::State& state) {
  const areal::FdParams params = chennai_stream();
  for (auto _ : state) {
    benchmark::DoNotOptimize(areal::solve_riemann(params, 0.6, 0.1));
  }
}
BENCHMARK(BM_SolveRiemann);

void BM_CtmStep(benchmark::State& state) {
  areal::Scenario scenario = areal::paper_scenario_1();
  areal::CtmSimulator sim(scenario);
  for (auto _ : state) {
    sim.step();
  }
  state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(scenario.cell_count));
}
BENCHMARK(BM_CtmStep);

void BM_MocThreeState(benchmark::State& state) {
  const areal::FdParams params = chennai_stream();
  areal::PiecewiseInitialCondition init;
  init.domain_min = 0.0;
  init.domain_max = 2000.0;
  init.breaks = {600.0, 1200.0};
  init.densities = {0.1, 0.6, 0.1};
  areal::FrontTrackingOptions options;
  options.n_fan = int(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(areal::moc_solve(params, init, 60.0, options));
  }
}
BENCHMARK(BM_MocThreeState)->Arg(8)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
