#include <benchmark/benchmark.h>

#include "nyopsim/experiment.hpp"

namespace {

using namespace nyopsim;

void BM_Negotiate(benchmark::State& state) {
  const MarketCalibration cal;
  const DemandCurve demand = calibrate_demand(cal);
  const SupplyCurve supply = calibrate_supply(cal);
  const NegotiationConfig cfg;
  double q = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(negotiate(demand, supply, q, cfg));
    q = q >= 170.0 ? 1.0 : q + 1.0;
  }
}
BENCHMARK(BM_Negotiate);

void BM_SingleRun(benchmark::State& state) {
  SimConfig cfg;
  cfg.scenario = state.range(0) ? Scenario::Nyop : Scenario::Baseline;
  for (auto _ : state) benchmark::DoNotOptimize(run(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.horizon);
}
BENCHMARK(BM_SingleRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SmallSweep(benchmark::State& state) {
  SweepSpec spec;
  spec.t_values = {5, 10, 15};
  spec.replications = 4;
  spec.base.horizon = 300;
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec));
}
BENCHMARK(BM_SmallSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
