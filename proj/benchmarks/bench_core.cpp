#include <limits>

#include <benchmark/benchmark.h>

#include "optomech/dynamics.hpp"
#include "optomech/figures.hpp"
#include "optomech/measures.hpp"
#include "optomech/model.hpp"
#include "optomech/sweep.hpp"

namespace {

using namespace optomech;

void BM_DeriveParams(benchmark::State& state) {
  const PhysicalParams p = fig4_params();
  for (auto _ : state) benchmark::DoNotOptimize(derive_params(p));
}
BENCHMARK(BM_DeriveParams);

void BM_SteadyState(benchmark::State& state) {
  const PhysicalParams p = fig4_params();
  const DerivedParams d = derive_params(p);
  const DriftMatrix m = build_drift(p, d);
  const DiffusionMatrix diff = build_diffusion(p, d);
  for (auto _ : state) benchmark::DoNotOptimize(steady_state(m, diff));
}
BENCHMARK(BM_SteadyState);

void BM_Nonlocality(benchmark::State& state) {
  const PhysicalParams p = fig4_params();
  const DerivedParams d = derive_params(p);
  const CovarianceMatrix v = steady_state(build_drift(p, d), build_diffusion(p, d));
  const ModePair pair{Mode::A2, Mode::B};
  for (auto _ : state) benchmark::DoNotOptimize(nonlocality(v, pair));
}
BENCHMARK(BM_Nonlocality);

void BM_EvaluatePoint(benchmark::State& state) {
  const PhysicalParams p = fig4_params();
  const ModePair pair{Mode::A2, Mode::B};
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_point(p, pair, Outputs{}, kRegionThreshold));
  }
}
BENCHMARK(BM_EvaluatePoint);

// Time horizon in units of 1/ω_m.
void BM_Evolve(benchmark::State& state) {
  const PhysicalParams p = fig2_params();
  const DerivedParams d = derive_params(p);
  const DriftMatrix m = build_drift(p, d);
  const DiffusionMatrix diff = build_diffusion(p, d);
  DtPolicy policy;
  policy.stride = std::numeric_limits<std::size_t>::max();
  policy.check_step_halving = false;
  const double t_max = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(m, diff, initial_state(p.mbar), t_max, policy));
  }
}
BENCHMARK(BM_Evolve)->Arg(10)->Arg(100);

void BM_Sweep(benchmark::State& state) {
  SweepSpec spec = figure_recipe("fig4a", static_cast<std::size_t>(state.range(0))).sweep;
  spec.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_Sweep)->Arg(11)->Arg(41)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
