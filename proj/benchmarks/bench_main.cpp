#include <benchmark/benchmark.h>

#include "aoimf/mean_field.hpp"
#include "aoimf/occupation_lp.hpp"
#include "aoimf/phy.hpp"
#include "aoimf/rng.hpp"
#include "aoimf/success_table.hpp"

using namespace aoimf;

namespace {

SystemConfig bench_config(bool fading) {
  SystemConfig cfg;
  cfg.noise_power = 0.5;
  cfg.rician_k = fading ? 10.0 : -1.0;
  return cfg;
}

SuccessTable bench_table() {
  SuccessTable t;
  for (double v = 0.0; v <= 24.0; v += 2.0) t.load_grid.push_back(v);
  t.actions = action_set(3, 3);
  t.p_hat.assign(t.actions.size(), std::vector<double>(t.load_grid.size(), 0.0));
  for (std::size_t a = 1; a < t.actions.size(); ++a) {
    const Action act = t.actions[a];
    const double base = 1.0 - std::pow(0.5, act.energy()) + 0.02 * (act.q - act.d);
    for (std::size_t g = 0; g < t.load_grid.size(); ++g)
      t.p_hat[a][g] =
          std::clamp(base * std::exp(-0.05 * act.energy() * t.load_grid[g]), 0.0, 1.0);
  }
  t.trials = 1;
  return t;
}

void BM_FrameSuccess(benchmark::State& state) {
  const SystemConfig cfg = bench_config(true);
  const double lambda = static_cast<double>(state.range(0));
  std::mt19937_64 rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(frame_success({2, 2}, lambda, cfg, rng));
}
BENCHMARK(BM_FrameSuccess)->Arg(0)->Arg(8)->Arg(24);

void BM_SicPool(benchmark::State& state) {
  const SystemConfig cfg = bench_config(true);
  std::mt19937_64 rng(2);
  std::vector<Replica> replicas;
  detail::append_pool_background(static_cast<double>(state.range(0)), cfg, 0, rng(), 1,
                                 replicas);
  for (auto _ : state) benchmark::DoNotOptimize(run_sic_pool(replicas, cfg));
}
BENCHMARK(BM_SicPool)->Arg(8)->Arg(16)->Arg(32);

void BM_RelativeValueIteration(benchmark::State& state) {
  const SuccessTable table = bench_table();
  const MdpModel model = build_model(table, 8.0, 0.5, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(relative_value_iteration(model));
}
BENCHMARK(BM_RelativeValueIteration)->Arg(50)->Arg(200);

void BM_OccupationLp(benchmark::State& state) {
  const SuccessTable table = bench_table();
  const MdpModel model = build_model(table, 8.0, 0.5, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(occupation_lp_solve(model));
}
BENCHMARK(BM_OccupationLp)->Arg(10)->Arg(20);

void BM_SolveEquilibrium(benchmark::State& state) {
  const SuccessTable table = bench_table();
  const PopulationConfig pop{30, 3, 1.0};
  const FixedPointConfig fp;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_equilibrium(0.5, table, pop, fp, 200));
}
BENCHMARK(BM_SolveEquilibrium);

}  // namespace

BENCHMARK_MAIN();
