#include <benchmark/benchmark.h>

#include "rmab/bound.hpp"
#include "rmab/regret.hpp"
#include "rmab/scenario.hpp"

namespace {

void BM_ChainStats(benchmark::State& state) {
  const auto arms = rmab::random_reversible_arms(1, static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(rmab::chain_stats(arms[0]));
}
BENCHMARK(BM_ChainStats)->Arg(2)->Arg(20)->Arg(100);

void BM_BoundConstants(benchmark::State& state) {
  const auto inst = rmab::make_instance(rmab::load_scenario("fig_10arm").arms, 0.01, 0.001);
  for (auto _ : state) benchmark::DoNotOptimize(rmab::bound_constants(inst));
}
BENCHMARK(BM_BoundConstants);

// Slots per second of a full episode, arg = policy kind.
void BM_Episode(benchmark::State& state) {
  const auto inst = rmab::make_instance(rmab::load_scenario("fig_5arm").arms);
  rmab::PolicyConfig cfg;
  cfg.kind = static_cast<rmab::PolicyKind>(state.range(0));
  cfg.l_override = 1.0;
  cfg.delta = 0.1;
  constexpr std::uint64_t kHorizon = 100000;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    auto p = rmab::make_policy(cfg, inst, seed);
    benchmark::DoNotOptimize(rmab::run_episode(inst, *p, kHorizon, seed++));
  }
  state.SetItemsProcessed(state.iterations() * kHorizon);
  state.SetLabel(std::string(rmab::to_string(cfg.kind)));
}
BENCHMARK(BM_Episode)
    ->DenseRange(0, 4)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
