#include <benchmark/benchmark.h>

#include <combforge/channel.hpp>
#include <combforge/strategy.hpp>
#include <combforge/strategy_sdp.hpp>

using namespace combforge;

static void BM_PartialTrace(benchmark::State& state) {
  const Index d = state.range(0);
  CounterRng rng(1);
  HermitianOperator rho =
      random_density(Layout({{"A", d}, {"B", d}}), d * d, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(partial_trace(rho, {"B"}));
  }
}
BENCHMARK(BM_PartialTrace)->Arg(4)->Arg(8)->Arg(16);

static void BM_TensorProduct(benchmark::State& state) {
  const Index d = state.range(0);
  CounterRng rng(2);
  HermitianOperator a = random_density(Layout::single("A", d), d, rng);
  HermitianOperator b = random_density(Layout::single("B", d), d, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tensor_product(a, b));
  }
}
BENCHMARK(BM_TensorProduct)->Arg(4)->Arg(8)->Arg(16);

static void BM_StrategyFromChannels(benchmark::State& state) {
  CounterRng rng(3);
  RoundStructure rounds({{"X1", 2, "Y1", 2}, {"X2", 2, "Y2", 2}});
  for (auto _ : state) {
    CounterRng local = rng;
    benchmark::DoNotOptimize(random_strategy(rounds, {2}, local));
  }
}
BENCHMARK(BM_StrategyFromChannels);

static void BM_StrategySdp(benchmark::State& state) {
  const Index d = state.range(0);
  CounterRng rng(4);
  RoundStructure rounds({{"X1", d, "Y1", d}});
  ComplexMatrix u = random_pure_state(rounds.strategy_layout(), rng);
  HermitianOperator h = HermitianOperator::from_symmetrized(
      u.rows, u.m * u.m.adjoint());
  for (auto _ : state) {
    benchmark::DoNotOptimize(optimal_strategy_value(h, rounds));
  }
}
BENCHMARK(BM_StrategySdp)->Arg(2)->Arg(3);

BENCHMARK_MAIN();
