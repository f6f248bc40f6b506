#include <benchmark/benchmark.h>

#include "nskd/attack.hpp"
#include "nskd/correlations.hpp"
#include "nskd/keyrate.hpp"
#include "nskd/nsbox.hpp"
#include "nskd/simulator.hpp"

namespace {

void BM_QuantumBox(benchmark::State& state) {
  const nskd::WernerParameter w(0.9);
  const auto scheme = nskd::MeasurementScheme::chained(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto box = nskd::quantum_box(w, scheme);
    benchmark::DoNotOptimize(box.table.data());
  }
}
BENCHMARK(BM_QuantumBox)->Arg(2)->Arg(5)->Arg(10);

void BM_ChainValue(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto box = nskd::quantum_box(nskd::WernerParameter(0.9),
                                     nskd::MeasurementScheme::chained(n));
  for (auto _ : state) benchmark::DoNotOptimize(nskd::chain_value(box, n));
}
BENCHMARK(BM_ChainValue)->Arg(2)->Arg(10);

void BM_KeyRatePreprocessed(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(nskd::key_rate_preprocessed(2, 0.9).key_rate);
}
BENCHMARK(BM_KeyRatePreprocessed);

void BM_Threshold(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(nskd::threshold(3, false));
}
BENCHMARK(BM_Threshold);

void BM_MinChainLp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(nskd::min_chain_given_marginal(n, 0.75));
}
BENCHMARK(BM_MinChainLp)->Arg(2)->Arg(3)->Arg(4);

void BM_BuildAttackMixture(benchmark::State& state) {
  const auto box = nskd::quantum_box(nskd::WernerParameter(1.0),
                                     nskd::MeasurementScheme::chained(2));
  for (auto _ : state) {
    auto d = nskd::build_attack_mixture(box);
    benchmark::DoNotOptimize(d.components.size());
  }
}
BENCHMARK(BM_BuildAttackMixture);

void BM_SimulatorRun(benchmark::State& state) {
  nskd::ProtocolConfig config;
  config.n = 2;
  config.p = 0.9;
  config.rounds = state.range(0);
  config.seed = 42;
  for (auto _ : state) {
    auto result = nskd::run(config);
    benchmark::DoNotOptimize(result.report.chain_est);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatorRun)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
