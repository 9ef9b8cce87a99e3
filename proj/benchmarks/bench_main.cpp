#include <benchmark/benchmark.h>

#include <cmath>

#include "cqmc/qmc.hpp"
#include "cqmc/reduction.hpp"
#include "cqmc/transition.hpp"

namespace {

const cqmc::ModelParams k2t4 = cqmc::ModelParams::from_theta(2, 4.0);

void BM_OracleWeights(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto bc = cqmc::boundary_condition(k2t4, cqmc::BoundaryKind::Gamma);
  for (auto _ : state) {
    auto st = cqmc::oracle_weights(k2t4, bc, n);
    benchmark::DoNotOptimize(st.weights().data());
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << ((2 << n) - 1)));
}
BENCHMARK(BM_OracleWeights)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_EvaluateLeaf(benchmark::State& state) {
  const auto st = cqmc::oracle_weights(k2t4, cqmc::boundary_condition(k2t4, cqmc::BoundaryKind::Gamma), 3);
  const auto leaf = cqmc::leaf_sigma_z_observable(2);
  for (auto _ : state) benchmark::DoNotOptimize(cqmc::evaluate_state(st, leaf));
}
BENCHMARK(BM_EvaluateLeaf)->Unit(benchmark::kMicrosecond);

void BM_PairwiseSum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(cqmc::pairwise_sum(n, [](std::size_t i) { return std::sqrt(double(i)); }, workers));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_PairwiseSum)->Args({1 << 22, 1})->Args({1 << 22, 4})->Unit(benchmark::kMillisecond);

void BM_TransferPower(benchmark::State& state) {
  const auto tm = cqmc::build_transfer_matrix(k2t4, cqmc::find_fixed_points(k2t4).t3->t);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cqmc::transfer_power(tm, k2t4, n));
}
BENCHMARK(BM_TransferPower)->Arg(30)->Arg(1000);

void BM_TransferPowerIterated(benchmark::State& state) {
  const auto tm = cqmc::build_transfer_matrix(k2t4, cqmc::find_fixed_points(k2t4).t3->t);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cqmc::transfer_power_iterated(tm, n));
}
BENCHMARK(BM_TransferPowerIterated)->Arg(30)->Arg(1000);

void BM_FixedPointSweep(benchmark::State& state) {
  for (auto _ : state) {
    int roots = 0;
    for (int i = 0; i <= 1000; ++i) {
      roots += cqmc::find_fixed_points(cqmc::ModelParams::from_theta(2, 2.5 + 1e-3 * i)).count();
    }
    benchmark::DoNotOptimize(roots);
  }
}
BENCHMARK(BM_FixedPointSweep)->Unit(benchmark::kMillisecond);

void BM_PhaseDiagram(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cqmc::phase_diagram(3, 1.5, 6.0, 0.01));
}
BENCHMARK(BM_PhaseDiagram)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
