// Serial reference kernels vs their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <vector>

#include "cimqubo/annealer.hpp"
#include "cimqubo/brute_force.hpp"
#include "cimqubo/converters.hpp"
#include "cimqubo/graph.hpp"
#include "cimqubo/qubo.hpp"
#include "cimqubo/rng.hpp"

namespace {

cimq::QuboProblem random_maxcut(std::size_t n, double p, std::uint64_t seed) {
  cimq::Rng rng(seed);
  cimq::Graph g(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < p) g.add_edge(i, j);
  return cimq::maxcut_to_qubo(g);
}

std::vector<cimq::BinaryVector> random_batch(std::size_t n, std::size_t count, std::uint64_t seed) {
  cimq::Rng rng(seed);
  std::vector<cimq::BinaryVector> xs(count, cimq::BinaryVector(n));
  for (auto& x : xs)
    for (auto& b : x) b = static_cast<cimq::Bit>(rng.below(2));
  return xs;
}

void BM_BruteForceSerial(benchmark::State& state) {
  const auto q = random_maxcut(static_cast<std::size_t>(state.range(0)), 0.3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(cimq::serial::brute_force_minimize(q));
}

void BM_BruteForceParallel(benchmark::State& state) {
  const auto q = random_maxcut(static_cast<std::size_t>(state.range(0)), 0.3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(cimq::brute_force_minimize(q));
}

void BM_EnergiesSerial(benchmark::State& state) {
  const auto q = random_maxcut(200, 0.1, 2);
  const auto xs = random_batch(200, static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(cimq::serial::energies(q, xs));
}

void BM_EnergiesParallel(benchmark::State& state) {
  const auto q = random_maxcut(200, 0.1, 2);
  const auto xs = random_batch(200, static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(cimq::energies(q, xs));
}

void BM_RunTrials(benchmark::State& state) {
  const auto q = random_maxcut(60, 0.1, 4);
  const auto oracle = cimq::make_exact_oracle(q);
  cimq::AnnealConfig cfg;
  cfg.max_iters = 2000;
  const auto jobs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cimq::run_trials(oracle, q.n(), cfg, cimq::Solver::Mesa, 16, jobs));
}

}  // namespace

BENCHMARK(BM_BruteForceSerial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BruteForceParallel)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnergiesSerial)->Arg(1024)->Arg(16384)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EnergiesParallel)->Arg(1024)->Arg(16384)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_RunTrials)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
