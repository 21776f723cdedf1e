#include <benchmark/benchmark.h>
#include <omp.h>

#include "costshare/approx.hpp"
#include "costshare/fixtures.hpp"
#include "random_games.hpp"

using namespace costshare;

namespace {

const GameInstance& star() {
  static const GameInstance g = fixture("multiwaycut_star_k", 10);
  return g;
}

const GameInstance& set_cover() {
  static const GameInstance g = [] {
    testsupport::Rng rng(7);
    return testsupport::random_set_cover(rng, 10, 10, 9);
  }();
  return g;
}

const GameInstance& facility() {
  static const GameInstance g = [] {
    testsupport::Rng rng(8);
    return testsupport::random_ufl(rng, 7, 4, 9);
  }();
  return g;
}

// Parallel kernels take the thread count from the benchmark argument;
// serial ones ignore it.
void set_threads(const benchmark::State& state) { omp_set_num_threads(static_cast<int>(state.range(0))); }

void BM_CoalitionCostsSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::coalition_costs(set_cover()));
}

void BM_CoalitionCostsParallel(benchmark::State& state) {
  set_threads(state);
  for (auto _ : state) benchmark::DoNotOptimize(coalition_costs(set_cover()));
}

void BM_VerifySeSerial(benchmark::State& state) {
  const auto s = multiwaycut_star_se(star(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(serial::verify_se(star(), s));
}

void BM_VerifySeParallel(benchmark::State& state) {
  set_threads(state);
  const auto s = multiwaycut_star_se(star(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(verify_se(star(), s));
}

void BM_VerifyAlphaBetaSerial(benchmark::State& state) {
  const auto s = approx_se_ufl(facility());
  for (auto _ : state) benchmark::DoNotOptimize(serial::verify_alpha_beta(facility(), s, {3, 3}));
}

void BM_VerifyAlphaBetaParallel(benchmark::State& state) {
  set_threads(state);
  const auto s = approx_se_ufl(facility());
  for (auto _ : state) benchmark::DoNotOptimize(verify_alpha_beta(facility(), s, {3, 3}));
}

}  // namespace

BENCHMARK(BM_CoalitionCostsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoalitionCostsParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VerifySeSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifySeParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_VerifyAlphaBetaSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyAlphaBetaParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
