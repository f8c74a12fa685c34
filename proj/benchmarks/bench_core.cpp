#include <benchmark/benchmark.h>

#include "maierlab/buchstab.hpp"
#include "maierlab/linear_forms.hpp"
#include "maierlab/local_densities.hpp"
#include "maierlab/patterns.hpp"
#include "maierlab/sieve.hpp"

using namespace maierlab;

namespace {

void BM_SegmentedPrimeSieve(benchmark::State& state) {
  std::int64_t width = state.range(0);
  for (auto _ : state) {
    auto s = SegmentedSieve::primes(1'000'000'000, 1'000'000'000 + width);
    benchmark::DoNotOptimize(s.count());
  }
  state.SetItemsProcessed(state.iterations() * width);
}
BENCHMARK(BM_SegmentedPrimeSieve)->Arg(1 << 20)->Arg(1 << 24);

void BM_RoughSieve(benchmark::State& state) {
  std::int64_t width = state.range(0);
  for (auto _ : state) {
    auto s = SegmentedSieve::rough(1, 1 + width, 1000);
    benchmark::DoNotOptimize(s.count());
  }
  state.SetItemsProcessed(state.iterations() * width);
}
BENCHMARK(BM_RoughSieve)->Arg(1 << 20)->Arg(1 << 24);

void BM_BetaEnumerate(benchmark::State& state) {
  auto sys = k_term_ap(4);
  std::int64_t p = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(nonvanishing_count_enumerate(sys, p));
}
BENCHMARK(BM_BetaEnumerate)->Arg(101)->Arg(1009);

void BM_BetaSubsets(benchmark::State& state) {
  auto sys = k_term_ap(4);
  std::int64_t p = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(nonvanishing_count_subsets(sys, p));
}
BENCHMARK(BM_BetaSubsets)->Arg(101)->Arg(1009);

void BM_SingularSeries(benchmark::State& state) {
  auto sys = k_term_ap(4);
  for (auto _ : state)
    benchmark::DoNotOptimize(singular_series(sys, state.range(0)).value());
}
BENCHMARK(BM_SingularSeries)->Arg(100)->Arg(1000);

void BM_BuchstabBuild(benchmark::State& state) {
  double step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) {
    BuchstabTable t(step, 10.0);
    benchmark::DoNotOptimize(t.omega(9.5));
  }
}
BENCHMARK(BM_BuchstabBuild)->Arg(1000)->Arg(10000);

void BM_PatternCount(benchmark::State& state) {
  auto sys = k_term_ap(3);
  std::int64_t side = state.range(0);
  Box box({1000, 1000}, {side, side});
  for (auto _ : state)
    benchmark::DoNotOptimize(count_prime_patterns(sys, box));
}
BENCHMARK(BM_PatternCount)->Arg(200)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
