#include <benchmark/benchmark.h>

#include "wolvan/catalog.hpp"
#include "wolvan/eval.hpp"
#include "wolvan/scanner.hpp"

namespace {

// Primes in a window of 10^6 above 10^9.
void BM_SieveWindow(benchmark::State& state) {
  for (auto _ : state) {
    auto primes = wolvan::sieve(1000000000, 1001000000);
    benchmark::DoNotOptimize(primes);
  }
}
BENCHMARK(BM_SieveWindow)->Unit(benchmark::kMillisecond);

const char* const kIds[] = {"stafford_vandiver", "bern30", "euler3", "euler33"};

// Full residue of one prime near 10^9, per catalog congruence.
void BM_Residue(benchmark::State& state) {
  const auto& c = wolvan::catalog_entry(kIds[state.range(0)]).congruence;
  state.SetLabel(kIds[state.range(0)]);
  for (auto _ : state) {
    auto r = wolvan::residue(1000000007, c);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Residue)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

// Turning the symbolic 30-term form into integer ranges and coefficients.
void BM_Instantiate(benchmark::State& state) {
  const auto& c = wolvan::catalog_entry("bern30").congruence;
  for (auto _ : state) {
    auto ic = wolvan::instantiate(c, 1000000007);
    benchmark::DoNotOptimize(ic);
  }
}
BENCHMARK(BM_Instantiate)->Unit(benchmark::kMicrosecond);

}  // namespace
