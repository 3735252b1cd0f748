#include <benchmark/benchmark.h>

#include "wolvan/power_sum.hpp"

namespace {

using wolvan::KernelPath;

// Sums s^-3 over 2^20 consecutive integers near p/6 for a prime near 10^9.
template <KernelPath Path>
void BM_PowerSumPair(benchmark::State& state) {
  const wolvan::Modulus p(1000000007);
  const std::uint64_t first = 166666668;
  const std::uint64_t count = static_cast<std::uint64_t>(state.range(0));
  const auto e = static_cast<unsigned>(state.range(1));
  if (Path == KernelPath::vector32 && !wolvan::vector32_available()) {
    state.SkipWithError("AVX-512F not available");
    return;
  }
  for (auto _ : state) {
    auto acc = wolvan::power_sum_pair(p, e, first, first + count - 1, 1, Path);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}

BENCHMARK(BM_PowerSumPair<KernelPath::reference>)->Args({1 << 16, 3})->Args({1 << 16, 2});
BENCHMARK(BM_PowerSumPair<KernelPath::montgomery>)->Args({1 << 20, 3})->Args({1 << 20, 2});
BENCHMARK(BM_PowerSumPair<KernelPath::vector32>)->Args({1 << 20, 3})->Args({1 << 20, 2});

// Above 2^32 only the scalar Montgomery path applies.
void BM_PowerSumPairLarge(benchmark::State& state) {
  const wolvan::Modulus p(60000000017);
  const std::uint64_t first = 10000000003;
  const std::uint64_t count = 1 << 20;
  for (auto _ : state) {
    auto acc = wolvan::power_sum_pair(p, 3, first, first + count - 1);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * (1 << 20));
}
BENCHMARK(BM_PowerSumPairLarge);

}  // namespace
