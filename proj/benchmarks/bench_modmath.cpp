#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "wolvan/modmath.hpp"

namespace {

void BM_Mulmod(benchmark::State& state) {
  const wolvan::Modulus m(static_cast<std::uint64_t>(state.range(0)));
  std::mt19937_64 rng(7);
  std::vector<wolvan::Residue> xs(1024);
  for (auto& x : xs) x = rng() % m.value();
  wolvan::Residue acc = 1;
  for (auto _ : state) {
    for (auto x : xs) acc = wolvan::mulmod(acc, x, m);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 1024);
}
BENCHMARK(BM_Mulmod)->Arg(1000000007)->Arg(60000000017)->Arg(9223372036854775783);

void BM_Invmod(benchmark::State& state) {
  const wolvan::Modulus m(60000000017);
  wolvan::Residue a = 123456789;
  for (auto _ : state) {
    a = wolvan::invmod(a, m) | 1;
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_Invmod);

}  // namespace
