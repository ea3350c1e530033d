#include <benchmark/benchmark.h>

#include <random>

#include "kr/closure.hpp"
#include "kr/catalog.hpp"
#include "kr/eval.hpp"

using namespace kr;

namespace {

BoolMatrix random_matrix(std::size_t n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(density);
  BoolMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (bit(rng)) m.set(i, j);
  return m;
}

template <BoolMatrix (*Mul)(const BoolMatrix&, const BoolMatrix&)>
void bm_multiply(benchmark::State& st) {
  auto n = static_cast<std::size_t>(st.range(0));
  auto a = random_matrix(n, 0.05, 1), b = random_matrix(n, 0.05, 2);
  for (auto _ : st) benchmark::DoNotOptimize(Mul(a, b));
  st.SetComplexityN(st.range(0));
}

void bm_eval_t3(benchmark::State& st) {
  auto s = FiniteSemigroup::from_generators(catalog::builtin("T3"));
  for (auto _ : st) {
    Evaluator ev;
    benchmark::DoNotOptimize(ev.decide(s, false));
  }
}

}  // namespace

BENCHMARK(bm_multiply<multiply_serial>)->Name("multiply/serial")->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(bm_multiply<multiply_parallel>)->Name("multiply/openmp")->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(bm_eval_t3)->Name("decide/T3")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
