#include <benchmark/benchmark.h>

#include <random>

#include "kkw/boundary.hpp"
#include "kkw/clifford.hpp"
#include "kkw/torus.hpp"

using namespace kkw;

namespace {

Multivector dense(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> coef(-9, 9);
  Multivector out(n);
  for (BladeMask m = 0; m < (BladeMask{1} << n); ++m)
    out += Multivector::blade(m, ScalarPoly::rational(coef(rng), 1 + (m % 5)), n);
  return out;
}

void BM_CliffMul(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Multivector a = dense(n, 1);
  const Multivector b = dense(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(cliff_mul(a, b));
}
BENCHMARK(BM_CliffMul)->Arg(4)->Arg(6)->Arg(8);

void BM_PiPlus(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  std::vector<Multivector> num;
  for (int k = 0; k <= order; ++k) num.push_back(dense(4, 10 + k));
  const RationalSymbol s(num, order, order);
  for (auto _ : state) benchmark::DoNotOptimize(pi_plus(s));
}
BENCHMARK(BM_PiPlus)->Arg(1)->Arg(2)->Arg(3);

void BM_TorusHeatTrace(benchmark::State& state) {
  TorusConfig cfg;
  cfg.perturbation = TorusPerturbation::Scalar;
  cfg.value = 0.3;
  cfg.cutoff = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(heat_trace(cfg, 0.1));
}
BENCHMARK(BM_TorusHeatTrace)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
