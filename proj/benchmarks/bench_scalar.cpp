#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "pacbayes/bounds.hpp"
#include "pacbayes/esi_verify.hpp"
#include "pacbayes/scalar_math.hpp"

namespace {

std::vector<double> uniform_inputs(std::size_t count, double lo, double hi) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> out(count);
  for (auto& v : out) v = u(rng);
  return out;
}

void BM_Theta(benchmark::State& state) {
  const auto xs = uniform_inputs(1024, 1e-6, 0.99);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pacbayes::theta(xs[i++ & 1023]));
  }
}
BENCHMARK(BM_Theta);

void BM_Kappa(benchmark::State& state) {
  const auto xs = uniform_inputs(1024, -5.0, 5.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pacbayes::kappa(xs[i++ & 1023]));
  }
}
BENCHMARK(BM_Kappa);

void BM_InvertKl(benchmark::State& state) {
  const auto qs = uniform_inputs(1024, 0.0, 0.9);
  const auto bs = uniform_inputs(1024, 0.0, 1.0);
  std::size_t i = 0;
  for (auto _ : state) {
    const std::size_t k = i++ & 1023;
    benchmark::DoNotOptimize(pacbayes::invert_kl_upper(qs[k], bs[k]));
  }
}
BENCHMARK(BM_InvertKl);

void BM_MainBound(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const pacbayes::EtaGrid grid = pacbayes::build_eta_grid(n, 0.05 / 13, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pacbayes::main_bound(0.1, 0.05, 0.06, 4.0, n, 0.05 / 13, grid));
  }
}
BENCHMARK(BM_MainBound)->Arg(800)->Arg(8000)->Arg(80000);

void BM_UnexpectedBernsteinSuite(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(pacbayes::esi::unexpected_bernstein_suite(100, 2));
  }
}
BENCHMARK(BM_UnexpectedBernsteinSuite)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
