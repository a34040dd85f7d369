// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>
#include <vector>

#include "vortexmf/kernels.hpp"

namespace {

using namespace vortexmf::kernels;

std::vector<double> field(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> x(n * n);
  for (double& v : x) v = u(rng);
  return x;
}

template <double (*Kernel)(std::span<const double>, double, double, std::size_t)>
void BM_ExpSum(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = field(n);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(x, 0.8, 1.6, n));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_ExpSum<serial::exp_sum>)->Name("exp_sum/serial")->Arg(128)->Arg(512);
BENCHMARK(BM_ExpSum<omp::exp_sum>)->Name("exp_sum/omp")->Arg(128)->Arg(512);

template <double (*Kernel)(std::span<const double>, std::span<const double>, std::size_t)>
void BM_Dot(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = field(n);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(x, x, n));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_Dot<serial::dot>)->Name("dot/serial")->Arg(128)->Arg(512);
BENCHMARK(BM_Dot<omp::dot>)->Name("dot/omp")->Arg(128)->Arg(512);

template <MaxLoc (*Kernel)(std::span<const double>)>
void BM_MaxLoc(benchmark::State& state) {
  const auto x = field(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(x));
}
BENCHMARK(BM_MaxLoc<serial::max_loc>)->Name("max_loc/serial")->Arg(128)->Arg(512);
BENCHMARK(BM_MaxLoc<omp::max_loc>)->Name("max_loc/omp")->Arg(128)->Arg(512);

template <SubsetBest (*Kernel)(std::span<const double>, std::span<const double>, std::uint64_t, std::uint64_t)>
void BM_SubsetScan(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> alpha(k);
  std::vector<double> mass(k);
  for (std::size_t i = 0; i < k; ++i) {
    alpha[i] = u(rng);
    mass[i] = u(rng);
  }
  std::sort(alpha.rbegin(), alpha.rend());
  std::vector<double> circ(k);
  for (std::size_t i = 0; i < k; ++i) circ[i] = alpha[i] * mass[i];
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(mass, circ, 1, std::uint64_t{1} << k));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(std::uint64_t{1} << k));
}
BENCHMARK(BM_SubsetScan<serial::scan_subsets>)->Name("scan_subsets/serial")->Arg(12)->Arg(18);
BENCHMARK(BM_SubsetScan<omp::scan_subsets>)->Name("scan_subsets/omp")->Arg(12)->Arg(18);

}  // namespace

BENCHMARK_MAIN();
