// Serial reference vs OpenMP kernels.

#include <random>

#include <benchmark/benchmark.h>

#include "hierloc/kernels.hpp"

using namespace hierloc;

namespace {

kernels::Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  kernels::Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

template <void (*Fn)(const kernels::Matrix&, const kernels::Matrix&, kernels::Matrix&)>
void pairwise(benchmark::State& state) {
  const auto q = random_matrix(state.range(0), 129, 1);
  const auto p = random_matrix(state.range(1), 129, 2);
  kernels::Matrix out(q.rows(), p.rows());
  for (auto _ : state) {
    Fn(q, p, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * q.rows() * p.rows());
}

template <void (*Fn)(const kernels::Matrix&, const kernels::Vector&, kernels::Vector&)>
void flipped(benchmark::State& state) {
  const auto p = random_matrix(state.range(0), 129, 3);
  const kernels::Vector q = random_matrix(129, 1, 4);
  kernels::Vector out(p.rows());
  for (auto _ : state) {
    Fn(p, q, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * p.rows());
}

}  // namespace

BENCHMARK(pairwise<kernels::lorentz_inner_pairwise_serial>)->Args({16, 1000})->Args({64, 10000});
BENCHMARK(pairwise<kernels::lorentz_inner_pairwise_omp>)->Args({16, 1000})->Args({64, 10000});
BENCHMARK(pairwise<kernels::squared_euclidean_pairwise_serial>)->Args({16, 1000})->Args({64, 10000});
BENCHMARK(pairwise<kernels::squared_euclidean_pairwise_omp>)->Args({16, 1000})->Args({64, 10000});
BENCHMARK(flipped<kernels::flipped_scores_serial>)->Arg(10000)->Arg(100000);
BENCHMARK(flipped<kernels::flipped_scores_omp>)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
