#include <benchmark/benchmark.h>

#include <random>

#include "bapfactor/auerbach.hpp"
#include "bapfactor/pipeline.hpp"

using namespace bapfactor;

namespace {

const NormTag kTags[3] = {NormTag::L1, NormTag::L2, NormTag::Linf};

Eigen::MatrixXd random_matrix(int r, int c, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = gauss(rng);
  return m;
}

void BM_OperatorNorm(benchmark::State& state) {
  int dim = static_cast<int>(state.range(0));
  NormedSpace dom(dim, kTags[state.range(1)]), cod(dim, kTags[state.range(2)]);
  std::mt19937_64 rng(1);
  FiniteRankOperator op(random_matrix(dim, dim, rng), dom, cod);
  for (auto _ : state) benchmark::DoNotOptimize(operator_norm(op));
}

void BM_SpectralNorm(benchmark::State& state) {
  int dim = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  Eigen::MatrixXd m = random_matrix(dim, dim, rng);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_norm(m));
}

void BM_SupportMaximizeSubspace(benchmark::State& state) {
  int amb = static_cast<int>(state.range(0)), k = static_cast<int>(state.range(1));
  NormedSpace sp(amb, NormTag::Linf);
  std::mt19937_64 rng(3);
  SubspaceBasis sub(sp, random_matrix(amb, k, rng));
  Functional f(random_matrix(amb, 1, rng).col(0), sp);
  for (auto _ : state) benchmark::DoNotOptimize(support_maximize(sp, f, &sub));
}

void BM_AuerbachSystem(benchmark::State& state) {
  int amb = static_cast<int>(state.range(0)), m = static_cast<int>(state.range(1));
  NormedSpace sp(amb, kTags[state.range(2)]);
  std::mt19937_64 rng(4);
  Eigen::MatrixXd B = random_matrix(amb, m, rng);
  for (auto _ : state) benchmark::DoNotOptimize(auerbach_system(SubspaceBasis(sp, B)));
}

void BM_Factorize(benchmark::State& state) {
  int dim = static_cast<int>(state.range(0));
  Scenario s = gen_scenario(9, dim, dim, NormTag::Linf, NormTag::L1, 2, {2, 2}, 0.5, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(run_factorize(s));
}

}  // namespace

BENCHMARK(BM_OperatorNorm)
    ->Args({4, 0, 0})
    ->Args({4, 1, 1})
    ->Args({4, 2, 2})
    ->Args({8, 2, 1})
    ->Args({12, 2, 1});
BENCHMARK(BM_SpectralNorm)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(BM_SupportMaximizeSubspace)->Args({4, 2})->Args({8, 3})->Args({8, 4});
BENCHMARK(BM_AuerbachSystem)->Args({4, 2, 0})->Args({6, 3, 2})->Args({8, 4, 0});
BENCHMARK(BM_Factorize)->Arg(4)->Arg(6);

BENCHMARK_MAIN();
