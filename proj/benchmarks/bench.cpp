#include <benchmark/benchmark.h>

#include <vector>

#include "ttstar/datamaps.hpp"
#include "ttstar/specialfn.hpp"
#include "ttstar/tauconst.hpp"
#include "ttstar/todaflow.hpp"

using namespace ttstar;

static void BM_psi_m2(benchmark::State& state) {
  double z = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specialfn::psi_m2(z));
    z = z > 2.9 ? 0.01 : z + 0.013;
  }
}
BENCHMARK(BM_psi_m2);

static void BM_psi_m2_oracle(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(specialfn::psi_m2_oracle(0.73));
}
BENCHMARK(BM_psi_m2_oracle);

static void BM_asymptotic_to_monodromy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  datamaps::AsymptoticData a{n, std::vector<double>(datamaps::reduced_size(n), 0.1),
                             std::vector<double>(datamaps::reduced_size(n), 0.2)};
  for (auto _ : state) benchmark::DoNotOptimize(datamaps::asymptotic_to_monodromy(a));
}
BENCHMARK(BM_asymptotic_to_monodromy)->Arg(3)->Arg(9)->Arg(25);

static void BM_vector_field(benchmark::State& state) {
  const todaflow::PhasePoint p{0.7, {0.2, -0.1}, {0.3, 0.05}};
  for (auto _ : state) benchmark::DoNotOptimize(todaflow::vector_field(p, 3));
}
BENCHMARK(BM_vector_field);

static void BM_solve_global(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> g;
  for (int i = 0; i < datamaps::reduced_size(n); ++i) g.push_back(0.3 - 0.13 * i);
  for (auto _ : state) benchmark::DoNotOptimize(todaflow::solve_global(n, g));
}
BENCHMARK(BM_solve_global)->Arg(1)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_constant_numeric(benchmark::State& state) {
  const std::vector g{0.3, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(tauconst::constant_numeric(g));
}
BENCHMARK(BM_constant_numeric)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
