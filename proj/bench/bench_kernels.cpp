// Serial reference vs OpenMP kernels: the (n, chi) FT table and the Monte
// Carlo replicate loop.

#include <benchmark/benchmark.h>

#include "lcalim/acceptance.hpp"
#include "lcalim/kernels.hpp"
#include "lcalim/sampler.hpp"

namespace {

using namespace lcalim;

struct TableInputs {
  TriangularArraySpec spec = arrays::solenoid_rademacher();
  LimitLaw law = gauss_law(GroupId::solenoid(2), 1.0);
  std::vector<std::int64_t> grid = decade_grid(2, 9);
  std::vector<Character> chars = default_characters(GroupId::solenoid(2));
};

void BM_FtTableSerial(benchmark::State& state) {
  const TableInputs in;
  for (auto _ : state) benchmark::DoNotOptimize(ft_table_serial(in.spec, in.law, in.grid, in.chars));
  state.SetItemsProcessed(state.iterations() * in.grid.size() * in.chars.size());
}

void BM_FtTableParallel(benchmark::State& state) {
  const TableInputs in;
  for (auto _ : state) benchmark::DoNotOptimize(ft_table(in.spec, in.law, in.grid, in.chars));
  state.SetItemsProcessed(state.iterations() * in.grid.size() * in.chars.size());
}

void BM_EmpiricalFt(benchmark::State& state, bool parallel) {
  const auto spec = arrays::padic_bernoulli(2.0, -1.0);
  const std::vector<Character> chars = {Character::padic(0, 1), Character::padic(1, 1),
                                        Character::padic(2, 3)};
  const auto M = state.range(0);
  for (auto _ : state)
    benchmark::DoNotOptimize(empirical_ft(spec, 1000, chars, M, 42, {}, parallel));
  state.SetItemsProcessed(state.iterations() * M);
}

void BM_EmpiricalFtSerial(benchmark::State& state) { BM_EmpiricalFt(state, false); }
void BM_EmpiricalFtParallel(benchmark::State& state) { BM_EmpiricalFt(state, true); }

}  // namespace

BENCHMARK(BM_FtTableSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FtTableParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EmpiricalFtSerial)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmpiricalFtParallel)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
