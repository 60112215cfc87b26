// Serial against OpenMP execution of the two lattice sweeps.
#include <benchmark/benchmark.h>

#include "bk/moduli.hpp"

using namespace bk;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_enumerate_2d(benchmark::State& state) {
  const RankOneData n = RankOneData::untwisted(make_tower(3, 2, 4, 4), {1, 0, 1, 0});
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_2d(n, mode(state)));
  label(state);
}

void BM_shape_corpus(benchmark::State& state) {
  const RankOneData n = RankOneData::untwisted(make_tower(3, 2, 4, 4), {2, 1, 3, 0});
  for (auto _ : state) benchmark::DoNotOptimize(shape_corpus(n, 4, mode(state)));
  label(state);
}

void BM_enumerate_2d_p5(benchmark::State& state) {
  const RankOneData n = RankOneData::untwisted(make_tower(5, 1, 2, 2), {3, 1});
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_2d(n, mode(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_enumerate_2d)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_shape_corpus)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_enumerate_2d_p5)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
