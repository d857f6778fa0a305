#include <benchmark/benchmark.h>
#include <omp.h>

#include "betamatch/sweep.hpp"

using namespace betamatch;

namespace {

SweepConfig fig2() {
  SweepConfig c;
  c.grid = 100;
  c.starts = {StartMode{}, StartMode::parse("near_fixed_point(0.01,0110)"),
              StartMode::parse("near_fixed_point(0.01,0101)"), StartMode::parse("near_fixed_point(0.01,0111)")};
  return c;
}

SweepConfig density(long n) {
  SweepConfig c;
  c.field = "tribonacci";
  c.alpha_lo = "0.3";
  c.alpha_hi = "0.45";
  c.grid = 16;
  c.density_n = n;
  return c;
}

void BM_matching_serial(benchmark::State& st) {
  auto cfg = fig2();
  for (auto _ : st) benchmark::DoNotOptimize(sweep_matching_serial(cfg));
}

void BM_matching_omp(benchmark::State& st) {
  auto cfg = fig2();
  st.counters["threads"] = omp_get_max_threads();
  for (auto _ : st) benchmark::DoNotOptimize(sweep_matching(cfg));
}

void BM_density_serial(benchmark::State& st) {
  auto cfg = density(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(sweep_density_serial(cfg));
}

void BM_density_omp(benchmark::State& st) {
  auto cfg = density(st.range(0));
  st.counters["threads"] = omp_get_max_threads();
  for (auto _ : st) benchmark::DoNotOptimize(sweep_density(cfg));
}

}  // namespace

BENCHMARK(BM_matching_serial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_matching_omp)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_density_serial)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_density_omp)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
