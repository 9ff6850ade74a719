#include <benchmark/benchmark.h>

#include "mgc/control.hpp"
#include "mgc/model.hpp"

namespace {

const mgc::MGParams kChaotic{1.0, 2.0, 9.65};

void BM_Landmarks(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mgc::landmarks(kChaotic));
}
BENCHMARK(BM_Landmarks);

void BM_ConstantThresholds(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(mgc::constant_thresholds(kChaotic));
}
BENCHMARK(BM_ConstantThresholds)->Unit(benchmark::kMicrosecond);

void BM_ProportionalThresholds(benchmark::State& state) {
  const mgc::MGParams p{1.275, 2.0, 20.0};
  for (auto _ : state) benchmark::DoNotOptimize(mgc::proportional_thresholds(p));
}
BENCHMARK(BM_ProportionalThresholds)->Unit(benchmark::kMicrosecond);

void BM_SmoothDelayDesign(benchmark::State& state) {
  const mgc::MGParams p{1.0, 2.0, 6.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mgc::sdd_design(p, 5.0, mgc::DelayKind::Smooth));
  }
}
BENCHMARK(BM_SmoothDelayDesign)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
