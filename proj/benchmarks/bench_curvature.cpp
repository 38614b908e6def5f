#include <benchmark/benchmark.h>

#include "finsler/curvature.hpp"
#include "finsler/spray.hpp"

using namespace finsler;

namespace {

const MetricSpec& metric() {
  static const MetricSpec spec = MetricSpec::from_text("dsl", "sqrt(z^2+1+0.2*s^2)+0.1*r*z+0.05*x0*s");
  return spec;
}

const SamplePoint kPoint = SamplePoint::canonical(3, {0.2, 0.7, 0.1, 1.1}, 1.3);

}  // namespace

static void BM_SprayClosed(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(spray(metric(), kPoint));
}
BENCHMARK(BM_SprayClosed);

static void BM_SprayOracle(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(spray_oracle(metric(), kPoint));
}
BENCHMARK(BM_SprayOracle);

static void BM_CurvatureClosed(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(curvature_closed(metric(), kPoint));
}
BENCHMARK(BM_CurvatureClosed);

static void BM_BerwaldOracle(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(berwald_oracle(metric(), kPoint));
}
BENCHMARK(BM_BerwaldOracle);

static void BM_CurvatureSweep(benchmark::State& state) {
  GridSpec g;
  g.x0.count = g.r.count = g.s_fraction.count = g.z.count = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(curvature_sweep(metric(), g, false));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}
BENCHMARK(BM_CurvatureSweep)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);
