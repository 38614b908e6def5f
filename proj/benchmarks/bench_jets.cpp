#include <benchmark/benchmark.h>

#include "finsler/expression.hpp"
#include "finsler/jet.hpp"
#include "finsler/metric.hpp"

using namespace finsler;

static void BM_JetMultiply(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  JetSpace sp({"x0", "r", "s", "z"}, order);
  const Jet a = exp(Jet::variable(sp, 0, 0.3)) + Jet::variable(sp, 3, 1.2);
  const Jet b = sqrt(Jet::variable(sp, 1, 0.5) * Jet::variable(sp, 2, 0.1) + 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
  state.SetLabel(std::to_string(sp.size()) + " coefficients");
}
BENCHMARK(BM_JetMultiply)->DenseRange(2, 6, 2);

static void BM_PhiTable(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  const auto spec = MetricSpec::from_family("unicorn", {{"alpha", 0.7}, {"beta", 0.4}, {"k", 1.0}});
  const ReducedPoint p{0.2, 0.6, 0.1, 1.1};
  for (auto _ : state) benchmark::DoNotOptimize(phi_table(spec, p, order));
}
BENCHMARK(BM_PhiTable)->DenseRange(2, 6, 2);

static void BM_Evaluate(benchmark::State& state) {
  const Expression e = parse("exp(x0)*sqrt((z+0.5)^2+0.25)*exp(arctan((z+0.5)/0.5))");
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(e, {0.1, 0.5, 0.0, 1.3}));
}
BENCHMARK(BM_Evaluate);
