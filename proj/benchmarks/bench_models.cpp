#include <benchmark/benchmark.h>

#include "runtrim/selector.hpp"
#include "runtrim/synthetic.hpp"

namespace {

using namespace runtrim;

Dataset grep_runs(std::size_t rows) {
  SyntheticSpec spec = default_suite().jobs[1];
  spec.rows = rows;
  return generate_synthetic(spec, 11);
}

void BM_FitModel(benchmark::State& state) {
  const Dataset data = grep_runs(static_cast<std::size_t>(state.range(1)));
  const ModelKind kind = kAllModels[static_cast<std::size_t>(state.range(0))];
  state.SetLabel(std::string(to_string(kind)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_model(kind, data));
}
BENCHMARK(BM_FitModel)->ArgsProduct({{0, 1, 2, 3}, {50, 200, 800}})->Unit(benchmark::kMicrosecond);

void BM_CrossValidate(benchmark::State& state) {
  const Dataset data = grep_runs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cross_validate(data, 5, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CrossValidate)->RangeMultiplier(2)->Range(50, 800)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Predict(benchmark::State& state) {
  const Dataset data = grep_runs(200);
  const TrainedPredictor predictor = c3o_select(data, 5, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predictor.predict(data.records[i]));
    i = (i + 1) % data.size();
  }
}
BENCHMARK(BM_Predict);

}  // namespace

BENCHMARK_MAIN();
