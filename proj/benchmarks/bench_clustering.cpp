#include <benchmark/benchmark.h>

#include "runtrim/clustering.hpp"
#include "runtrim/encoding.hpp"
#include "runtrim/reduction.hpp"
#include "runtrim/synthetic.hpp"

namespace {

using namespace runtrim;

Dataset sort_runs(std::size_t rows) {
  SyntheticSpec spec = default_suite().jobs[0];
  spec.rows = rows;
  return generate_synthetic(spec, 7);
}

Matrix encoded_points(std::size_t rows) {
  return encode(deduplicate(sort_runs(rows)), true).standardized;
}

void BM_KMeans(benchmark::State& state) {
  const Matrix points = encoded_points(static_cast<std::size_t>(state.range(0)));
  const std::size_t k = points.rows() / 4;
  for (auto _ : state) benchmark::DoNotOptimize(kmeans(points, k, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KMeans)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_KMedoids(benchmark::State& state) {
  const Matrix points = encoded_points(static_cast<std::size_t>(state.range(0)));
  const std::size_t k = points.rows() / 4;
  for (auto _ : state) benchmark::DoNotOptimize(kmedoids(points, k, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KMedoids)->RangeMultiplier(2)->Range(64, 512)->Complexity();

void BM_Dbscan(benchmark::State& state) {
  const Matrix points = encoded_points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dbscan(points, 0.5, 2));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Dbscan)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

// Full reduce at a quarter of the rows, including the eps sweep for dbscan.
void BM_Reduce(benchmark::State& state) {
  const Dataset data = sort_runs(500);
  const auto method = static_cast<Method>(state.range(0));
  state.SetLabel(std::string(to_string(method)));
  for (auto _ : state) benchmark::DoNotOptimize(reduce_dataset(data, {method, 0.25, std::nullopt, 2, 3}));
}
BENCHMARK(BM_Reduce)->DenseRange(0, 2);

}  // namespace
