#include <benchmark/benchmark.h>

#include "gazedoc/kmeans.hpp"
#include "gazedoc/synthetic.hpp"

using namespace gazedoc;

namespace {

void BM_KMeansPlusPlus(benchmark::State& state) {
  const auto v = make_blob_vectors(static_cast<int>(state.range(0)), 0.05, 3);
  for (auto _ : state) benchmark::DoNotOptimize(kmeans_pp(v, 6, 7));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(v.size()));
}
BENCHMARK(BM_KMeansPlusPlus)->Arg(10)->Arg(100)->Arg(1000);

void BM_ElbowCurve(benchmark::State& state) {
  const auto v = make_blob_vectors(50, 0.05, 3);
  const std::vector<int> ks{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  for (auto _ : state) benchmark::DoNotOptimize(elbow_curve(v, ks, 7));
}
BENCHMARK(BM_ElbowCurve)->Unit(benchmark::kMillisecond);

}  // namespace
