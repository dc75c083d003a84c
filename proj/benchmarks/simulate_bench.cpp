#include <benchmark/benchmark.h>

#include "gazedoc/belief.hpp"
#include "gazedoc/imitation.hpp"
#include "gazedoc/synthetic.hpp"

using namespace gazedoc;

namespace {

const BeliefInputs& inputs() {
  static const BeliefInputs in = document_inputs(make_document(0, 0, 640, 400, 5));
  return in;
}

void BM_MakeBeliefInputs(benchmark::State& state) {
  const SyntheticDocument doc = make_document(0, 0, 640, 400, 5);
  for (auto _ : state) benchmark::DoNotOptimize(make_belief_inputs(doc.components, doc.seg));
}
BENCHMARK(BM_MakeBeliefInputs)->Unit(benchmark::kMillisecond);

void BM_RolloutUniform(benchmark::State& state) {
  const UniformPolicy p;
  const BeliefInputs& in = inputs();
  RolloutOptions ro;
  ro.length = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ++ro.seed;
    benchmark::DoNotOptimize(rollout(p, in.initial(), in.high, ro));
  }
}
BENCHMARK(BM_RolloutUniform)->Arg(7)->Arg(30);

void BM_RolloutLinearSoftmax(benchmark::State& state) {
  const LinearSoftmaxPolicy p(planted_policy());
  const BeliefInputs& in = inputs();
  RolloutOptions ro;
  for (auto _ : state) {
    ++ro.seed;
    benchmark::DoNotOptimize(rollout(p, in.initial(), in.high, ro));
  }
}
BENCHMARK(BM_RolloutLinearSoftmax);

}  // namespace
