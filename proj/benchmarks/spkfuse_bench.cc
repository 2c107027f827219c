// benchmarks/spkfuse_bench.cc

// Copyright 2026  The spkfuse Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "spkfuse/spkfuse.h"

namespace {

using namespace spkfuse;

void BM_Eer(benchmark::State &state) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> g;
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> scores(n);
  std::vector<bool> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = i % 2 == 0;
    scores[i] = g(gen) + (labels[i] ? 1.5 : 0.0);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(eer(scores, labels));
    benchmark::DoNotOptimize(min_dcf(scores, labels));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Eer)->Arg(1000)->Arg(100000);

void BM_ScoreTrials(benchmark::State &state) {
  SynthSpec spec;
  spec.dim = static_cast<std::size_t>(state.range(0));
  const SynthData data = generate(spec);
  for (auto _ : state)
    benchmark::DoNotOptimize(score_trials(data.embeddings, data.trials));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(data.trials.size()));
}
BENCHMARK(BM_ScoreTrials)->Arg(32)->Arg(512);

// Cost of one optimizer step: affinities, gradient and KL.
void BM_TsneIteration(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  Matrix x(n, 32), y(n, 2);
  for (double &v : x.data()) v = rng.normal();
  for (double &v : y.data()) v = rng.normal();
  const Matrix p = joint_p(conditional_matrix(pairwise_sq_distances(x), 30.0,
                                              1e-5, 50));
  for (auto _ : state) {
    auto a = low_dim_affinities(y);
    benchmark::DoNotOptimize(tsne_gradient(p, a.q, a.unnorm, y));
    benchmark::DoNotOptimize(kl_divergence(p, a.q));
  }
}
BENCHMARK(BM_TsneIteration)->Arg(250)->Arg(1000);

void BM_FusionGrid(benchmark::State &state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  AlignedScores aligned;
  std::vector<bool> labels;
  for (std::size_t t = 0; t < 2000; ++t) {
    aligned.pairs.push_back({"e", "t" + std::to_string(t)});
    labels.push_back(t % 2 == 0);
  }
  aligned.systems.assign(k, std::vector<double>(2000));
  for (auto &sys : aligned.systems)
    for (std::size_t t = 0; t < 2000; ++t)
      sys[t] = rng.normal() + (labels[t] ? 1.0 : 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_fusion(aligned, labels));
}
BENCHMARK(BM_FusionGrid)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_LogMel(benchmark::State &state) {
  Rng rng(5);
  AudioSignal sig;
  sig.samples.resize(static_cast<std::size_t>(state.range(0)) * 16000);
  for (double &v : sig.samples) v = 0.5 * (2.0 * rng.uniform() - 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(log_mel(sig));
}
BENCHMARK(BM_LogMel)->Arg(2)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
