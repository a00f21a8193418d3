// Copyright 2026 The pseudoev Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Parallel kernels against their serial references.

#include <omp.h>

#include "benchmark/benchmark.h"
#include "pseudoev/interpreter.h"
#include "pseudoev/setgen.h"
#include "pseudoev/synthetic.h"
#include "pseudoev/trainer.h"

namespace pseudoev {
namespace {

struct Workload {
  Workload() : model(Encoder(), 1) {}

  static EncoderConfig Encoder() {
    EncoderConfig c;
    c.vocab_size = Vocab().size();
    c.max_len = 128;
    return c;
  }
  static const std::vector<MultiHopExample>& Corpus() {
    static const auto corpus = [] {
      SyntheticConfig sc;
      sc.n_examples = 32;
      return GenerateSynthetic(sc);
    }();
    return corpus;
  }
  static const Vocabulary& Vocab() {
    static const Vocabulary v = Vocabulary::Build(Corpus());
    return v;
  }

  QaModel model;
};

const Workload& Shared() {
  static const Workload w;
  return w;
}

std::vector<PreparedInstance> Batch(int n) {
  auto sets = BuildTrainingSets(Workload::Corpus(), 2, 42);
  auto prepared = PrepareInstances(sets, Workload::Vocab(), 128);
  prepared.resize(n);
  return prepared;
}

template <auto Loss>
void BM_TotalLoss(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const auto& w = Shared();
  auto prepared = Batch(32);
  std::vector<const PreparedInstance*> batch;
  for (const auto& p : prepared) batch.push_back(&p);
  TrainConfig cfg;
  std::vector<double> grad(w.model.layout().total());
  for (auto _ : state) {
    std::fill(grad.begin(), grad.end(), 0.0);
    benchmark::DoNotOptimize(Loss(w.model, batch, 1, cfg, &grad));
  }
  state.SetItemsProcessed(state.iterations() * batch.size());
}

template <auto Run>
void BM_ExtractAll(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const auto& w = Shared();
  std::vector<TrainingInstance> positives;
  for (int i = 0; i < 8; ++i) {
    positives.push_back(BuildAnswerSets(Workload::Corpus()[i], 0, 42).first[0]);
  }
  ModelConfidence oracle(w.model, Workload::Vocab(), 128);
  InterpreterConfig cfg;
  cfg.T = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(Run(oracle, positives, cfg, nullptr));
  }
  state.SetItemsProcessed(state.iterations() * positives.size());
}

const int kMaxThreads = omp_get_num_procs();

BENCHMARK(BM_TotalLoss<TotalLossSerial>)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TotalLoss<TotalLoss>)
    ->DenseRange(1, kMaxThreads)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();
BENCHMARK(BM_ExtractAll<ExtractAllSerial>)
    ->Arg(1)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractAll<ExtractAll>)
    ->DenseRange(1, kMaxThreads)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace
}  // namespace pseudoev

BENCHMARK_MAIN();
