// Copyright 2026 The Proficiency Authors.
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

#include "benchmark/benchmark.h"
#include "proficiency/corpus.h"
#include "proficiency/lda.h"
#include "proficiency/preprocess.h"

namespace proficiency {
namespace {

// Initialization plus one collapsed Gibbs sweep.
void BM_GibbsSweep(benchmark::State& state) {
  SynthConfig config = planted_benchmark_config(3);
  config.n_users = 50;
  const Corpus corpus = preprocess_corpus(generate_synthetic_corpus(config).corpus, {});
  LdaConfig lda;
  lda.topics = static_cast<std::size_t>(state.range(0));
  lda.passes = 1;
  for (auto _ : state) benchmark::DoNotOptimize(train_lda(corpus, lda));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(corpus.num_tokens()));
}
BENCHMARK(BM_GibbsSweep)->Arg(2)->Arg(50);

}  // namespace
}  // namespace proficiency
