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

#ifndef PROFICIENCY_MODEL_FEATURES_H_
#define PROFICIENCY_MODEL_FEATURES_H_

#include "proficiency/corpus.h"
#include "proficiency/embeddings.h"
#include "proficiency/features.h"
#include "proficiency/lda.h"

namespace proficiency {

// Trained artifacts a feature model may need. Null means unavailable.
struct ModelArtifacts {
  const WordEmbeddingTable* words = nullptr;
  const UserEmbeddingTable* users = nullptr;
  const LdaModel* lda = nullptr;
  LdaAveraging lda_averaging = LdaAveraging::kPostMean;
};

// Builds the feature matrix of `model` for every user of a preprocessed
// corpus. Throws ConfigError when a required artifact is missing.
FeatureMatrix build_feature_matrix(ModelId model, const Corpus& corpus,
                                   const QuerySet& query,
                                   const ModelArtifacts& artifacts);

}  // namespace proficiency

#endif  // PROFICIENCY_MODEL_FEATURES_H_
