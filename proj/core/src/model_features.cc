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

#include "proficiency/model_features.h"

#include "proficiency/common.h"

namespace proficiency {

namespace {

// Restricts user embeddings to the users of `corpus`; every one must exist.
UserEmbeddingTable corpus_users(const UserEmbeddingTable& users, const Corpus& corpus) {
  UserEmbeddingTable out(users.dim());
  for (const auto& id : corpus.user_ids()) {
    if (!users.contains(id)) throw DataError("no embedding for user '" + id + "'");
    out.set(id, users.vector(id));
  }
  return out;
}

}  // namespace

FeatureMatrix build_feature_matrix(ModelId model, const Corpus& corpus,
                                   const QuerySet& query,
                                   const ModelArtifacts& artifacts) {
  switch (model) {
    case ModelId::kTf:
      return tf_features(corpus, query);
    case ModelId::kTfIdf:
      return tfidf_features(corpus, query);
    case ModelId::kU2v:
    case ModelId::kRelU2v: {
      if (artifacts.words == nullptr) {
        throw ConfigError("model " + std::string(to_string(model)) +
                          " needs word embeddings");
      }
      if (artifacts.users == nullptr) {
        throw ConfigError("model " + std::string(to_string(model)) +
                          " needs user embeddings");
      }
      auto u2v = u2v_features(corpus_users(*artifacts.users, corpus), *artifacts.words,
                              query);
      return model == ModelId::kU2v ? u2v : rel_u2v_features(u2v);
    }
    case ModelId::kLda:
      if (artifacts.lda == nullptr) throw ConfigError("model lda needs an LDA model");
      return lda_features(*artifacts.lda, corpus, artifacts.lda_averaging);
  }
  throw InvariantError("unknown model id");
}

}  // namespace proficiency
