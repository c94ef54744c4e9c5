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

#ifndef PROFICIENCY_LDA_H_
#define PROFICIENCY_LDA_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "proficiency/corpus.h"
#include "proficiency/features.h"

namespace proficiency {

enum class LdaAveraging {
  kPostMean,   // unweighted mean of post mixtures
  kTokenMean,  // mean weighted by each post's in-vocabulary token count
};

struct LdaConfig {
  std::size_t topics = 50;
  std::size_t passes = 1;
  std::optional<double> alpha;  // default 50 / topics
  double beta = 0.01;
  std::uint64_t seed = 0;
  // Gibbs sweeps per post when inferring mixtures against a frozen model.
  std::size_t inference_sweeps = 20;
  // Train on the users with the most posts only (ties by user id).
  std::optional<std::size_t> max_users;
  // Tokens never entered into the vocabulary.
  std::vector<std::string> excluded_tokens{"@user", "<url>", "<number>"};
  LdaAveraging averaging = LdaAveraging::kPostMean;

  double alpha_value() const {
    return alpha ? *alpha : 50.0 / static_cast<double>(topics);
  }
  void validate() const;
};

// A trained topic model: K topic-word distributions over a sorted vocabulary.
class LdaModel {
 public:
  LdaModel() = default;
  LdaModel(std::vector<std::string> vocab, std::vector<double> phi,
           std::size_t topics, double alpha, double beta, std::uint64_t seed,
           std::size_t passes, std::size_t inference_sweeps);

  std::size_t num_topics() const { return topics_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  const std::vector<std::string>& vocab() const { return vocab_; }
  std::optional<std::size_t> word_index(const std::string& word) const;
  // P(w | t) for every vocabulary word.
  std::span<const double> topic(std::size_t t) const {
    return {phi_.data() + t * vocab_.size(), vocab_.size()};
  }
  double phi(std::size_t t, std::size_t w) const { return phi_[t * vocab_.size() + w]; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t passes() const { return passes_; }
  std::size_t inference_sweeps() const { return inference_sweeps_; }

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> phi_;  // topics x vocab, row-major
  std::size_t topics_ = 0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::uint64_t seed_ = 0;
  std::size_t passes_ = 0;
  std::size_t inference_sweeps_ = 0;
};

// Per-sweep bookkeeping exposed for tests.
struct LdaTrainingTrace {
  std::size_t total_tokens = 0;
  // Sum of the topic counts after initialization and after every sweep.
  std::vector<std::size_t> assigned_tokens;
};

// Collapsed Gibbs sampling over posts. phi = (n_tw + beta) / (n_t + V beta)
// from the final counts. Deterministic for a given seed.
LdaModel train_lda(const Corpus& corpus, const LdaConfig& config,
                   LdaTrainingTrace* trace = nullptr);

struct TopicDistribution {
  std::string post_id;
  std::vector<double> theta;  // P(t | post)
  std::size_t tokens = 0;     // in-vocabulary tokens used
};

// Samples the post's topic assignments against the frozen phi, seeded by the
// model seed and the post id, and averages (n_dt + alpha) / (N_d + K alpha)
// over the second half of the sweeps. No in-vocabulary token: uniform.
TopicDistribution infer_post_topics(const LdaModel& model, const Post& post);

// Mean of the post mixtures of one user (post or token weighted).
std::vector<double> user_lda_features(const LdaModel& model, const Corpus& corpus,
                                      const std::string& user_id,
                                      LdaAveraging averaging = LdaAveraging::kPostMean);

// All users; columns "topic_0" ... "topic_{K-1}".
FeatureMatrix lda_features(const LdaModel& model, const Corpus& corpus,
                           LdaAveraging averaging = LdaAveraging::kPostMean);

// Text file: "lda <K> <V> <alpha> <beta> <seed> <passes> <sweeps>", the V
// vocabulary words one per line, then K lines of V probabilities.
void save_lda_model(const LdaModel& model, const std::filesystem::path& path,
                    std::span<const std::string> comments = {});
LdaModel load_lda_model(const std::filesystem::path& path);

}  // namespace proficiency

#endif  // PROFICIENCY_LDA_H_
