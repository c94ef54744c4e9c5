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

#ifndef PROFICIENCY_SCORING_H_
#define PROFICIENCY_SCORING_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "proficiency/common.h"
#include "proficiency/corpus.h"
#include "proficiency/embeddings.h"
#include "proficiency/features.h"

namespace proficiency {

enum class ScoreModel { kU2v, kRelU2v };
enum class WordScope { kAllInVocab, kQueryRestricted };

struct ScoreConfig {
  ScoreModel model = ScoreModel::kRelU2v;
  WordScope scope = WordScope::kAllInVocab;
  bool brevity = false;
  // Unset means "auto": the user's mean post length in tokens.
  std::optional<double> reference_length;

  void validate() const;
};

ScoreModel parse_score_model(std::string_view name);
WordScope parse_word_scope(std::string_view name);

struct ContentScore {
  std::string user_id;
  std::string post_id;
  double ps = 0.0;
  double ps_hat = 0.0;
  std::size_t scored_token_count = 0;
};

// Raised when a post has no token the model can score.
class NoScorableTokens : public DataError {
 public:
  using DataError::DataError;
};

// Mean of `features`. Throws InvariantError on an empty list.
double proficiency_score(std::span<const double> features);

// exp(min(0, 1 - r / length)).
double brevity_penalty(std::size_t content_length, double reference_length);

// Per-word mean of sigma(w . u) over every user in a table.
class PopulationStats {
 public:
  PopulationStats() = default;
  PopulationStats(const UserEmbeddingTable& users, const WordEmbeddingTable& words,
                  std::span<const std::string> vocabulary);

  // Computed and cached on first use for words outside the initial vocabulary.
  double mean_sigmoid(const std::string& word, const UserEmbeddingTable& users,
                      const WordEmbeddingTable& words);
  std::optional<double> find(const std::string& word) const;
  // Multiplies every cached mean by `factor`.
  void rescale(double factor);
  std::size_t size() const { return means_.size(); }

 private:
  std::unordered_map<std::string, double> means_;
};

double population_mean_sigmoid(const UserEmbeddingTable& users,
                               std::span<const double> word_vector);

struct ScoringContext {
  const UserEmbeddingTable& users;
  const WordEmbeddingTable& words;
  PopulationStats& population;
  const QuerySet* query = nullptr;  // required for WordScope::kQueryRestricted
};

// `reference_length` is used only when brevity is on.
ContentScore score_content(const std::string& user_id, const Post& post,
                           ScoringContext& context, const ScoreConfig& config,
                           double reference_length);

struct RankedPosts {
  std::vector<ContentScore> scored;  // descending ps_hat, ties by post_id
  std::vector<std::string> unscorable;
  double reference_length = 0.0;
};

// Mean token count of `posts` (0 for an empty list).
double mean_post_length(std::span<const Post> posts);

RankedPosts rank_user_posts(const std::string& user_id, std::span<const Post> posts,
                            ScoringContext& context, const ScoreConfig& config);

// Header "user_id,post_id,ps,ps_hat,scored_token_count[,text]". `texts` maps
// post id to raw text and is consulted only when non-null.
void write_scores(std::span<const ContentScore> scores, std::ostream& out,
                  const std::unordered_map<std::string, std::string>* texts = nullptr,
                  std::span<const std::string> comments = {});

}  // namespace proficiency

#endif  // PROFICIENCY_SCORING_H_
