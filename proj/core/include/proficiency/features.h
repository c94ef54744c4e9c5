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

#ifndef PROFICIENCY_FEATURES_H_
#define PROFICIENCY_FEATURES_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "proficiency/corpus.h"

namespace proficiency {

// Named proficiency topics, each with a handpicked list of query words. All
// topics share one flattened query: the words in declaration order with
// duplicates removed (first occurrence kept).
class QuerySet {
 public:
  using Topic = std::pair<std::string, std::vector<std::string>>;

  QuerySet() = default;
  // Throws ConfigError if a word is not lowercase or would not survive
  // tokenize() unchanged, or if a topic name repeats.
  explicit QuerySet(std::vector<Topic> topics);

  const std::vector<Topic>& topics() const { return topics_; }
  const std::vector<std::string>& words() const { return flattened_; }
  std::vector<std::string> topic_names() const;
  bool empty() const { return flattened_.empty(); }
  std::size_t size() const { return flattened_.size(); }

  // The first `per_topic` words of every topic.
  QuerySet truncated(std::size_t per_topic) const;

 private:
  std::vector<Topic> topics_;
  std::vector<std::string> flattened_;
};

// JSON object mapping topic name -> array of words; key order is kept.
QuerySet load_query_set(const std::filesystem::path& path);
void save_query_set(const QuerySet& query, const std::filesystem::path& path);

enum class ModelId { kTf, kTfIdf, kU2v, kRelU2v, kLda };

std::string_view to_string(ModelId model);
// Accepts "tf", "tfidf", "u2v", "relu2v", "lda" (case-insensitive).
ModelId parse_model_id(std::string_view name);

// Per-user feature rows for one model, all aligned to `column_names`.
class FeatureMatrix {
 public:
  FeatureMatrix(ModelId model, std::vector<std::string> column_names);

  ModelId model() const { return model_; }
  const std::vector<std::string>& column_names() const { return columns_; }
  std::size_t num_cols() const { return columns_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const std::map<std::string, std::vector<double>>& rows() const { return rows_; }
  const std::vector<double>& row(const std::string& user_id) const;
  std::vector<std::string> user_ids() const;

  // Throws InvariantError on a length mismatch or a non-finite value.
  void set_row(const std::string& user_id, std::vector<double> values);

  std::vector<double> column(std::size_t index) const;

 private:
  ModelId model_;
  std::vector<std::string> columns_;
  std::map<std::string, std::vector<double>> rows_;
};

// "user_id,<col>,..." header, then one row per user in user_id order. Lines
// in `comments` are written first, each prefixed with "# ".
void write_feature_matrix(const FeatureMatrix& matrix, std::ostream& out,
                          std::span<const std::string> comments = {});

// Term frequency f_{w,u} / n_u per query word, with exact token matching.
FeatureMatrix tf_features(const Corpus& corpus, const QuerySet& query);

// ln(|U| / (1 + df_w)), where df_w counts users who used w at least once.
std::vector<double> idf_weights(const Corpus& corpus, const QuerySet& query);

FeatureMatrix tfidf_features(const Corpus& corpus, const QuerySet& query);

}  // namespace proficiency

#endif  // PROFICIENCY_FEATURES_H_
