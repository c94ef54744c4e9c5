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

#include "proficiency/features.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <unordered_map>

#include "proficiency/common.h"

namespace proficiency {

std::string_view to_string(ModelId model) {
  switch (model) {
    case ModelId::kTf: return "tf";
    case ModelId::kTfIdf: return "tfidf";
    case ModelId::kU2v: return "u2v";
    case ModelId::kRelU2v: return "relu2v";
    case ModelId::kLda: return "lda";
  }
  return "unknown";
}

ModelId parse_model_id(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  lower.erase(std::remove(lower.begin(), lower.end(), '-'), lower.end());
  if (lower == "tf") return ModelId::kTf;
  if (lower == "tfidf") return ModelId::kTfIdf;
  if (lower == "u2v" || lower == "user2vec") return ModelId::kU2v;
  if (lower == "relu2v") return ModelId::kRelU2v;
  if (lower == "lda") return ModelId::kLda;
  throw ConfigError("unknown model '" + std::string(name) +
                    "' (expected tf, tfidf, u2v, relu2v or lda)");
}

FeatureMatrix::FeatureMatrix(ModelId model, std::vector<std::string> column_names)
    : model_(model), columns_(std::move(column_names)) {}

const std::vector<double>& FeatureMatrix::row(const std::string& user_id) const {
  auto it = rows_.find(user_id);
  if (it == rows_.end()) {
    throw DataError("feature matrix has no row for user '" + user_id + "'");
  }
  return it->second;
}

std::vector<std::string> FeatureMatrix::user_ids() const {
  std::vector<std::string> ids;
  ids.reserve(rows_.size());
  for (const auto& [id, values] : rows_) ids.push_back(id);
  return ids;
}

void FeatureMatrix::set_row(const std::string& user_id, std::vector<double> values) {
  if (values.size() != columns_.size()) {
    throw InvariantError("feature row for '" + user_id + "' has " +
                         std::to_string(values.size()) + " values, expected " +
                         std::to_string(columns_.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InvariantError("non-finite feature value for user '" + user_id + "'");
    }
  }
  rows_[user_id] = std::move(values);
}

std::vector<double> FeatureMatrix::column(std::size_t index) const {
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& [id, values] : rows_) out.push_back(values.at(index));
  return out;
}

void write_feature_matrix(const FeatureMatrix& matrix, std::ostream& out,
                          std::span<const std::string> comments) {
  for (const auto& line : comments) out << "# " << line << '\n';
  out << "user_id";
  for (const auto& name : matrix.column_names()) out << ',' << csv_field(name);
  out << '\n';
  for (const auto& [id, values] : matrix.rows()) {
    out << csv_field(id);
    for (double v : values) out << ',' << format_double(v);
    out << '\n';
  }
}

namespace {

void require_preprocessed(const Corpus& corpus) {
  if (!corpus.preprocessed()) {
    throw InvariantError("corpus must be preprocessed before building features");
  }
}

// counts[user][column] = occurrences of query word `column` in the user's posts.
std::map<std::string, std::vector<std::size_t>> count_query_words(
    const Corpus& corpus, const QuerySet& query) {
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t j = 0; j < query.words().size(); ++j) {
    column.emplace(query.words()[j], j);
  }
  std::map<std::string, std::vector<std::size_t>> counts;
  for (const auto& [id, record] : corpus.users()) {
    auto& row = counts[id];
    row.assign(query.size(), 0);
    for (const Post& post : corpus.posts(id)) {
      for (const auto& token : post.tokens) {
        if (auto it = column.find(token); it != column.end()) ++row[it->second];
      }
    }
  }
  return counts;
}

}  // namespace

FeatureMatrix tf_features(const Corpus& corpus, const QuerySet& query) {
  require_preprocessed(corpus);
  if (query.empty()) throw ConfigError("query set is empty");
  FeatureMatrix matrix(ModelId::kTf, query.words());
  for (const auto& [id, counts] : count_query_words(corpus, query)) {
    const std::size_t n_u = corpus.user(id).token_count;
    if (n_u == 0) {
      throw DataError("user '" + id + "' has no tokens; term frequency is undefined");
    }
    std::vector<double> values(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) {
      values[j] = static_cast<double>(counts[j]) / static_cast<double>(n_u);
    }
    matrix.set_row(id, std::move(values));
  }
  return matrix;
}

std::vector<double> idf_weights(const Corpus& corpus, const QuerySet& query) {
  require_preprocessed(corpus);
  if (corpus.num_users() < 1) throw DataError("idf needs at least one user");
  std::vector<std::size_t> df(query.size(), 0);
  for (const auto& [id, counts] : count_query_words(corpus, query)) {
    for (std::size_t j = 0; j < counts.size(); ++j) df[j] += counts[j] > 0 ? 1 : 0;
  }
  const auto n_users = static_cast<double>(corpus.num_users());
  std::vector<double> idf(df.size());
  for (std::size_t j = 0; j < df.size(); ++j) {
    idf[j] = std::log(n_users / (1.0 + static_cast<double>(df[j])));
  }
  return idf;
}

FeatureMatrix tfidf_features(const Corpus& corpus, const QuerySet& query) {
  const FeatureMatrix tf = tf_features(corpus, query);
  const std::vector<double> idf = idf_weights(corpus, query);
  FeatureMatrix matrix(ModelId::kTfIdf, query.words());
  for (const auto& [id, values] : tf.rows()) {
    std::vector<double> row(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) row[j] = values[j] * idf[j];
    matrix.set_row(id, std::move(row));
  }
  return matrix;
}

}  // namespace proficiency
