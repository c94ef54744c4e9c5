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

#include "proficiency/scoring.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_set>

namespace proficiency {

void ScoreConfig::validate() const {
  if (reference_length &&
      (!(*reference_length > 0.0) || !std::isfinite(*reference_length))) {
    throw ConfigError("score.reference_length must be a positive number or \"auto\"");
  }
}

ScoreModel parse_score_model(std::string_view name) {
  if (name == "u2v") return ScoreModel::kU2v;
  if (name == "relu2v") return ScoreModel::kRelU2v;
  throw ConfigError("score.model must be 'u2v' or 'relu2v', got '" + std::string(name) +
                    "'");
}

WordScope parse_word_scope(std::string_view name) {
  if (name == "all") return WordScope::kAllInVocab;
  if (name == "query") return WordScope::kQueryRestricted;
  throw ConfigError("score.word_scope must be 'all' or 'query', got '" +
                    std::string(name) + "'");
}

double proficiency_score(std::span<const double> features) {
  if (features.empty()) throw InvariantError("proficiency_score of an empty list");
  double sum = 0.0;
  for (double f : features) sum += f;
  return sum / static_cast<double>(features.size());
}

double brevity_penalty(std::size_t content_length, double reference_length) {
  if (content_length == 0) throw InvariantError("brevity_penalty: empty content");
  if (!(reference_length > 0.0)) {
    throw InvariantError("brevity_penalty: reference length must be positive");
  }
  const double exponent =
      std::min(0.0, 1.0 - reference_length / static_cast<double>(content_length));
  return exponent == 0.0 ? 1.0 : std::exp(exponent);
}

double population_mean_sigmoid(const UserEmbeddingTable& users,
                               std::span<const double> word_vector) {
  if (users.size() == 0) throw DataError("no user embeddings to average over");
  double sum = 0.0;
  for (const auto& [id, u] : users.vectors()) sum += sigmoid(dot(word_vector, u));
  return sum / static_cast<double>(users.size());
}

PopulationStats::PopulationStats(const UserEmbeddingTable& users,
                                 const WordEmbeddingTable& words,
                                 std::span<const std::string> vocabulary) {
  for (const auto& word : vocabulary) {
    if (means_.count(word)) continue;
    if (auto v = words.find(word)) means_[word] = population_mean_sigmoid(users, *v);
  }
}

double PopulationStats::mean_sigmoid(const std::string& word,
                                     const UserEmbeddingTable& users,
                                     const WordEmbeddingTable& words) {
  auto it = means_.find(word);
  if (it != means_.end()) return it->second;
  auto v = words.find(word);
  if (!v) throw InvariantError("no word vector for '" + word + "'");
  const double mean = population_mean_sigmoid(users, *v);
  means_[word] = mean;
  return mean;
}

std::optional<double> PopulationStats::find(const std::string& word) const {
  auto it = means_.find(word);
  if (it == means_.end()) return std::nullopt;
  return it->second;
}

void PopulationStats::rescale(double factor) {
  for (auto& [word, mean] : means_) mean *= factor;
}

ContentScore score_content(const std::string& user_id, const Post& post,
                           ScoringContext& context, const ScoreConfig& config,
                           double reference_length) {
  if (!context.users.contains(user_id)) {
    throw DataError("no embedding for user '" + user_id + "'");
  }
  std::unordered_set<std::string> allowed;
  if (config.scope == WordScope::kQueryRestricted) {
    if (context.query == nullptr) {
      throw ConfigError("score.word_scope 'query' needs a query file");
    }
    allowed.insert(context.query->words().begin(), context.query->words().end());
  }
  const auto& u = context.users.vector(user_id);
  std::vector<double> values;
  for (const auto& token : post.tokens) {
    if (config.scope == WordScope::kQueryRestricted && !allowed.count(token)) continue;
    auto w = context.words.find(token);
    if (!w) continue;
    double value = sigmoid(dot(*w, u));
    if (config.model == ScoreModel::kRelU2v) {
      value /= context.population.mean_sigmoid(token, context.users, context.words);
    }
    values.push_back(value);
  }
  if (values.empty()) {
    throw NoScorableTokens("post '" + post.post_id + "' has no scorable tokens");
  }
  ContentScore score;
  score.user_id = user_id;
  score.post_id = post.post_id;
  score.ps = proficiency_score(values);
  score.ps_hat = config.brevity
                     ? score.ps * brevity_penalty(post.tokens.size(), reference_length)
                     : score.ps;
  score.scored_token_count = values.size();
  return score;
}

double mean_post_length(std::span<const Post> posts) {
  if (posts.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& post : posts) total += post.tokens.size();
  return static_cast<double>(total) / static_cast<double>(posts.size());
}

RankedPosts rank_user_posts(const std::string& user_id, std::span<const Post> posts,
                            ScoringContext& context, const ScoreConfig& config) {
  config.validate();
  RankedPosts ranked;
  ranked.reference_length =
      config.reference_length ? *config.reference_length : mean_post_length(posts);
  for (const auto& post : posts) {
    try {
      ranked.scored.push_back(
          score_content(user_id, post, context, config, ranked.reference_length));
    } catch (const NoScorableTokens&) {
      ranked.unscorable.push_back(post.post_id);
    }
  }
  std::sort(ranked.scored.begin(), ranked.scored.end(),
            [](const ContentScore& a, const ContentScore& b) {
              if (a.ps_hat != b.ps_hat) return a.ps_hat > b.ps_hat;
              return a.post_id < b.post_id;
            });
  return ranked;
}

void write_scores(std::span<const ContentScore> scores, std::ostream& out,
                  const std::unordered_map<std::string, std::string>* texts,
                  std::span<const std::string> comments) {
  for (const auto& line : comments) out << "# " << line << '\n';
  out << "user_id,post_id,ps,ps_hat,scored_token_count";
  if (texts) out << ",text";
  out << '\n';
  for (const auto& s : scores) {
    out << csv_field(s.user_id) << ',' << csv_field(s.post_id) << ','
        << format_double(s.ps) << ',' << format_double(s.ps_hat) << ','
        << s.scored_token_count;
    if (texts) {
      auto it = texts->find(s.post_id);
      out << ',' << csv_field(it == texts->end() ? "" : it->second);
    }
    out << '\n';
  }
}

}  // namespace proficiency
