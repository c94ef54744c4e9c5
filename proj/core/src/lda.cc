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

#include "proficiency/lda.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "proficiency/common.h"
#include "proficiency/random.h"

namespace proficiency {

void LdaConfig::validate() const {
  if (topics < 1) throw ConfigError("lda.topics must be >= 1");
  if (passes < 1) throw ConfigError("lda.passes must be >= 1");
  if (inference_sweeps < 1) throw ConfigError("lda.inference_sweeps must be >= 1");
  if (!(alpha_value() > 0.0)) throw ConfigError("lda.alpha must be positive");
  if (!(beta > 0.0)) throw ConfigError("lda.beta must be positive");
  if (max_users && *max_users < 1) throw ConfigError("lda.max_users must be >= 1");
}

LdaModel::LdaModel(std::vector<std::string> vocab, std::vector<double> phi,
                   std::size_t topics, double alpha, double beta,
                   std::uint64_t seed, std::size_t passes,
                   std::size_t inference_sweeps)
    : vocab_(std::move(vocab)),
      phi_(std::move(phi)),
      topics_(topics),
      alpha_(alpha),
      beta_(beta),
      seed_(seed),
      passes_(passes),
      inference_sweeps_(inference_sweeps) {
  if (phi_.size() != topics_ * vocab_.size()) {
    throw InvariantError("phi has " + std::to_string(phi_.size()) +
                         " entries, expected K x V = " +
                         std::to_string(topics_ * vocab_.size()));
  }
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) {
      throw DataError("duplicate vocabulary word '" + vocab_[i] + "'");
    }
  }
}

std::optional<std::size_t> LdaModel::word_index(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::size_t sample_index(Rng& rng, const std::vector<double>& cumulative) {
  const double x = rng.uniform() * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
  return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
}

std::vector<std::string> training_users(const Corpus& corpus, const LdaConfig& config) {
  std::vector<std::string> ids = corpus.user_ids();
  if (config.max_users && *config.max_users < ids.size()) {
    std::stable_sort(ids.begin(), ids.end(), [&](const auto& a, const auto& b) {
      return corpus.user(a).post_count > corpus.user(b).post_count;
    });
    ids.resize(*config.max_users);
  }
  return ids;
}

}  // namespace

LdaModel train_lda(const Corpus& corpus, const LdaConfig& config,
                   LdaTrainingTrace* trace) {
  config.validate();
  if (!corpus.preprocessed()) {
    throw InvariantError("corpus must be preprocessed before training LDA");
  }
  const std::vector<std::string> users = training_users(corpus, config);
  const std::set<std::string> excluded(config.excluded_tokens.begin(),
                                       config.excluded_tokens.end());
  std::set<std::string> vocab_set;
  for (const auto& id : users) {
    for (const Post& post : corpus.posts(id)) {
      for (const auto& token : post.tokens) {
        if (!excluded.count(token)) vocab_set.insert(token);
      }
    }
  }
  if (vocab_set.empty()) throw DataError("LDA vocabulary is empty");
  std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vocab.size(); ++i) index.emplace(vocab[i], i);

  std::vector<std::vector<std::size_t>> docs;
  for (const auto& id : users) {
    for (const Post& post : corpus.posts(id)) {
      std::vector<std::size_t> words;
      for (const auto& token : post.tokens) {
        if (auto it = index.find(token); it != index.end()) words.push_back(it->second);
      }
      docs.push_back(std::move(words));
    }
  }

  const std::size_t K = config.topics;
  const std::size_t V = vocab.size();
  const double alpha = config.alpha_value();
  const double beta = config.beta;
  const double v_beta = static_cast<double>(V) * beta;

  Rng rng(Rng::derive(config.seed, "lda-train"));
  std::vector<std::vector<std::size_t>> z(docs.size());
  std::vector<std::size_t> n_dt(docs.size() * K, 0);
  std::vector<std::size_t> n_wt(V * K, 0);
  std::vector<std::size_t> n_t(K, 0);
  std::size_t total_tokens = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    z[d].resize(docs[d].size());
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const std::size_t t = rng.below(K);
      z[d][i] = t;
      ++n_dt[d * K + t];
      ++n_wt[docs[d][i] * K + t];
      ++n_t[t];
    }
    total_tokens += docs[d].size();
  }
  auto record = [&] {
    if (!trace) return;
    std::size_t assigned = 0;
    for (std::size_t t = 0; t < K; ++t) assigned += n_t[t];
    trace->assigned_tokens.push_back(assigned);
  };
  if (trace) trace->total_tokens = total_tokens;
  record();

  std::vector<double> cumulative(K);
  for (std::size_t pass = 0; pass < config.passes; ++pass) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (std::size_t i = 0; i < docs[d].size(); ++i) {
        const std::size_t w = docs[d][i];
        std::size_t t = z[d][i];
        --n_dt[d * K + t];
        --n_wt[w * K + t];
        --n_t[t];
        double acc = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          acc += (static_cast<double>(n_dt[d * K + k]) + alpha) *
                 (static_cast<double>(n_wt[w * K + k]) + beta) /
                 (static_cast<double>(n_t[k]) + v_beta);
          cumulative[k] = acc;
        }
        t = sample_index(rng, cumulative);
        z[d][i] = t;
        ++n_dt[d * K + t];
        ++n_wt[w * K + t];
        ++n_t[t];
      }
    }
    record();
  }

  std::vector<double> phi(K * V);
  for (std::size_t t = 0; t < K; ++t) {
    const double denom = static_cast<double>(n_t[t]) + v_beta;
    for (std::size_t w = 0; w < V; ++w) {
      phi[t * V + w] = (static_cast<double>(n_wt[w * K + t]) + beta) / denom;
    }
  }
  return LdaModel(std::move(vocab), std::move(phi), K, alpha, beta, config.seed,
                  config.passes, config.inference_sweeps);
}

TopicDistribution infer_post_topics(const LdaModel& model, const Post& post) {
  const std::size_t K = model.num_topics();
  TopicDistribution out;
  out.post_id = post.post_id;
  std::vector<std::size_t> words;
  for (const auto& token : post.tokens) {
    if (auto w = model.word_index(token)) words.push_back(*w);
  }
  out.tokens = words.size();
  if (words.empty() || K == 1) {
    out.theta.assign(K, 1.0 / static_cast<double>(K));
    return out;
  }

  Rng rng(Rng::derive(model.seed(), "lda-infer:" + post.post_id));
  std::vector<std::size_t> z(words.size());
  std::vector<std::size_t> n_t(K, 0);
  for (std::size_t i = 0; i < words.size(); ++i) {
    z[i] = rng.below(K);
    ++n_t[z[i]];
  }
  const double alpha = model.alpha();
  const double denom = static_cast<double>(words.size()) + static_cast<double>(K) * alpha;
  const std::size_t sweeps = model.inference_sweeps();
  std::vector<double> cumulative(K);
  std::vector<double> theta(K, 0.0);
  std::size_t averaged = 0;
  for (std::size_t s = 1; s <= sweeps; ++s) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      --n_t[z[i]];
      double acc = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        acc += (static_cast<double>(n_t[k]) + alpha) * model.phi(k, words[i]);
        cumulative[k] = acc;
      }
      z[i] = sample_index(rng, cumulative);
      ++n_t[z[i]];
    }
    if (s > sweeps / 2) {
      for (std::size_t k = 0; k < K; ++k) {
        theta[k] += (static_cast<double>(n_t[k]) + alpha) / denom;
      }
      ++averaged;
    }
  }
  for (auto& v : theta) v /= static_cast<double>(averaged);
  out.theta = std::move(theta);
  return out;
}

std::vector<double> user_lda_features(const LdaModel& model, const Corpus& corpus,
                                      const std::string& user_id,
                                      LdaAveraging averaging) {
  const auto& posts = corpus.posts(user_id);
  const std::size_t K = model.num_topics();
  std::vector<TopicDistribution> mixtures;
  std::size_t total_tokens = 0;
  for (const Post& post : posts) {
    mixtures.push_back(infer_post_topics(model, post));
    total_tokens += mixtures.back().tokens;
  }
  const bool by_tokens = averaging == LdaAveraging::kTokenMean && total_tokens > 0;
  std::vector<double> mean(K, 0.0);
  for (const auto& m : mixtures) {
    const double weight = by_tokens ? static_cast<double>(m.tokens) /
                                          static_cast<double>(total_tokens)
                                    : 1.0 / static_cast<double>(mixtures.size());
    for (std::size_t k = 0; k < K; ++k) mean[k] += weight * m.theta[k];
  }
  return mean;
}

FeatureMatrix lda_features(const LdaModel& model, const Corpus& corpus,
                           LdaAveraging averaging) {
  std::vector<std::string> columns;
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    columns.push_back("topic_" + std::to_string(k));
  }
  FeatureMatrix matrix(ModelId::kLda, std::move(columns));
  for (const auto& id : corpus.user_ids()) {
    matrix.set_row(id, user_lda_features(model, corpus, id, averaging));
  }
  return matrix;
}

void save_lda_model(const LdaModel& model, const std::filesystem::path& path,
                    std::span<const std::string> comments) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& line : comments) out << "# " << line << '\n';
  out << "lda " << model.num_topics() << ' ' << model.vocab_size() << ' '
      << format_double(model.alpha()) << ' ' << format_double(model.beta()) << ' '
      << model.seed() << ' ' << model.passes() << ' ' << model.inference_sweeps()
      << '\n';
  for (const auto& word : model.vocab()) out << word << '\n';
  for (std::size_t t = 0; t < model.num_topics(); ++t) {
    const auto row = model.topic(t);
    for (std::size_t w = 0; w < row.size(); ++w) {
      if (w > 0) out << ' ';
      out << format_double(row[w]);
    }
    out << '\n';
  }
}

LdaModel load_lda_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.rfind("#", 0) == 0) continue;
      return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) {
    throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + what);
  };
  if (!next_line()) fail("missing header");
  std::istringstream header(line);
  std::string magic, alpha_text, beta_text;
  std::size_t K = 0, V = 0, passes = 0, sweeps = 0;
  std::uint64_t seed = 0;
  if (!(header >> magic >> K >> V >> alpha_text >> beta_text >> seed >> passes >> sweeps) ||
      magic != "lda" || K == 0 || V == 0) {
    fail("expected 'lda <K> <V> <alpha> <beta> <seed> <passes> <sweeps>'");
  }
  std::vector<std::string> vocab;
  for (std::size_t i = 0; i < V; ++i) {
    if (!next_line() || line.empty()) fail("missing vocabulary word");
    vocab.push_back(line);
  }
  std::vector<double> phi;
  phi.reserve(K * V);
  for (std::size_t t = 0; t < K; ++t) {
    if (!next_line()) fail("missing phi row");
    std::istringstream fields(line);
    std::string field;
    std::size_t n = 0;
    while (fields >> field) {
      phi.push_back(parse_double(field));
      ++n;
    }
    if (n != V) fail("phi row has " + std::to_string(n) + " values, expected " +
                     std::to_string(V));
  }
  return LdaModel(std::move(vocab), std::move(phi), K, parse_double(alpha_text),
                  parse_double(beta_text), seed, passes, sweeps);
}

}  // namespace proficiency
