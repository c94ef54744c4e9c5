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

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "proficiency/common.h"
#include "proficiency/embeddings.h"
#include "proficiency/random.h"

namespace proficiency {

void TrainConfig::validate() const {
  if (!std::isfinite(initial_lr) || initial_lr < 0.0) {
    throw ConfigError("train.initial_lr must be a finite value >= 0");
  }
  if (!(lr_decay_factor > 0.0 && lr_decay_factor <= 1.0)) {
    throw ConfigError("train.lr_decay_factor must lie in (0, 1]");
  }
  if (max_epochs < 1) throw ConfigError("train.max_epochs must be >= 1");
  if (patience < 1 || patience > max_epochs) {
    throw ConfigError("train.patience must lie in [1, max_epochs]");
  }
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("train.validation_fraction must lie in (0, 1)");
  }
  if (!std::isfinite(negative_distribution_power) || negative_distribution_power < 0.0) {
    throw ConfigError("train.negative_distribution_power must be >= 0");
  }
  if (workers < 1) throw ConfigError("train.workers must be >= 1");
}

std::vector<double> initial_user_vector(std::uint64_t seed,
                                        const std::string& user_id,
                                        std::size_t dim) {
  Rng rng(Rng::derive(seed, "init:" + user_id));
  const double bound = 0.5 / static_cast<double>(dim);
  std::vector<double> v(dim);
  for (auto& x : v) x = rng.uniform(-bound, bound);
  return v;
}

namespace {

using WordIndex = std::uint32_t;

double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

// Draws word indices proportionally to count^power.
class NegativeSampler {
 public:
  NegativeSampler(const std::vector<std::size_t>& counts, double power) {
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] == 0) continue;
      total_ += std::pow(static_cast<double>(counts[i]), power);
      cumulative_.push_back(total_);
      words_.push_back(static_cast<WordIndex>(i));
    }
  }

  std::size_t vocabulary_size() const { return words_.size(); }

  // A negative different from `positive`, redrawn on collision. With a
  // single-word vocabulary there is no valid negative.
  std::optional<WordIndex> draw(Rng& rng, WordIndex positive) const {
    if (words_.size() < 2) return std::nullopt;
    while (true) {
      const double x = rng.uniform() * total_;
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
      const auto pos = std::min<std::size_t>(it - cumulative_.begin(), words_.size() - 1);
      if (words_[pos] != positive) return words_[pos];
    }
  }

 private:
  std::vector<double> cumulative_;
  std::vector<WordIndex> words_;
  double total_ = 0.0;
};

struct UserData {
  std::string id;
  std::vector<std::vector<WordIndex>> train_posts;
  std::vector<std::vector<WordIndex>> validation_posts;
  // negatives_per_word entries per validation token, in token order.
  std::vector<std::vector<WordIndex>> validation_negatives;
  bool flagged = false;
};

struct ScoreSum {
  double sum = 0.0;
  std::size_t posts = 0;
};

class Trainer {
 public:
  Trainer(const Corpus& corpus, const WordEmbeddingTable& words,
          const TrainConfig& config)
      : words_(words), config_(config), dim_(words.dim()) {
    std::vector<std::size_t> counts(words.size(), 0);
    for (const auto& id : corpus.user_ids()) {
      UserData data;
      data.id = id;
      std::vector<std::vector<WordIndex>> posts;
      std::size_t in_vocab = 0;
      for (const Post& post : corpus.posts(id)) {
        std::vector<WordIndex> indices;
        for (const auto& token : post.tokens) {
          if (auto index = words.index_of(token)) {
            indices.push_back(static_cast<WordIndex>(*index));
            ++counts[*index];
          }
        }
        in_vocab += indices.size();
        posts.push_back(std::move(indices));
      }
      data.flagged = in_vocab == 0;
      split(data, std::move(posts));
      users_.push_back(std::move(data));
    }
    if (std::all_of(users_.begin(), users_.end(),
                    [](const UserData& u) { return u.flagged; })) {
      throw DataError("no user has any token with a word vector");
    }
    sampler_.emplace(counts, config.negative_distribution_power);

    std::size_t validation_posts = 0;
    for (const auto& u : users_) validation_posts += u.validation_posts.size();
    if (validation_posts == 0) {
      log_warning("no held-out posts with in-vocabulary tokens; validating on "
                  "training posts");
      for (auto& u : users_) u.validation_posts = u.train_posts;
    }
    for (auto& u : users_) draw_validation_negatives(u);
  }

  UserEmbeddingTable run() {
    std::vector<std::vector<double>> vectors;
    for (const auto& u : users_) {
      vectors.push_back(initial_user_vector(config_.seed, u.id, dim_));
    }
    UserEmbeddingTable result(dim_);
    TrainingLog& log = result.log();
    log.seed = config_.seed;
    for (const auto& u : users_) {
      if (u.flagged) {
        log.flagged_users.push_back(u.id);
        log_warning("user '" + u.id + "' has no in-vocabulary token; keeping "
                    "its initial vector");
      }
    }

    log.initial_validation_score = validation_score(vectors);
    double best_score = log.initial_validation_score;
    std::vector<std::vector<double>> best = vectors;
    double lr = config_.initial_lr;
    std::size_t without_improvement = 0;

    for (std::size_t epoch = 1; epoch <= config_.max_epochs; ++epoch) {
      train_epoch(vectors, lr, epoch);
      const double score = validation_score(vectors);
      log.epochs.push_back({epoch, score, lr});
      log_info("epoch " + std::to_string(epoch) + " validation " +
               format_double(score) + " lr " + format_double(lr));
      if (score > best_score) {
        best_score = score;
        best = vectors;
        log.best_epoch = epoch;
        without_improvement = 0;
        if (config_.decay_trigger == DecayTrigger::kOnImprovement) {
          lr *= config_.lr_decay_factor;
        }
      } else {
        ++without_improvement;
        if (config_.decay_trigger == DecayTrigger::kOnPlateau) {
          lr *= config_.lr_decay_factor;
        }
        if (without_improvement >= config_.patience) break;
      }
    }
    log.final_learning_rate = lr;
    for (std::size_t i = 0; i < users_.size(); ++i) {
      result.set(users_[i].id, std::move(best[i]));
    }
    return result;
  }

 private:
  void split(UserData& data, std::vector<std::vector<WordIndex>> posts) {
    const std::size_t n = posts.size();
    std::size_t n_validation = 0;
    if (n >= 2) {
      const auto target = static_cast<std::size_t>(
          std::llround(config_.validation_fraction * static_cast<double>(n)));
      n_validation = std::clamp<std::size_t>(target, 1, n - 1);
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(Rng::derive(config_.seed, "split:" + data.id));
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<char> held_out(n, 0);
    for (std::size_t i = 0; i < n_validation; ++i) held_out[order[i]] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (posts[i].empty()) continue;
      (held_out[i] ? data.validation_posts : data.train_posts)
          .push_back(std::move(posts[i]));
    }
  }

  void draw_validation_negatives(UserData& u) const {
    Rng rng(Rng::derive(config_.seed, "validation-negatives:" + u.id));
    u.validation_negatives.clear();
    for (const auto& post : u.validation_posts) {
      std::vector<WordIndex> negatives;
      for (WordIndex w : post) {
        for (std::size_t j = 0; j < config_.negatives_per_word; ++j) {
          if (auto neg = sampler_->draw(rng, w)) negatives.push_back(*neg);
        }
      }
      u.validation_negatives.push_back(std::move(negatives));
    }
  }

  void train_user(const UserData& u, std::vector<double>& vec, double lr,
                  std::size_t epoch) const {
    Rng rng(Rng::derive(config_.seed, "epoch:" + std::to_string(epoch) + ":" + u.id));
    std::vector<double> grad(dim_);
    for (const auto& post : u.train_posts) {
      for (WordIndex w : post) {
        std::fill(grad.begin(), grad.end(), 0.0);
        auto positive = words_.vector(w);
        const double g_pos = 1.0 - sigmoid(dot(positive, vec));
        for (std::size_t i = 0; i < dim_; ++i) grad[i] += g_pos * positive[i];
        for (std::size_t j = 0; j < config_.negatives_per_word; ++j) {
          auto neg = sampler_->draw(rng, w);
          if (!neg) break;
          auto negative = words_.vector(*neg);
          const double g_neg = -sigmoid(dot(negative, vec));
          for (std::size_t i = 0; i < dim_; ++i) grad[i] += g_neg * negative[i];
        }
        for (std::size_t i = 0; i < dim_; ++i) vec[i] += lr * grad[i];
      }
    }
  }

  ScoreSum score_user(const UserData& u, const std::vector<double>& vec) const {
    ScoreSum out;
    for (std::size_t p = 0; p < u.validation_posts.size(); ++p) {
      const auto& post = u.validation_posts[p];
      const auto& negatives = u.validation_negatives[p];
      double sum = 0.0;
      for (WordIndex w : post) sum += log_sigmoid(dot(words_.vector(w), vec));
      for (WordIndex n : negatives) sum += log_sigmoid(-dot(words_.vector(n), vec));
      out.sum += sum / static_cast<double>(post.size());
      out.posts += 1;
    }
    return out;
  }

  // Runs fn(i) for every non-flagged user index, sharded over workers.
  template <typename Fn>
  void for_each_user(Fn&& fn) const {
    const std::size_t workers = std::min(config_.workers, users_.size());
    auto shard = [&](std::size_t w) {
      for (std::size_t i = w; i < users_.size(); i += workers) {
        if (!users_[i].flagged) fn(i);
      }
    };
    if (workers <= 1) {
      shard(0);
      return;
    }
    std::vector<std::jthread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(shard, w);
  }

  void train_epoch(std::vector<std::vector<double>>& vectors, double lr,
                   std::size_t epoch) const {
    for_each_user([&](std::size_t i) { train_user(users_[i], vectors[i], lr, epoch); });
  }

  double validation_score(const std::vector<std::vector<double>>& vectors) const {
    std::vector<ScoreSum> parts(users_.size());
    for_each_user([&](std::size_t i) { parts[i] = score_user(users_[i], vectors[i]); });
    ScoreSum total;
    for (const auto& part : parts) {
      total.sum += part.sum;
      total.posts += part.posts;
    }
    return total.posts > 0 ? total.sum / static_cast<double>(total.posts) : 0.0;
  }

  const WordEmbeddingTable& words_;
  const TrainConfig& config_;
  std::size_t dim_;
  std::vector<UserData> users_;
  std::optional<NegativeSampler> sampler_;
};

}  // namespace

UserEmbeddingTable train_user_embeddings(const Corpus& corpus,
                                         const WordEmbeddingTable& words,
                                         const TrainConfig& config) {
  config.validate();
  if (!corpus.preprocessed()) {
    throw InvariantError("corpus must be preprocessed before training embeddings");
  }
  if (words.size() == 0) throw DataError("word embedding table is empty");
  return Trainer(corpus, words, config).run();
}

void write_training_log(const TrainingLog& log, std::ostream& out) {
  nlohmann::ordered_json header;
  header["type"] = "summary";
  header["seed"] = log.seed;
  header["initial_validation_score"] = log.initial_validation_score;
  header["epochs_run"] = log.epochs.size();
  header["best_epoch"] = log.best_epoch;
  header["final_learning_rate"] = log.final_learning_rate;
  header["flagged_users"] = log.flagged_users;
  out << header.dump() << '\n';
  for (const auto& e : log.epochs) {
    nlohmann::ordered_json record;
    record["epoch"] = e.epoch;
    record["validation_score"] = e.validation_score;
    record["learning_rate"] = e.learning_rate;
    out << record.dump() << '\n';
  }
}

}  // namespace proficiency
