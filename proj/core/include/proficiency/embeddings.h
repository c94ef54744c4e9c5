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

#ifndef PROFICIENCY_EMBEDDINGS_H_
#define PROFICIENCY_EMBEDDINGS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "proficiency/corpus.h"
#include "proficiency/features.h"

namespace proficiency {

// Pretrained word vectors. Never modified by training.
class WordEmbeddingTable {
 public:
  explicit WordEmbeddingTable(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  // Returns false and keeps the existing vector if `word` is already present.
  // Throws InvariantError on a dimension mismatch or non-finite entry.
  bool add(std::string word, std::span<const double> values);

  std::optional<std::size_t> index_of(const std::string& word) const;
  bool contains(const std::string& word) const { return index_.count(word) > 0; }
  std::span<const double> vector(std::size_t index) const {
    return {data_.data() + index * dim_, dim_};
  }
  std::optional<std::span<const double>> find(const std::string& word) const;

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

// Text interchange format: "<count> <dim>" then "<key> <v_1> ... <v_dim>".
// Words are lowercased on load; a later duplicate is dropped with a warning.
WordEmbeddingTable load_word_embeddings(const std::filesystem::path& path);
void save_word_embeddings(const WordEmbeddingTable& table,
                          const std::filesystem::path& path);

// A synthetic "pretrained" table for a synthetic corpus. Every vector has
// Euclidean norm `norm`. Words of one topic share a random unit centroid c:
// w = norm * normalize(coherence * c + sqrt(1 - coherence^2) * noise).
// With coherence 0 and dim >= vocabulary size the vectors are exactly
// orthogonal (Gram-Schmidt on Gaussian draws).
struct SynthEmbeddingConfig {
  std::size_t dim = 400;
  double coherence = 0.5;
  double norm = 4.0;
  std::uint64_t seed = 0;
};
WordEmbeddingTable synthesize_word_embeddings(const SynthConfig& corpus_config,
                                              const SynthEmbeddingConfig& config);

enum class DecayTrigger {
  kOnImprovement,  // multiply the rate whenever validation improves
  kOnPlateau,      // multiply the rate after an epoch without improvement
};

struct TrainConfig {
  std::size_t negatives_per_word = 15;
  double initial_lr = 0.00005;
  double lr_decay_factor = 0.1;
  DecayTrigger decay_trigger = DecayTrigger::kOnImprovement;
  std::size_t max_epochs = 25;
  std::size_t patience = 5;
  double validation_fraction = 0.1;
  double negative_distribution_power = 0.75;
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  // Throws ConfigError naming the offending field. initial_lr = 0 is allowed
  // (it reproduces the initialization); negative rates are not.
  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double validation_score = 0.0;
  double learning_rate = 0.0;  // rate used during this epoch
};

struct TrainingLog {
  double initial_validation_score = 0.0;
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;  // 0 = initialization
  double final_learning_rate = 0.0;
  std::uint64_t seed = 0;
  // Users without any in-vocabulary token; they keep their initial vector.
  std::vector<std::string> flagged_users;
};

class UserEmbeddingTable {
 public:
  explicit UserEmbeddingTable(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  const std::map<std::string, std::vector<double>>& vectors() const {
    return vectors_;
  }
  const std::vector<double>& vector(const std::string& user_id) const;
  bool contains(const std::string& user_id) const {
    return vectors_.count(user_id) > 0;
  }
  void set(const std::string& user_id, std::vector<double> values);

  TrainingLog& log() { return log_; }
  const TrainingLog& log() const { return log_; }

 private:
  std::size_t dim_;
  std::map<std::string, std::vector<double>> vectors_;
  TrainingLog log_;
};

// Same text format as word vectors, keyed by user id.
void save_user_embeddings(const UserEmbeddingTable& table,
                          const std::filesystem::path& path);
UserEmbeddingTable load_user_embeddings(const std::filesystem::path& path);

// One JSON record per line: a header record, then {epoch, validation_score,
// learning_rate} per epoch.
void write_training_log(const TrainingLog& log, std::ostream& out);

// Seeded i.i.d. uniform init in [-0.5/dim, 0.5/dim]; each user draws from its
// own stream so the result does not depend on user order.
std::vector<double> initial_user_vector(std::uint64_t seed,
                                        const std::string& user_id,
                                        std::size_t dim);

// Trains one vector per user by negative-sampling SGD against frozen word
// vectors. For every in-vocabulary training token w of user u:
//   u += lr * [(1 - s(w.u)) w - sum_j s(w_j.u) w_j],   j = 1..negatives,
// with negatives drawn from corpus unigram counts ^ power. Each epoch scores
// held-out posts with the same objective (fixed negatives); the best epoch's
// vectors are returned. Results do not depend on `workers`.
UserEmbeddingTable train_user_embeddings(const Corpus& corpus,
                                         const WordEmbeddingTable& words,
                                         const TrainConfig& config);

double sigmoid(double x);

double dot(std::span<const double> a, std::span<const double> b);

// s(w_i . u_u) for every query word with a vector; other words are dropped
// with a warning. Throws DataError if none remain.
FeatureMatrix u2v_features(const UserEmbeddingTable& users,
                           const WordEmbeddingTable& words,
                           const QuerySet& query);

// U2V_{u,w} * |U| / sum_k U2V_{k,w}: each column then averages to 1.
FeatureMatrix rel_u2v_features(const FeatureMatrix& u2v);

struct PcaRow {
  std::string user_id;
  std::vector<double> coordinates;
  std::string label;
};

struct PcaProjection {
  std::vector<PcaRow> rows;
  // Variance of each component's coordinates (non-increasing).
  std::vector<double> explained_variance;
};

// Projects mean-centered user vectors onto the top-k right singular vectors.
// Each component is signed so its largest-magnitude loading is positive.
// Requires at least k + 1 users and k <= dim.
PcaProjection pca_project(const UserEmbeddingTable& users, std::size_t k,
                          const std::map<std::string, std::string>& labels);

void write_pca(const PcaProjection& projection, std::ostream& out,
               std::span<const std::string> comments = {});

}  // namespace proficiency

#endif  // PROFICIENCY_EMBEDDINGS_H_
