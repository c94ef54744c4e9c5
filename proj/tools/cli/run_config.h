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

#ifndef PROFICIENCY_TOOLS_CLI_RUN_CONFIG_H_
#define PROFICIENCY_TOOLS_CLI_RUN_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "proficiency/classify.h"
#include "proficiency/corpus.h"
#include "proficiency/embeddings.h"
#include "proficiency/features.h"
#include "proficiency/lda.h"
#include "proficiency/preprocess.h"
#include "proficiency/scoring.h"

namespace proficiency::cli {

struct Paths {
  std::filesystem::path posts;
  std::filesystem::path users;
  std::filesystem::path query;
  std::filesystem::path word_vectors;
  std::filesystem::path user_vectors;
  std::filesystem::path lda_model;
  std::filesystem::path out;
};

struct SynthSettings {
  std::size_t n_users = 200;
  std::vector<std::string> topics{"alpha", "beta"};
  std::size_t topic_vocab_size = 50;
  std::size_t background_vocab_size = 500;
  double topic_word_rate = 0.3;
  std::pair<std::size_t, std::size_t> posts_per_user{20, 20};
  std::pair<std::size_t, std::size_t> post_length{30, 60};
  double background_post_fraction = 0.0;
  std::size_t vector_dim = 400;
  double vector_coherence = 0.5;
  double vector_norm = 4.0;

  SynthConfig corpus_config(std::uint64_t seed) const;
};

// Everything a command needs. Module seeds are derived from `seed`.
struct RunConfig {
  std::uint64_t seed = 0;
  Paths paths;
  PreprocessConfig preprocess;
  std::size_t min_posts = 0;  // 0 disables filtering
  ModelId model = ModelId::kTf;
  std::optional<std::size_t> query_words_per_topic;
  TrainConfig train;
  LdaConfig lda;
  std::string task = "multilabel";
  TaskSpec task_spec;  // mode/topic filled from `task`
  ScoreConfig score;
  std::size_t pca_components = 2;
  SynthSettings synth;

  // Seeds and task fields are recomputed from the settings above.
  void finalize();
  // Canonical form, without the output directory.
  nlohmann::ordered_json effective() const;
  // Hash of effective() minus the file paths, so a config hashes the same on
  // every machine and from every working directory.
  std::string hash() const;
  std::string provenance() const;
};

// Reads a JSON config. Relative paths are resolved against the file's
// directory. Unknown fields are a ConfigError naming the field.
RunConfig load_run_config(const std::filesystem::path& path);
void apply_config_json(const nlohmann::json& doc, const std::filesystem::path& base,
                       RunConfig& config);

std::vector<std::pair<std::string, std::string>> flatten(
    const nlohmann::ordered_json& doc);

}  // namespace proficiency::cli

#endif  // PROFICIENCY_TOOLS_CLI_RUN_CONFIG_H_
