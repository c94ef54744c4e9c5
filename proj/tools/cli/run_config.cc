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

#include "run_config.h"

#include <fstream>
#include <set>

#include "proficiency/common.h"
#include "proficiency/random.h"

namespace proficiency::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename T>
T get(const json& value, const std::string& field) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config field '" + field + "' has the wrong type");
  }
}

std::size_t get_count(const json& value, const std::string& field) {
  if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
    throw ConfigError("config field '" + field + "' must be a non-negative integer");
  }
  return value.get<std::size_t>();
}

double get_number(const json& value, const std::string& field) {
  if (!value.is_number()) throw ConfigError("config field '" + field + "' must be a number");
  return value.get<double>();
}

std::pair<std::size_t, std::size_t> get_range(const json& value, const std::string& field) {
  if (!value.is_array() || value.size() != 2) {
    throw ConfigError("config field '" + field + "' must be a [min, max] pair");
  }
  return {get_count(value[0], field), get_count(value[1], field)};
}

fs::path get_path(const json& value, const std::string& field, const fs::path& base) {
  fs::path p = get<std::string>(value, field);
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

void check_object(const json& value, const std::string& field) {
  if (!value.is_object()) throw ConfigError("config field '" + field + "' must be an object");
}

[[noreturn]] void unknown(const std::string& field) {
  throw ConfigError("unknown config field '" + field + "'");
}

std::string mention_name(MentionMode mode) {
  return mode == MentionMode::kMaskAll ? "mask" : "strip_at";
}

void apply_paths(const json& doc, const fs::path& base, Paths& paths) {
  check_object(doc, "paths");
  for (const auto& [key, value] : doc.items()) {
    const std::string field = "paths." + key;
    if (key == "posts") paths.posts = get_path(value, field, base);
    else if (key == "users") paths.users = get_path(value, field, base);
    else if (key == "query") paths.query = get_path(value, field, base);
    else if (key == "word_vectors") paths.word_vectors = get_path(value, field, base);
    else if (key == "user_vectors") paths.user_vectors = get_path(value, field, base);
    else if (key == "lda_model") paths.lda_model = get_path(value, field, base);
    else if (key == "out") paths.out = get_path(value, field, base);
    else unknown(field);
  }
}

void apply_preprocess(const json& doc, PreprocessConfig& config) {
  check_object(doc, "preprocess");
  for (const auto& [key, value] : doc.items()) {
    const std::string field = "preprocess." + key;
    if (key == "mention_mode") {
      const auto mode = get<std::string>(value, field);
      if (mode == "mask") config.mention_mode = MentionMode::kMaskAll;
      else if (mode == "strip_at") config.mention_mode = MentionMode::kStripAt;
      else throw ConfigError(field + " must be 'mask' or 'strip_at'");
    } else if (key == "url_placeholder") {
      config.url_placeholder = get<std::string>(value, field);
    } else if (key == "number_placeholder") {
      config.number_placeholder = get<std::string>(value, field);
    } else if (key == "max_char_repeat") {
      config.max_char_repeat = static_cast<int>(get_count(value, field));
    } else {
      unknown(field);
    }
  }
}

void apply_train(const json& doc, TrainConfig& config) {
  check_object(doc, "train");
  for (const auto& [key, value] : doc.items()) {
    const std::string field = "train." + key;
    if (key == "negatives_per_word") config.negatives_per_word = get_count(value, field);
    else if (key == "initial_lr") config.initial_lr = get_number(value, field);
    else if (key == "lr_decay_factor") config.lr_decay_factor = get_number(value, field);
    else if (key == "decay_trigger") {
      const auto trigger = get<std::string>(value, field);
      if (trigger == "improvement") config.decay_trigger = DecayTrigger::kOnImprovement;
      else if (trigger == "plateau") config.decay_trigger = DecayTrigger::kOnPlateau;
      else throw ConfigError(field + " must be 'improvement' or 'plateau'");
    } else if (key == "max_epochs") config.max_epochs = get_count(value, field);
    else if (key == "patience") config.patience = get_count(value, field);
    else if (key == "validation_fraction") config.validation_fraction = get_number(value, field);
    else if (key == "negative_distribution_power")
      config.negative_distribution_power = get_number(value, field);
    else if (key == "workers") config.workers = get_count(value, field);
    else unknown(field);
  }
}

void apply_lda(const json& doc, LdaConfig& config) {
  check_object(doc, "lda");
  for (const auto& [key, value] : doc.items()) {
    const std::string field = "lda." + key;
    if (key == "topics") config.topics = get_count(value, field);
    else if (key == "passes") config.passes = get_count(value, field);
    else if (key == "alpha") {
      if (value.is_null()) config.alpha.reset();
      else config.alpha = get_number(value, field);
    } else if (key == "beta") config.beta = get_number(value, field);
    else if (key == "inference_sweeps") config.inference_sweeps = get_count(value, field);
    else if (key == "max_users") {
      if (value.is_null()) config.max_users.reset();
      else config.max_users = get_count(value, field);
    } else if (key == "averaging") {
      const auto mode = get<std::string>(value, field);
      if (mode == "post") config.averaging = LdaAveraging::kPostMean;
      else if (mode == "token") config.averaging = LdaAveraging::kTokenMean;
      else throw ConfigError(field + " must be 'post' or 'token'");
    } else unknown(field);
  }
}

void apply_task(const json& doc, RunConfig& config) {
  check_object(doc, "task");
  for (const auto& [key, value] : doc.items()) {
    const std::string field = "task." + key;
    if (key == "task") config.task = get<std::string>(value, field);
    else if (key == "folds") config.task_spec.folds = get_count(value, field);
    else if (key == "svm_c") config.task_spec.svm_c = get_number(value, field);
    else if (key == "class_weighting") {
      const auto mode = get<std::string>(value, field);
      if (mode == "none") config.task_spec.class_weighting = ClassWeighting::kNone;
      else if (mode == "balanced") config.task_spec.class_weighting = ClassWeighting::kBalanced;
      else throw ConfigError(field + " must be 'none' or 'balanced'");
    } else if (key == "balanced") config.task_spec.balanced = get<bool>(value, field);
    else if (key == "topics") config.task_spec.topics = get<std::vector<std::string>>(value, field);
    else unknown(field);
  }
}

void apply_score(const json& doc, ScoreConfig& config) {
  check_object(doc, "score");
  for (const auto& [key, value] : doc.items()) {
    const std::string field = "score." + key;
    if (key == "model") config.model = parse_score_model(get<std::string>(value, field));
    else if (key == "word_scope") config.scope = parse_word_scope(get<std::string>(value, field));
    else if (key == "brevity") config.brevity = get<bool>(value, field);
    else if (key == "reference_length") {
      if (value.is_string() && value.get<std::string>() == "auto") config.reference_length.reset();
      else config.reference_length = get_number(value, field);
    } else unknown(field);
  }
}

void apply_synth(const json& doc, SynthSettings& s) {
  check_object(doc, "synth");
  for (const auto& [key, value] : doc.items()) {
    const std::string field = "synth." + key;
    if (key == "n_users") s.n_users = get_count(value, field);
    else if (key == "topics") s.topics = get<std::vector<std::string>>(value, field);
    else if (key == "topic_vocab_size") s.topic_vocab_size = get_count(value, field);
    else if (key == "background_vocab_size") s.background_vocab_size = get_count(value, field);
    else if (key == "topic_word_rate") s.topic_word_rate = get_number(value, field);
    else if (key == "posts_per_user") s.posts_per_user = get_range(value, field);
    else if (key == "post_length") s.post_length = get_range(value, field);
    else if (key == "background_post_fraction")
      s.background_post_fraction = get_number(value, field);
    else if (key == "vector_dim") s.vector_dim = get_count(value, field);
    else if (key == "vector_coherence") s.vector_coherence = get_number(value, field);
    else if (key == "vector_norm") s.vector_norm = get_number(value, field);
    else unknown(field);
  }
}

}  // namespace

SynthConfig SynthSettings::corpus_config(std::uint64_t seed) const {
  SynthConfig config;
  config.n_users = n_users;
  std::set<std::string> prefixes;
  for (const auto& name : topics) {
    if (name.size() < 3) throw ConfigError("synth.topics: names need at least 3 letters");
    const std::string prefix = name.substr(0, 3);
    if (!prefixes.insert(prefix).second) {
      throw ConfigError("synth.topics: names must differ in their first 3 letters");
    }
    config.topics.push_back({name, make_synthetic_vocab(prefix, topic_vocab_size)});
  }
  config.background_vocab = make_synthetic_vocab("bg", background_vocab_size);
  config.topic_word_rate = topic_word_rate;
  config.posts_per_user = posts_per_user;
  config.post_length = post_length;
  config.background_post_fraction = background_post_fraction;
  config.seed = seed;
  config.validate();
  return config;
}

void RunConfig::finalize() {
  train.seed = Rng::derive(seed, "embeddings");
  lda.seed = Rng::derive(seed, "lda");
  const TaskSpec parsed = parse_task(task);
  task_spec.mode = parsed.mode;
  task_spec.positive_topic = parsed.positive_topic;
  task_spec.seed = Rng::derive(seed, "task");
  preprocess.validate();
  train.validate();
  lda.validate();
  score.validate();
  if (task_spec.folds < 2) throw ConfigError("task.folds must be >= 2");
  if (pca_components < 1) throw ConfigError("pca_components must be >= 1");
}

ordered_json RunConfig::effective() const {
  ordered_json doc;
  doc["seed"] = seed;
  doc["paths"] = {{"posts", paths.posts.generic_string()},
                  {"users", paths.users.generic_string()},
                  {"query", paths.query.generic_string()},
                  {"word_vectors", paths.word_vectors.generic_string()},
                  {"user_vectors", paths.user_vectors.generic_string()},
                  {"lda_model", paths.lda_model.generic_string()}};
  doc["preprocess"] = {{"mention_mode", mention_name(preprocess.mention_mode)},
                       {"url_placeholder", preprocess.url_placeholder},
                       {"number_placeholder", preprocess.number_placeholder},
                       {"max_char_repeat", preprocess.max_char_repeat}};
  doc["min_posts"] = min_posts;
  doc["model"] = std::string(to_string(model));
  doc["query_words_per_topic"] =
      query_words_per_topic ? ordered_json(*query_words_per_topic) : ordered_json();
  doc["train"] = {{"negatives_per_word", train.negatives_per_word},
                  {"initial_lr", train.initial_lr},
                  {"lr_decay_factor", train.lr_decay_factor},
                  {"decay_trigger", train.decay_trigger == DecayTrigger::kOnImprovement
                                        ? "improvement"
                                        : "plateau"},
                  {"max_epochs", train.max_epochs},
                  {"patience", train.patience},
                  {"validation_fraction", train.validation_fraction},
                  {"negative_distribution_power", train.negative_distribution_power}};
  doc["lda"] = {{"topics", lda.topics},
                {"passes", lda.passes},
                {"alpha", lda.alpha_value()},
                {"beta", lda.beta},
                {"inference_sweeps", lda.inference_sweeps},
                {"max_users", lda.max_users ? ordered_json(*lda.max_users) : ordered_json()},
                {"averaging", lda.averaging == LdaAveraging::kPostMean ? "post" : "token"}};
  doc["task"] = {{"task", task},
                 {"folds", task_spec.folds},
                 {"svm_c", task_spec.svm_c},
                 {"class_weighting",
                  task_spec.class_weighting == ClassWeighting::kNone ? "none" : "balanced"},
                 {"balanced", task_spec.balanced},
                 {"topics", task_spec.topics}};
  doc["score"] = {{"model", score.model == ScoreModel::kU2v ? "u2v" : "relu2v"},
                  {"word_scope", score.scope == WordScope::kAllInVocab ? "all" : "query"},
                  {"brevity", score.brevity},
                  {"reference_length", score.reference_length
                                           ? ordered_json(*score.reference_length)
                                           : ordered_json("auto")}};
  doc["pca_components"] = pca_components;
  doc["synth"] = {{"n_users", synth.n_users},
                  {"topics", synth.topics},
                  {"topic_vocab_size", synth.topic_vocab_size},
                  {"background_vocab_size", synth.background_vocab_size},
                  {"topic_word_rate", synth.topic_word_rate},
                  {"posts_per_user", {synth.posts_per_user.first, synth.posts_per_user.second}},
                  {"post_length", {synth.post_length.first, synth.post_length.second}},
                  {"background_post_fraction", synth.background_post_fraction},
                  {"vector_dim", synth.vector_dim},
                  {"vector_coherence", synth.vector_coherence},
                  {"vector_norm", synth.vector_norm}};
  return doc;
}

std::string RunConfig::hash() const {
  ordered_json doc = effective();
  doc.erase("paths");
  return hex64(fnv1a64(doc.dump()));
}

std::string RunConfig::provenance() const {
  return "proficiency " + std::string(kVersion) + " seed=" + std::to_string(seed) +
         " config=" + hash();
}

void apply_config_json(const json& doc, const fs::path& base, RunConfig& config) {
  check_object(doc, "<root>");
  for (const auto& [key, value] : doc.items()) {
    if (key == "seed") config.seed = get<std::uint64_t>(value, key);
    else if (key == "paths") apply_paths(value, base, config.paths);
    else if (key == "preprocess") apply_preprocess(value, config.preprocess);
    else if (key == "min_posts") config.min_posts = get_count(value, key);
    else if (key == "model") config.model = parse_model_id(get<std::string>(value, key));
    else if (key == "query_words_per_topic") {
      if (value.is_null()) config.query_words_per_topic.reset();
      else config.query_words_per_topic = get_count(value, key);
    } else if (key == "train") apply_train(value, config.train);
    else if (key == "lda") apply_lda(value, config.lda);
    else if (key == "task") apply_task(value, config);
    else if (key == "score") apply_score(value, config.score);
    else if (key == "pca_components") config.pca_components = get_count(value, key);
    else if (key == "synth") apply_synth(value, config.synth);
    else unknown(key);
  }
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  RunConfig config;
  apply_config_json(doc, path.parent_path(), config);
  return config;
}

std::vector<std::pair<std::string, std::string>> flatten(const ordered_json& doc) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_object()) {
      for (auto& [sub, text] : flatten(value)) out.emplace_back(key + "." + sub, text);
    } else if (value.is_string()) {
      out.emplace_back(key, value.get<std::string>());
    } else {
      out.emplace_back(key, value.dump());
    }
  }
  return out;
}

}  // namespace proficiency::cli
