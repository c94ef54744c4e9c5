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

#include "commands.h"

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "proficiency/classify.h"
#include "proficiency/common.h"
#include "proficiency/corpus.h"
#include "proficiency/embeddings.h"
#include "proficiency/features.h"
#include "proficiency/lda.h"
#include "proficiency/model_features.h"
#include "proficiency/preprocess.h"
#include "proficiency/random.h"
#include "proficiency/scoring.h"
#include "run_config.h"

namespace proficiency::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string posts;
  std::string users;
  std::string query;
  std::string word_vectors;
  std::string user_vectors;
  std::string lda_model;
  std::string model;
  std::string task;
  bool balanced = false;
  std::optional<std::size_t> workers;
  std::optional<std::size_t> min_posts;
  std::optional<std::size_t> query_words;
  bool with_text = false;
  std::string user;
  bool quiet = false;
  bool verbose = false;
};

void add_common_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "JSON run configuration");
  cmd->add_option("--seed", flags.seed, "Global seed");
  cmd->add_option("--out", flags.out, "Output directory");
  cmd->add_option("--posts", flags.posts, "Posts file (JSON lines)");
  cmd->add_option("--users", flags.users, "Users/labels file (JSON lines)");
  cmd->add_option("--query", flags.query, "Query file (topic -> words)");
  cmd->add_option("--word-vectors", flags.word_vectors, "Word embedding table");
  cmd->add_option("--user-vectors", flags.user_vectors, "Trained user embeddings");
  cmd->add_option("--lda-model", flags.lda_model, "Trained LDA model");
  cmd->add_option("--model", flags.model, "tf|tfidf|u2v|relu2v|lda");
  cmd->add_option("--task", flags.task, "binary:<topic> or multilabel");
  cmd->add_flag("--balanced", flags.balanced, "Evaluate on a balanced subset");
  cmd->add_option("--workers", flags.workers, "Embedding training threads");
  cmd->add_option("--min-posts", flags.min_posts, "Drop users with fewer posts");
  cmd->add_option("--query-words", flags.query_words, "Keep the first N words per topic");
  cmd->add_flag("--with-text", flags.with_text, "Include post text in score output");
  cmd->add_option("--user", flags.user, "Score only this user");
  cmd->add_flag("--quiet", flags.quiet, "Suppress warnings");
  cmd->add_flag("--verbose", flags.verbose, "Log progress");
}

RunConfig build_config(const Flags& flags) {
  RunConfig config;
  if (!flags.config.empty()) config = load_run_config(flags.config);
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.out.empty()) config.paths.out = flags.out;
  if (!flags.posts.empty()) config.paths.posts = flags.posts;
  if (!flags.users.empty()) config.paths.users = flags.users;
  if (!flags.query.empty()) config.paths.query = flags.query;
  if (!flags.word_vectors.empty()) config.paths.word_vectors = flags.word_vectors;
  if (!flags.user_vectors.empty()) config.paths.user_vectors = flags.user_vectors;
  if (!flags.lda_model.empty()) config.paths.lda_model = flags.lda_model;
  if (!flags.model.empty()) config.model = parse_model_id(flags.model);
  if (!flags.task.empty()) config.task = flags.task;
  if (flags.balanced) config.task_spec.balanced = true;
  if (flags.workers) config.train.workers = *flags.workers;
  if (flags.min_posts) config.min_posts = *flags.min_posts;
  if (flags.query_words) config.query_words_per_topic = *flags.query_words;
  config.finalize();
  return config;
}

void require_file(const fs::path& path, const std::string& field) {
  if (path.empty()) throw ConfigError("paths." + field + " is required");
  if (!fs::is_regular_file(path)) {
    throw DataError("paths." + field + ": no such file: " + path.string());
  }
}

fs::path output_dir(const RunConfig& config) {
  if (config.paths.out.empty()) throw ConfigError("paths.out is required (--out)");
  fs::create_directories(config.paths.out);
  return config.paths.out;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::vector<std::string> header_comments(const RunConfig& config) {
  return {config.provenance()};
}

void check_corpus_inputs(const RunConfig& config) {
  require_file(config.paths.posts, "posts");
  if (!config.paths.users.empty()) require_file(config.paths.users, "users");
}

Corpus load_prepared_corpus(const RunConfig& config) {
  Corpus corpus = load_corpus(config.paths.posts, config.paths.users);
  corpus = preprocess_corpus(corpus, config.preprocess);
  if (config.min_posts > 0) corpus = filter_min_posts(corpus, config.min_posts);
  log_info("corpus: " + std::to_string(corpus.num_users()) + " users, " +
           std::to_string(corpus.num_posts()) + " posts, " +
           std::to_string(corpus.num_tokens()) + " tokens");
  return corpus;
}

QuerySet load_query(const RunConfig& config) {
  QuerySet query = load_query_set(config.paths.query);
  if (config.query_words_per_topic) query = query.truncated(*config.query_words_per_topic);
  return query;
}

bool needs_query(ModelId model) { return model != ModelId::kLda; }
bool needs_embeddings(ModelId model) {
  return model == ModelId::kU2v || model == ModelId::kRelU2v;
}

// Checks every input a model needs before any work starts.
void check_model_inputs(const RunConfig& config) {
  check_corpus_inputs(config);
  if (needs_query(config.model)) require_file(config.paths.query, "query");
  if (needs_embeddings(config.model)) {
    require_file(config.paths.word_vectors, "word_vectors");
    if (!config.paths.user_vectors.empty()) {
      require_file(config.paths.user_vectors, "user_vectors");
    }
  }
  if (config.model == ModelId::kLda && !config.paths.lda_model.empty()) {
    require_file(config.paths.lda_model, "lda_model");
  }
}

// Loaded or freshly trained artifacts; owns what ModelArtifacts points to.
struct ArtifactStore {
  std::optional<WordEmbeddingTable> words;
  std::optional<UserEmbeddingTable> users;
  std::optional<LdaModel> lda;

  ModelArtifacts view(const RunConfig& config) const {
    ModelArtifacts a;
    a.words = words ? &*words : nullptr;
    a.users = users ? &*users : nullptr;
    a.lda = lda ? &*lda : nullptr;
    a.lda_averaging = config.lda.averaging;
    return a;
  }
};

UserEmbeddingTable obtain_user_vectors(const RunConfig& config, const Corpus& corpus,
                                       const WordEmbeddingTable& words) {
  if (!config.paths.user_vectors.empty()) {
    return load_user_embeddings(config.paths.user_vectors);
  }
  log_info("training user embeddings");
  return train_user_embeddings(corpus, words, config.train);
}

ArtifactStore obtain_artifacts(const RunConfig& config, const Corpus& corpus) {
  ArtifactStore store;
  if (needs_embeddings(config.model)) {
    store.words = load_word_embeddings(config.paths.word_vectors);
    store.users = obtain_user_vectors(config, corpus, *store.words);
  }
  if (config.model == ModelId::kLda) {
    if (!config.paths.lda_model.empty()) {
      store.lda = load_lda_model(config.paths.lda_model);
    } else {
      log_info("training LDA");
      store.lda = train_lda(corpus, config.lda);
    }
  }
  return store;
}

std::string label_string(const std::set<std::string>& labels) {
  std::string out;
  for (const auto& l : labels) {
    if (!out.empty()) out += '|';
    out += l;
  }
  return out;
}

int cmd_synth(const RunConfig& config, std::ostream& out) {
  const fs::path dir = output_dir(config);
  const SynthConfig corpus_config =
      config.synth.corpus_config(Rng::derive(config.seed, "synth"));
  const SyntheticCorpus synth = generate_synthetic_corpus(corpus_config);
  write_corpus(synth.corpus, dir / "posts.jsonl", dir / "users.jsonl");

  SynthEmbeddingConfig vectors;
  vectors.dim = config.synth.vector_dim;
  vectors.coherence = config.synth.vector_coherence;
  vectors.norm = config.synth.vector_norm;
  vectors.seed = Rng::derive(config.seed, "synth-vectors");
  save_word_embeddings(synthesize_word_embeddings(corpus_config, vectors),
                       dir / "word_vectors.txt");

  std::vector<QuerySet::Topic> topics;
  for (const auto& topic : corpus_config.topics) topics.emplace_back(topic.name, topic.vocab);
  save_query_set(QuerySet(std::move(topics)), dir / "query.json");

  ordered_json manifest;
  manifest["provenance"] = config.provenance();
  manifest["user_topic"] = synth.manifest.user_topic;
  manifest["post_counts"] = synth.manifest.post_counts;
  manifest["background_posts"] = synth.manifest.background_posts;
  open_output(dir / "manifest.json") << manifest.dump(2) << '\n';

  out << "wrote " << synth.corpus.num_users() << " users, " << synth.corpus.num_posts()
      << " posts to " << dir.string() << '\n';
  return kExitOk;
}

int cmd_ingest(const RunConfig& config, std::ostream& out) {
  check_corpus_inputs(config);
  const fs::path dir = output_dir(config);
  const Corpus corpus = load_prepared_corpus(config);
  write_corpus(corpus, dir / "posts.jsonl", dir / "users.jsonl");
  ordered_json summary;
  summary["provenance"] = config.provenance();
  summary["users"] = corpus.num_users();
  summary["posts"] = corpus.num_posts();
  summary["tokens"] = corpus.num_tokens();
  ordered_json per_user = ordered_json::object();
  for (const auto& [id, record] : corpus.users()) {
    per_user[id] = {{"posts", record.post_count},
                    {"tokens", record.token_count},
                    {"labels", record.labels}};
  }
  summary["per_user"] = std::move(per_user);
  open_output(dir / "ingest_summary.json") << summary.dump(2) << '\n';
  out << corpus.num_users() << " users, " << corpus.num_posts() << " posts, "
      << corpus.num_tokens() << " tokens\n";
  return kExitOk;
}

int cmd_featurize(const RunConfig& config, std::ostream& out) {
  check_model_inputs(config);
  const fs::path dir = output_dir(config);
  const Corpus corpus = load_prepared_corpus(config);
  const QuerySet query = needs_query(config.model) ? load_query(config) : QuerySet();
  const ArtifactStore store = obtain_artifacts(config, corpus);
  const FeatureMatrix features =
      build_feature_matrix(config.model, corpus, query, store.view(config));
  const fs::path path = dir / ("features_" + std::string(to_string(config.model)) + ".csv");
  auto file = open_output(path);
  write_feature_matrix(features, file, header_comments(config));
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

int cmd_train_embeddings(const RunConfig& config, std::ostream& out) {
  check_corpus_inputs(config);
  require_file(config.paths.word_vectors, "word_vectors");
  const fs::path dir = output_dir(config);
  const Corpus corpus = load_prepared_corpus(config);
  const WordEmbeddingTable words = load_word_embeddings(config.paths.word_vectors);
  const UserEmbeddingTable users = train_user_embeddings(corpus, words, config.train);
  save_user_embeddings(users, dir / "user_vectors.txt");
  auto log = open_output(dir / "training_log.jsonl");
  log << ordered_json{{"provenance", config.provenance()}}.dump() << '\n';
  write_training_log(users.log(), log);
  out << "trained " << users.size() << " user vectors; best epoch "
      << users.log().best_epoch << '\n';
  return kExitOk;
}

int cmd_train_lda(const RunConfig& config, std::ostream& out) {
  check_corpus_inputs(config);
  const fs::path dir = output_dir(config);
  const Corpus corpus = load_prepared_corpus(config);
  const LdaModel model = train_lda(corpus, config.lda);
  save_lda_model(model, dir / "lda_model.txt", header_comments(config));
  out << "trained " << model.num_topics() << " topics over " << model.vocab_size()
      << " words\n";
  return kExitOk;
}

std::string report_name(const RunConfig& config) {
  std::string task = config.task;
  for (auto& c : task) {
    if (c == ':') c = '-';
  }
  return "report_" + std::string(to_string(config.model)) + "_" + task + ".json";
}

int cmd_evaluate(const RunConfig& config, std::ostream& out) {
  check_model_inputs(config);
  const fs::path dir = output_dir(config);
  const Corpus corpus = load_prepared_corpus(config);
  const QuerySet query = needs_query(config.model) ? load_query(config) : QuerySet();
  const ArtifactStore store = obtain_artifacts(config, corpus);
  const FeatureMatrix features =
      build_feature_matrix(config.model, corpus, query, store.view(config));
  EvalReport report = cross_validate(features, corpus.labels(), config.task_spec);
  report.config_hash = config.hash();
  report.config = flatten(config.effective());
  report.config.emplace_back("provenance", config.provenance());
  const fs::path path = dir / report_name(config);
  open_output(path) << serialize_report(report);
  out << summary_line(report) << '\n';
  return kExitOk;
}

int cmd_score(const RunConfig& config, const Flags& flags, std::ostream& out) {
  check_corpus_inputs(config);
  require_file(config.paths.word_vectors, "word_vectors");
  if (!config.paths.user_vectors.empty()) require_file(config.paths.user_vectors, "user_vectors");
  if (config.score.scope == WordScope::kQueryRestricted) {
    require_file(config.paths.query, "query");
  }
  const fs::path dir = output_dir(config);
  const Corpus corpus = load_prepared_corpus(config);
  if (!flags.user.empty() && !corpus.contains(flags.user)) {
    throw DataError("unknown user '" + flags.user + "'");
  }
  const WordEmbeddingTable words = load_word_embeddings(config.paths.word_vectors);
  const UserEmbeddingTable users = obtain_user_vectors(config, corpus, words);
  std::optional<QuerySet> query;
  if (config.score.scope == WordScope::kQueryRestricted) query = load_query(config);

  std::set<std::string> vocabulary;
  for (const Post& post : corpus.all_posts()) {
    vocabulary.insert(post.tokens.begin(), post.tokens.end());
  }
  const std::vector<std::string> vocab(vocabulary.begin(), vocabulary.end());
  PopulationStats population;
  if (config.score.model == ScoreModel::kRelU2v) population = PopulationStats(users, words, vocab);
  ScoringContext context{users, words, population, query ? &*query : nullptr};

  std::vector<std::string> targets =
      flags.user.empty() ? corpus.user_ids() : std::vector<std::string>{flags.user};
  std::vector<ContentScore> all;
  std::vector<std::pair<std::string, std::string>> unscorable;
  std::unordered_map<std::string, std::string> texts;
  for (const auto& id : targets) {
    const auto& posts = corpus.posts(id);
    RankedPosts ranked = rank_user_posts(id, posts, context, config.score);
    all.insert(all.end(), ranked.scored.begin(), ranked.scored.end());
    for (const auto& p : ranked.unscorable) unscorable.emplace_back(id, p);
    if (flags.with_text) {
      for (const auto& post : posts) texts[post.post_id] = post.raw_text;
    }
  }
  auto file = open_output(dir / "scores.csv");
  write_scores(all, file, flags.with_text ? &texts : nullptr, header_comments(config));
  if (!unscorable.empty()) {
    auto skipped = open_output(dir / "unscorable.csv");
    skipped << "# " << config.provenance() << "\nuser_id,post_id\n";
    for (const auto& [user, post] : unscorable) {
      skipped << csv_field(user) << ',' << csv_field(post) << '\n';
    }
  }
  out << "scored " << all.size() << " posts; " << unscorable.size() << " unscorable\n";
  return kExitOk;
}

int cmd_pca(const RunConfig& config, std::ostream& out) {
  check_corpus_inputs(config);
  if (config.paths.user_vectors.empty()) {
    require_file(config.paths.word_vectors, "word_vectors");
  } else {
    require_file(config.paths.user_vectors, "user_vectors");
  }
  const fs::path dir = output_dir(config);
  const Corpus corpus = load_prepared_corpus(config);
  UserEmbeddingTable users;
  if (!config.paths.user_vectors.empty()) {
    users = load_user_embeddings(config.paths.user_vectors);
  } else {
    users = obtain_user_vectors(config, corpus,
                                load_word_embeddings(config.paths.word_vectors));
  }
  std::map<std::string, std::string> labels;
  for (const auto& [id, record] : corpus.users()) labels[id] = label_string(record.labels);
  const PcaProjection projection = pca_project(users, config.pca_components, labels);
  auto file = open_output(dir / "pca.csv");
  write_pca(projection, file, header_comments(config));
  out << "projected " << projection.rows.size() << " users\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"User proficiency modeling from post histories", "profmodel"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Flags flags;
  std::map<CLI::App*, std::string> names;
  for (const char* name : {"synth", "ingest", "featurize", "train-embeddings", "train-lda",
                           "evaluate", "score", "pca"}) {
    static const std::map<std::string, std::string> kHelp = {
        {"synth", "Generate a planted-topic corpus, word vectors and query"},
        {"ingest", "Validate, preprocess and filter a corpus"},
        {"featurize", "Write per-user feature vectors"},
        {"train-embeddings", "Train user embeddings against frozen word vectors"},
        {"train-lda", "Train an LDA topic model"},
        {"evaluate", "Cross-validate a linear SVM on one feature model"},
        {"score", "Score and rank posts by proficiency"},
        {"pca", "Project user embeddings with PCA"}};
    CLI::App* cmd = app.add_subcommand(name, kHelp.at(name));
    add_common_flags(cmd, flags);
    names[cmd] = name;
  }

  std::vector<std::string> argv_storage{"profmodel"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const LogLevel previous = log_level();
  if (flags.quiet) set_log_level(LogLevel::kQuiet);
  if (flags.verbose) set_log_level(LogLevel::kInfo);
  int status = kExitOk;
  std::string command;
  try {
    for (const auto& [cmd, name] : names) {
      if (cmd->parsed()) command = name;
    }
    const RunConfig config = build_config(flags);
    if (command == "synth") status = cmd_synth(config, out);
    else if (command == "ingest") status = cmd_ingest(config, out);
    else if (command == "featurize") status = cmd_featurize(config, out);
    else if (command == "train-embeddings") status = cmd_train_embeddings(config, out);
    else if (command == "train-lda") status = cmd_train_lda(config, out);
    else if (command == "evaluate") status = cmd_evaluate(config, out);
    else if (command == "score") status = cmd_score(config, flags, out);
    else if (command == "pca") status = cmd_pca(config, out);
  } catch (const ConfigError& e) {
    err << "profmodel " << command << ": config error: " << e.what() << '\n';
    status = kExitConfig;
  } catch (const DataError& e) {
    err << "profmodel " << command << ": data error: " << e.what() << '\n';
    status = kExitData;
  } catch (const std::exception& e) {
    err << "profmodel " << command << ": internal error: " << e.what() << '\n';
    status = kExitInvariant;
  }
  set_log_level(previous);
  return status;
}

}  // namespace proficiency::cli
