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

#include "proficiency/classify.h"

#include <algorithm>
#include <cmath>

#include "proficiency/common.h"
#include "proficiency/random.h"

namespace proficiency {

void TaskSpec::validate() const {
  if (folds < 2) throw ConfigError("task.folds must be >= 2");
  if (!(svm_c > 0.0) || !std::isfinite(svm_c)) {
    throw ConfigError("task.svm_c must be a positive number");
  }
  if (mode == TaskMode::kBinary) {
    if (positive_topic.empty()) throw ConfigError("task: binary mode needs a topic");
  } else {
    if (topics.empty()) throw ConfigError("task: multilabel mode needs topics");
    if (balanced) throw ConfigError("task.balanced applies to binary tasks only");
  }
}

std::vector<std::string> TaskSpec::target_names() const {
  if (mode == TaskMode::kBinary) return {positive_topic};
  return topics;
}

std::string TaskSpec::describe() const {
  return mode == TaskMode::kBinary ? "binary:" + positive_topic : "multilabel";
}

TaskSpec parse_task(std::string_view text) {
  TaskSpec spec;
  if (text == "multilabel") {
    spec.mode = TaskMode::kMultilabel;
    return spec;
  }
  constexpr std::string_view kBinary = "binary:";
  if (text.substr(0, kBinary.size()) == kBinary && text.size() > kBinary.size()) {
    spec.mode = TaskMode::kBinary;
    spec.positive_topic = std::string(text.substr(kBinary.size()));
    return spec;
  }
  throw ConfigError("task must be 'binary:<topic>' or 'multilabel', got '" +
                    std::string(text) + "'");
}

Indicators targets_for(const std::set<std::string>& labels, const TaskSpec& spec) {
  const auto names = spec.target_names();
  Indicators out(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) out[i] = labels.count(names[i]) > 0;
  return out;
}

std::string stratum_key(const std::set<std::string>& labels, const TaskSpec& spec) {
  if (spec.mode == TaskMode::kBinary) {
    return labels.count(spec.positive_topic) ? "1" : "0";
  }
  std::string key;
  for (const auto& topic : labels) {
    if (std::find(spec.topics.begin(), spec.topics.end(), topic) == spec.topics.end()) {
      continue;
    }
    if (!key.empty()) key += '|';
    key += topic;
  }
  return key;
}

std::vector<std::vector<std::string>> stratified_folds(
    const std::map<std::string, std::string>& strata, std::size_t k,
    std::uint64_t seed) {
  if (k < 1) throw ConfigError("number of folds must be >= 1");
  if (k > strata.size()) {
    throw DataError("cannot split " + std::to_string(strata.size()) + " users into " +
                    std::to_string(k) + " folds");
  }
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto& [user, key] : strata) groups[key].push_back(user);

  std::vector<std::vector<std::string>> folds(k);
  std::size_t cursor = 0;
  std::vector<std::string> pooled;
  for (auto& [key, members] : groups) {
    Rng rng(Rng::derive(seed, "fold-stratum:" + key));
    rng.shuffle(std::span<std::string>(members));
    if (members.size() < k) {
      pooled.insert(pooled.end(), members.begin(), members.end());
      continue;
    }
    for (const auto& user : members) folds[cursor++ % k].push_back(user);
  }
  for (const auto& user : pooled) folds[cursor++ % k].push_back(user);
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

Metrics compute_metrics(std::span<const Indicators> predicted,
                        std::span<const Indicators> actual, TaskMode mode) {
  if (predicted.size() != actual.size()) {
    throw InvariantError("compute_metrics: " + std::to_string(predicted.size()) +
                         " predictions for " + std::to_string(actual.size()) +
                         " instances");
  }
  Metrics m;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (predicted[i].size() != actual[i].size()) {
      throw InvariantError("compute_metrics: indicator widths differ at instance " +
                           std::to_string(i));
    }
    if (mode == TaskMode::kBinary && actual[i].size() != 1) {
      throw InvariantError("compute_metrics: binary instances need one indicator");
    }
    bool exact = true;
    for (std::size_t t = 0; t < actual[i].size(); ++t) {
      const bool p = predicted[i][t];
      const bool a = actual[i][t];
      if (p && a) ++m.tp;
      if (p && !a) ++m.fp;
      if (!p && a) ++m.fn;
      if (!p && !a) ++m.tn;
      exact = exact && p == a;
    }
    correct += exact ? 1 : 0;
  }
  m.accuracy = actual.empty() ? 0.0
                              : static_cast<double>(correct) /
                                    static_cast<double>(actual.size());
  const auto tp = static_cast<double>(m.tp);
  const auto fp = static_cast<double>(m.fp);
  const auto fn = static_cast<double>(m.fn);
  m.precision = m.tp + m.fp > 0 ? tp / (tp + fp) : 0.0;
  m.recall = m.tp + m.fn > 0 ? tp / (tp + fn) : 0.0;
  const double denom = 2.0 * tp + fp + fn;
  m.f1 = m.tp > 0 ? 2.0 * tp / denom : 0.0;
  return m;
}

std::vector<std::string> balanced_subset(const std::vector<std::string>& users,
                                         const LabelMap& labels,
                                         const std::string& positive_topic,
                                         std::uint64_t seed) {
  std::vector<std::string> positives;
  std::vector<std::string> negatives;
  for (const auto& user : users) {
    auto it = labels.find(user);
    const bool pos = it != labels.end() && it->second.count(positive_topic) > 0;
    (pos ? positives : negatives).push_back(user);
  }
  std::sort(negatives.begin(), negatives.end());
  Rng rng(Rng::derive(seed, "balanced-subset"));
  rng.shuffle(std::span<std::string>(negatives));
  negatives.resize(std::min(negatives.size(), positives.size()));
  std::vector<std::string> out = positives;
  out.insert(out.end(), negatives.begin(), negatives.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

double mean_of(const std::vector<double>& v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double population_std(const std::vector<double>& v) {
  const double m = mean_of(v);
  double sum = 0.0;
  for (double x : v) sum += (x - m) * (x - m);
  return std::sqrt(sum / static_cast<double>(v.size()));
}

}  // namespace

EvalReport cross_validate(const FeatureMatrix& features, const LabelMap& labels,
                          const TaskSpec& input_spec) {
  TaskSpec spec = input_spec;
  std::vector<std::string> users = features.user_ids();
  auto labels_of = [&](const std::string& user) -> const std::set<std::string>& {
    static const std::set<std::string> kEmpty;
    auto it = labels.find(user);
    return it == labels.end() ? kEmpty : it->second;
  };
  if (spec.mode == TaskMode::kMultilabel && spec.topics.empty()) {
    std::set<std::string> all;
    for (const auto& user : users) {
      const auto& l = labels_of(user);
      all.insert(l.begin(), l.end());
    }
    spec.topics.assign(all.begin(), all.end());
  }
  spec.validate();
  if (spec.mode == TaskMode::kBinary) {
    const bool known = std::any_of(users.begin(), users.end(), [&](const auto& u) {
      return labels_of(u).count(spec.positive_topic) > 0;
    });
    if (!known) {
      throw DataError("no user is labeled with topic '" + spec.positive_topic + "'");
    }
    if (spec.balanced) {
      users = balanced_subset(users, labels, spec.positive_topic,
                              Rng::derive(spec.seed, "balanced"));
    }
  }

  std::map<std::string, std::string> strata;
  for (const auto& user : users) strata[user] = stratum_key(labels_of(user), spec);
  const auto folds = stratified_folds(strata, spec.folds, Rng::derive(spec.seed, "folds"));

  EvalReport report;
  report.model = std::string(to_string(features.model()));
  report.task = spec.describe();
  report.folds = spec.folds;
  report.users = users.size();
  report.seed = spec.seed;

  std::vector<double> accuracies;
  std::vector<double> f1s;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::vector<double>> train_x;
    std::vector<std::set<std::string>> train_y;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g == f) continue;
      for (const auto& user : folds[g]) {
        train_x.push_back(features.row(user));
        train_y.push_back(labels_of(user));
      }
    }
    SvmModel model;
    try {
      model = fit_linear_svm(train_x, train_y, spec);
    } catch (const DataError& e) {
      throw DataError("fold " + std::to_string(f) + ": " + e.what());
    }
    std::vector<Indicators> predicted;
    std::vector<Indicators> actual;
    for (const auto& user : folds[f]) {
      predicted.push_back(model.predict(features.row(user)));
      actual.push_back(targets_for(labels_of(user), spec));
    }
    FoldResult result;
    result.fold = f;
    result.train_size = train_x.size();
    result.test_size = folds[f].size();
    result.metrics = compute_metrics(predicted, actual, spec.mode);
    accuracies.push_back(result.metrics.accuracy);
    f1s.push_back(result.metrics.f1);
    report.per_fold.push_back(result);
  }
  report.accuracy_mean = mean_of(accuracies);
  report.accuracy_std = population_std(accuracies);
  report.f1_mean = mean_of(f1s);
  report.f1_std = population_std(f1s);
  return report;
}

}  // namespace proficiency
