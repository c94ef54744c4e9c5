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

#ifndef PROFICIENCY_CLASSIFY_H_
#define PROFICIENCY_CLASSIFY_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "proficiency/corpus.h"
#include "proficiency/features.h"

namespace proficiency {

enum class TaskMode { kBinary, kMultilabel };
enum class ClassWeighting { kNone, kBalanced };

struct TaskSpec {
  TaskMode mode = TaskMode::kBinary;
  std::string positive_topic;       // binary mode
  std::vector<std::string> topics;  // multilabel mode
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  double svm_c = 1.0;
  ClassWeighting class_weighting = ClassWeighting::kNone;
  // Binary only: keep every positive user and as many seeded-random negatives.
  bool balanced = false;

  void validate() const;
  // One name per separator: {positive_topic} or `topics`.
  std::vector<std::string> target_names() const;
  // "binary:<topic>" or "multilabel".
  std::string describe() const;
};

// Parses "binary:<topic>" or "multilabel"; multilabel topics are left empty.
TaskSpec parse_task(std::string_view text);

// Per-separator membership flags of one user.
using Indicators = std::vector<bool>;

Indicators targets_for(const std::set<std::string>& labels, const TaskSpec& spec);

// Stratification key: "1"/"0" in binary mode; the sorted, '|'-joined label
// set restricted to the task topics in multilabel mode.
std::string stratum_key(const std::set<std::string>& labels, const TaskSpec& spec);

// Partitions users into k folds. Within each stratum the members are shuffled
// (seeded) and dealt round-robin, continuing from where the previous stratum
// stopped, so per-fold stratum counts differ by at most one. Strata smaller
// than k are pooled and dealt last. Each fold is returned sorted.
std::vector<std::vector<std::string>> stratified_folds(
    const std::map<std::string, std::string>& strata, std::size_t k,
    std::uint64_t seed);

// Per-feature standardization fitted on training rows only. Population
// standard deviation; constant features get scale 1.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> scale;

  static Scaler fit(std::span<const std::vector<double>> rows);
  std::vector<double> transform(std::span<const double> row) const;
};

struct LinearSeparator {
  std::string name;
  std::vector<double> weights;
  double bias = 0.0;

  double decision(std::span<const double> scaled) const;
};

struct SvmSolverOptions {
  double tolerance = 1e-4;
  std::size_t max_iterations = 5000;
};

// Minimizes 0.5 (|w|^2 + b^2) + sum_i C_i max(0, 1 - y_i (w.x_i + b)) by dual
// coordinate descent (the bias is an extra constant feature). The visiting
// order is a seeded shuffle, so the result is deterministic.
LinearSeparator fit_hinge_separator(std::span<const std::vector<double>> x,
                                    const std::vector<bool>& positive,
                                    double c_positive, double c_negative,
                                    std::uint64_t seed,
                                    const SvmSolverOptions& options = {});

class SvmModel {
 public:
  TaskMode mode = TaskMode::kBinary;
  Scaler scaler;
  std::vector<LinearSeparator> separators;

  // Raw (unscaled) features in; one value per separator.
  std::vector<double> decision_values(std::span<const double> features) const;
  // Positive iff the decision value is > 0 (ties go negative).
  Indicators predict(std::span<const double> features) const;
  // Binary: {positive_topic} or {}; multilabel: topics predicted positive.
  std::set<std::string> predict_labels(std::span<const double> features) const;
};

// Standardizes `x`, then fits one hinge-loss separator per target (one-vs-rest
// in multilabel mode). Throws DataError naming a target that has only one
// class among the training rows.
SvmModel fit_linear_svm(std::span<const std::vector<double>> x,
                        std::span<const std::set<std::string>> labels,
                        const TaskSpec& spec);

struct Metrics {
  double accuracy = 0.0;  // subset accuracy in multilabel mode
  double f1 = 0.0;        // positive-class F1, or micro-F1 in multilabel mode
  double precision = 0.0;
  double recall = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// F1 = 2TP / (2TP + FP + FN), 0 when that denominator is 0.
Metrics compute_metrics(std::span<const Indicators> predicted,
                        std::span<const Indicators> actual, TaskMode mode);

// All positive users plus an equal number (or all, if fewer) of seeded-random
// negative users; sorted.
std::vector<std::string> balanced_subset(const std::vector<std::string>& users,
                                         const LabelMap& labels,
                                         const std::string& positive_topic,
                                         std::uint64_t seed);

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  Metrics metrics;
};

struct EvalReport {
  std::string model;
  std::string task;
  std::size_t folds = 0;
  std::size_t users = 0;
  std::uint64_t seed = 0;
  std::vector<FoldResult> per_fold;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;  // population standard deviation over folds
  double f1_mean = 0.0;
  double f1_std = 0.0;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> config;
};

// Stratified k-fold evaluation. Users are the matrix rows (labels missing from
// `labels` count as empty). Scalers are fitted on training folds only.
EvalReport cross_validate(const FeatureMatrix& features, const LabelMap& labels,
                          const TaskSpec& spec);

// JSON document; identical inputs give identical bytes.
std::string serialize_report(const EvalReport& report);

// "96.89 ± 0.26" for percentages (scale 100), "0.53 ± 0.06" otherwise.
std::string format_mean_std(double mean, double stddev, bool percent);

// One line in the style of the published result tables.
std::string summary_line(const EvalReport& report);

}  // namespace proficiency

#endif  // PROFICIENCY_CLASSIFY_H_
