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

#include "json.hpp"
#include "proficiency/classify.h"
#include "proficiency/common.h"

namespace proficiency {

std::string serialize_report(const EvalReport& report) {
  nlohmann::ordered_json doc;
  doc["model"] = report.model;
  doc["task"] = report.task;
  doc["folds"] = report.folds;
  doc["users"] = report.users;
  doc["seed"] = report.seed;
  doc["per_fold"] = nlohmann::ordered_json::array();
  for (const auto& fold : report.per_fold) {
    nlohmann::ordered_json entry;
    entry["fold"] = fold.fold;
    entry["train_size"] = fold.train_size;
    entry["test_size"] = fold.test_size;
    entry["accuracy"] = fold.metrics.accuracy;
    entry["f1"] = fold.metrics.f1;
    entry["precision"] = fold.metrics.precision;
    entry["recall"] = fold.metrics.recall;
    doc["per_fold"].push_back(std::move(entry));
  }
  doc["accuracy_mean"] = report.accuracy_mean;
  doc["accuracy_std"] = report.accuracy_std;
  doc["f1_mean"] = report.f1_mean;
  doc["f1_std"] = report.f1_std;
  doc["std_kind"] = "population";
  doc["config_hash"] = report.config_hash;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.config) config[key] = value;
  doc["config"] = std::move(config);
  return doc.dump(2) + "\n";
}

std::string format_mean_std(double mean, double stddev, bool percent) {
  const double scale = percent ? 100.0 : 1.0;
  return format_fixed(mean * scale, 2) + " ± " + format_fixed(stddev * scale, 2);
}

std::string summary_line(const EvalReport& report) {
  return report.model + "\t" + report.task + "\tAcc (%) " +
         format_mean_std(report.accuracy_mean, report.accuracy_std, true) + "\tF1 " +
         format_mean_std(report.f1_mean, report.f1_std, false);
}

}  // namespace proficiency
