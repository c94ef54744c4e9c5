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
#include <limits>
#include <numeric>

#include "proficiency/classify.h"
#include "proficiency/common.h"
#include "proficiency/random.h"

namespace proficiency {

Scaler Scaler::fit(std::span<const std::vector<double>> rows) {
  if (rows.empty()) throw DataError("cannot fit a scaler on zero rows");
  const std::size_t d = rows.front().size();
  Scaler s;
  s.mean.assign(d, 0.0);
  s.scale.assign(d, 0.0);
  const auto n = static_cast<double>(rows.size());
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += row[j];
  }
  for (auto& m : s.mean) m /= n;
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - s.mean[j];
      s.scale[j] += diff * diff;
    }
  }
  for (auto& v : s.scale) {
    v = std::sqrt(v / n);
    if (!(v > 1e-12)) v = 1.0;
  }
  return s;
}

std::vector<double> Scaler::transform(std::span<const double> row) const {
  if (row.size() != mean.size()) {
    throw DataError("feature dimension " + std::to_string(row.size()) +
                    " does not match the model's " + std::to_string(mean.size()));
  }
  std::vector<double> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / scale[j];
  return out;
}

double LinearSeparator::decision(std::span<const double> scaled) const {
  double sum = bias;
  for (std::size_t j = 0; j < weights.size(); ++j) sum += weights[j] * scaled[j];
  return sum;
}

LinearSeparator fit_hinge_separator(std::span<const std::vector<double>> x,
                                    const std::vector<bool>& positive,
                                    double c_positive, double c_negative,
                                    std::uint64_t seed,
                                    const SvmSolverOptions& options) {
  const std::size_t n = x.size();
  if (n == 0) throw DataError("cannot fit a separator on zero rows");
  const std::size_t d = x.front().size();
  // w[d] is the bias weight on the constant feature 1.
  std::vector<double> w(d + 1, 0.0);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> q_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    q_diag[i] = std::inner_product(x[i].begin(), x[i].end(), x[i].begin(), 1.0);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);

  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    rng.shuffle(std::span<std::size_t>(order));
    double max_pg = -std::numeric_limits<double>::infinity();
    double min_pg = std::numeric_limits<double>::infinity();
    for (std::size_t i : order) {
      const double y = positive[i] ? 1.0 : -1.0;
      const double upper = positive[i] ? c_positive : c_negative;
      double margin = w[d];
      for (std::size_t j = 0; j < d; ++j) margin += w[j] * x[i][j];
      const double g = y * margin - 1.0;
      double pg = 0.0;
      if (alpha[i] == 0.0) {
        pg = std::min(g, 0.0);
      } else if (alpha[i] == upper) {
        pg = std::max(g, 0.0);
      } else {
        pg = g;
      }
      max_pg = std::max(max_pg, pg);
      min_pg = std::min(min_pg, pg);
      if (std::fabs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::clamp(old - g / q_diag[i], 0.0, upper);
        const double step = (alpha[i] - old) * y;
        for (std::size_t j = 0; j < d; ++j) w[j] += step * x[i][j];
        w[d] += step;
      }
    }
    if (max_pg - min_pg <= options.tolerance) break;
  }
  LinearSeparator out;
  out.bias = w[d];
  w.pop_back();
  out.weights = std::move(w);
  return out;
}

std::vector<double> SvmModel::decision_values(std::span<const double> features) const {
  const std::vector<double> scaled = scaler.transform(features);
  std::vector<double> out;
  out.reserve(separators.size());
  for (const auto& s : separators) out.push_back(s.decision(scaled));
  return out;
}

Indicators SvmModel::predict(std::span<const double> features) const {
  const std::vector<double> values = decision_values(features);
  Indicators out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i] > 0.0;
  return out;
}

std::set<std::string> SvmModel::predict_labels(std::span<const double> features) const {
  const Indicators flags = predict(features);
  std::set<std::string> out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) out.insert(separators[i].name);
  }
  return out;
}

SvmModel fit_linear_svm(std::span<const std::vector<double>> x,
                        std::span<const std::set<std::string>> labels,
                        const TaskSpec& spec) {
  spec.validate();
  if (x.size() != labels.size()) {
    throw InvariantError("fit_linear_svm: feature and label counts differ");
  }
  if (x.empty()) throw DataError("fit_linear_svm: no training rows");
  const std::size_t d = x.front().size();
  for (const auto& row : x) {
    if (row.size() != d) throw DataError("fit_linear_svm: ragged feature rows");
  }

  SvmModel model;
  model.mode = spec.mode;
  model.scaler = Scaler::fit(x);
  std::vector<std::vector<double>> scaled;
  scaled.reserve(x.size());
  for (const auto& row : x) scaled.push_back(model.scaler.transform(row));

  const std::vector<std::string> names = spec.target_names();
  for (std::size_t t = 0; t < names.size(); ++t) {
    std::vector<bool> positive(x.size());
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      positive[i] = labels[i].count(names[t]) > 0;
      n_pos += positive[i] ? 1 : 0;
    }
    const std::size_t n_neg = x.size() - n_pos;
    if (n_pos == 0) {
      throw DataError("training data has no positive example of '" + names[t] + "'");
    }
    if (n_neg == 0) {
      throw DataError("training data has no negative example for '" + names[t] +
                      "' (every user carries it)");
    }
    double c_pos = spec.svm_c;
    double c_neg = spec.svm_c;
    if (spec.class_weighting == ClassWeighting::kBalanced) {
      const auto n = static_cast<double>(x.size());
      c_pos = spec.svm_c * n / (2.0 * static_cast<double>(n_pos));
      c_neg = spec.svm_c * n / (2.0 * static_cast<double>(n_neg));
    }
    LinearSeparator sep = fit_hinge_separator(
        scaled, positive, c_pos, c_neg, Rng::derive(spec.seed, "svm:" + names[t]));
    sep.name = names[t];
    model.separators.push_back(std::move(sep));
  }
  return model;
}

}  // namespace proficiency
