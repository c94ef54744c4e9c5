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

#include <Eigen/Dense>
#include <cmath>
#include <ostream>

#include "proficiency/common.h"
#include "proficiency/embeddings.h"

namespace proficiency {

PcaProjection pca_project(const UserEmbeddingTable& users, std::size_t k,
                          const std::map<std::string, std::string>& labels) {
  if (k < 1) throw ConfigError("pca.components must be >= 1");
  if (k > users.dim()) {
    throw ConfigError("pca.components (" + std::to_string(k) +
                      ") exceeds the embedding dimension (" +
                      std::to_string(users.dim()) + ")");
  }
  if (users.size() < k + 1) {
    throw DataError("PCA with " + std::to_string(k) + " components needs at least " +
                    std::to_string(k + 1) + " users");
  }
  const auto n = static_cast<Eigen::Index>(users.size());
  const auto d = static_cast<Eigen::Index>(users.dim());
  Eigen::MatrixXd x(n, d);
  Eigen::Index r = 0;
  for (const auto& [id, v] : users.vectors()) {
    x.row(r++) = Eigen::Map<const Eigen::RowVectorXd>(v.data(), d);
  }
  x.rowwise() -= x.colwise().mean();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
  Eigen::MatrixXd components = svd.matrixV().leftCols(static_cast<Eigen::Index>(k));
  for (Eigen::Index c = 0; c < components.cols(); ++c) {
    Eigen::Index arg = 0;
    components.col(c).cwiseAbs().maxCoeff(&arg);
    if (components(arg, c) < 0) components.col(c) *= -1.0;
  }
  const Eigen::MatrixXd projected = x * components;

  PcaProjection out;
  const Eigen::VectorXd singular = svd.singularValues();
  for (std::size_t c = 0; c < k; ++c) {
    const auto i = static_cast<Eigen::Index>(c);
    const double s = i < singular.size() ? singular(i) : 0.0;
    out.explained_variance.push_back(s * s / static_cast<double>(n - 1));
  }
  r = 0;
  for (const auto& [id, v] : users.vectors()) {
    PcaRow row;
    row.user_id = id;
    for (Eigen::Index c = 0; c < projected.cols(); ++c) {
      row.coordinates.push_back(projected(r, c));
    }
    if (auto it = labels.find(id); it != labels.end()) row.label = it->second;
    out.rows.push_back(std::move(row));
    ++r;
  }
  return out;
}

void write_pca(const PcaProjection& projection, std::ostream& out,
               std::span<const std::string> comments) {
  for (const auto& line : comments) out << "# " << line << '\n';
  out << "user_id";
  for (std::size_t c = 0; c < projection.explained_variance.size(); ++c) {
    out << ",pc" << (c + 1);
  }
  out << ",label\n";
  for (const auto& row : projection.rows) {
    out << csv_field(row.user_id);
    for (double v : row.coordinates) out << ',' << format_double(v);
    out << ',' << csv_field(row.label) << '\n';
  }
}

}  // namespace proficiency
