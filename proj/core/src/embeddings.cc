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

#include "proficiency/embeddings.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "proficiency/common.h"
#include "proficiency/preprocess.h"
#include "proficiency/random.h"

namespace proficiency {

bool WordEmbeddingTable::add(std::string word, std::span<const double> values) {
  if (values.size() != dim_) {
    throw InvariantError("vector for '" + word + "' has " +
                         std::to_string(values.size()) + " values, expected " +
                         std::to_string(dim_));
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InvariantError("non-finite value in vector for '" + word + "'");
    }
  }
  if (index_.count(word) > 0) return false;
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), values.begin(), values.end());
  return true;
}

std::optional<std::size_t> WordEmbeddingTable::index_of(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::span<const double>> WordEmbeddingTable::find(
    const std::string& word) const {
  auto index = index_of(word);
  if (!index) return std::nullopt;
  return vector(*index);
}

namespace {

struct VectorFileHeader {
  std::size_t count = 0;
  std::size_t dim = 0;
};

// Reads the shared text format, calling fn(key, values, line_no) per record.
template <typename Fn>
VectorFileHeader read_vector_file(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  VectorFileHeader header;
  bool have_header = false;
  std::size_t records = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    if (!have_header) {
      std::string extra;
      if (!(fields >> header.count >> header.dim) || (fields >> extra) ||
          header.dim == 0) {
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": expected header '<count> <dim>'");
      }
      have_header = true;
      continue;
    }
    std::string key;
    if (!(fields >> key)) continue;  // blank line
    values.clear();
    std::string field;
    while (fields >> field) {
      try {
        values.push_back(parse_double(field));
      } catch (const DataError&) {
        throw DataError(path.string() + ":" + std::to_string(line_no) +
                        ": bad number '" + field + "'");
      }
    }
    if (values.size() != header.dim) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " +
                      std::to_string(values.size()) + " values, header says " +
                      std::to_string(header.dim));
    }
    if (std::any_of(values.begin(), values.end(),
                    [](double v) { return !std::isfinite(v); })) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": non-finite value");
    }
    fn(std::move(key), std::span<const double>(values), line_no);
    ++records;
  }
  if (!have_header || records == 0) {
    throw DataError(path.string() + ": no vectors found");
  }
  if (records != header.count) {
    throw DataError(path.string() + ": header declares " +
                    std::to_string(header.count) + " vectors, found " +
                    std::to_string(records));
  }
  return header;
}

template <typename Range>
void write_vector_file(const std::filesystem::path& path, std::size_t count,
                       std::size_t dim, const Range& records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << count << ' ' << dim << '\n';
  for (const auto& [key, values] : records) {
    if (key.find_first_of(" \t\r\n") != std::string::npos) {
      throw DataError("key '" + key + "' contains whitespace");
    }
    out << key;
    for (double v : values) out << ' ' << format_double(v);
    out << '\n';
  }
}

std::string lowercase(const std::string& word) {
  std::u32string cps = text::decode_utf8(word);
  for (auto& c : cps) c = text::to_lower(c);
  return text::encode_utf8(cps);
}

}  // namespace

WordEmbeddingTable load_word_embeddings(const std::filesystem::path& path) {
  std::optional<WordEmbeddingTable> table;
  read_vector_file(path, [&](std::string key, std::span<const double> values,
                             std::size_t line_no) {
    if (!table) table.emplace(values.size());
    if (!table->add(lowercase(key), values)) {
      log_warning(path.string() + ":" + std::to_string(line_no) +
                  ": duplicate word '" + key + "' after lowercasing; kept the first");
    }
  });
  return std::move(*table);
}

void save_word_embeddings(const WordEmbeddingTable& table,
                          const std::filesystem::path& path) {
  std::vector<std::pair<std::string, std::span<const double>>> records;
  for (std::size_t i = 0; i < table.size(); ++i) {
    records.emplace_back(table.words()[i], table.vector(i));
  }
  write_vector_file(path, table.size(), table.dim(), records);
}

const std::vector<double>& UserEmbeddingTable::vector(const std::string& user_id) const {
  auto it = vectors_.find(user_id);
  if (it == vectors_.end()) {
    throw DataError("no embedding for user '" + user_id + "'");
  }
  return it->second;
}

void UserEmbeddingTable::set(const std::string& user_id, std::vector<double> values) {
  if (values.size() != dim_) {
    throw InvariantError("user vector for '" + user_id + "' has wrong dimension");
  }
  vectors_[user_id] = std::move(values);
}

void save_user_embeddings(const UserEmbeddingTable& table,
                          const std::filesystem::path& path) {
  write_vector_file(path, table.size(), table.dim(), table.vectors());
}

UserEmbeddingTable load_user_embeddings(const std::filesystem::path& path) {
  std::optional<UserEmbeddingTable> table;
  read_vector_file(path, [&](std::string key, std::span<const double> values,
                             std::size_t line_no) {
    if (!table) table.emplace(values.size());
    if (table->contains(key)) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": duplicate user '" + key + "'");
    }
    table->set(key, std::vector<double>(values.begin(), values.end()));
  });
  return std::move(*table);
}

namespace {

std::vector<double> gaussian(Rng& rng, std::size_t dim) {
  std::vector<double> v(dim);
  for (auto& x : v) x = rng.normal();
  return v;
}

void normalize(std::vector<double>& v) {
  const double n = std::sqrt(dot(v, v));
  if (n > 0) {
    for (auto& x : v) x /= n;
  }
}

}  // namespace

WordEmbeddingTable synthesize_word_embeddings(const SynthConfig& corpus_config,
                                              const SynthEmbeddingConfig& config) {
  if (config.dim == 0) throw ConfigError("synthetic embedding dim must be positive");
  if (!(config.coherence >= 0.0 && config.coherence < 1.0)) {
    throw ConfigError("synthetic embedding coherence must lie in [0, 1)");
  }
  if (!(config.norm > 0.0)) throw ConfigError("synthetic embedding norm must be positive");

  std::vector<std::pair<const std::string*, int>> entries;  // word, topic (-1 = none)
  for (std::size_t t = 0; t < corpus_config.topics.size(); ++t) {
    for (const auto& w : corpus_config.topics[t].vocab) {
      entries.emplace_back(&w, static_cast<int>(t));
    }
  }
  for (const auto& w : corpus_config.background_vocab) entries.emplace_back(&w, -1);

  Rng rng(Rng::derive(config.seed, "synthetic-word-vectors"));
  std::vector<std::vector<double>> centroids;
  for (std::size_t t = 0; t < corpus_config.topics.size(); ++t) {
    centroids.push_back(gaussian(rng, config.dim));
    normalize(centroids.back());
  }

  const bool orthogonal = config.coherence == 0.0 && config.dim >= entries.size();
  std::vector<std::vector<double>> basis;
  WordEmbeddingTable table(config.dim);
  const double noise_weight = std::sqrt(1.0 - config.coherence * config.coherence);
  for (const auto& [word, topic] : entries) {
    std::vector<double> v = gaussian(rng, config.dim);
    if (orthogonal) {
      // Gram-Schmidt against the vectors drawn so far (twice for stability).
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) {
          const double proj = dot(v, b);
          for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * b[i];
        }
      }
      normalize(v);
      basis.push_back(v);
    } else {
      normalize(v);
      if (topic >= 0) {
        const auto& c = centroids[static_cast<std::size_t>(topic)];
        for (std::size_t i = 0; i < v.size(); ++i) {
          v[i] = config.coherence * c[i] + noise_weight * v[i];
        }
        normalize(v);
      }
    }
    for (auto& x : v) x *= config.norm;
    table.add(*word, v);
  }
  return table;
}

double sigmoid(double x) {
  // Clamped so the result stays strictly inside (0, 1).
  constexpr double kLow = std::numeric_limits<double>::min();
  constexpr double kHigh = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  double s;
  if (x >= 0) {
    s = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    s = e / (1.0 + e);
  }
  return std::clamp(s, kLow, kHigh);
}

double dot(std::span<const double> a, std::span<const double> b) {
  // Four independent accumulators let the compiler vectorize without
  // reassociating a single running sum.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

FeatureMatrix u2v_features(const UserEmbeddingTable& users,
                           const WordEmbeddingTable& words,
                           const QuerySet& query) {
  if (users.dim() != words.dim()) {
    throw DataError("user vectors have dim " + std::to_string(users.dim()) +
                    " but word vectors have dim " + std::to_string(words.dim()));
  }
  std::vector<std::string> columns;
  std::vector<std::span<const double>> vectors;
  for (const auto& word : query.words()) {
    if (auto v = words.find(word)) {
      columns.push_back(word);
      vectors.push_back(*v);
    } else {
      log_warning("query word '" + word + "' has no word vector; column dropped");
    }
  }
  if (columns.empty()) {
    throw DataError("no query word has a word vector; U2V features are empty");
  }
  FeatureMatrix matrix(ModelId::kU2v, columns);
  for (const auto& [id, u] : users.vectors()) {
    std::vector<double> row(vectors.size());
    for (std::size_t j = 0; j < vectors.size(); ++j) row[j] = sigmoid(dot(vectors[j], u));
    matrix.set_row(id, std::move(row));
  }
  return matrix;
}

FeatureMatrix rel_u2v_features(const FeatureMatrix& u2v) {
  if (u2v.model() != ModelId::kU2v) {
    throw ConfigError("Rel-U2V needs a U2V feature matrix, got " +
                      std::string(to_string(u2v.model())));
  }
  if (u2v.num_rows() < 2) throw DataError("Rel-U2V needs at least two users");
  std::vector<double> sums(u2v.num_cols(), 0.0);
  for (const auto& [id, values] : u2v.rows()) {
    for (std::size_t j = 0; j < values.size(); ++j) sums[j] += values[j];
  }
  const auto n_users = static_cast<double>(u2v.num_rows());
  FeatureMatrix matrix(ModelId::kRelU2v, u2v.column_names());
  for (const auto& [id, values] : u2v.rows()) {
    std::vector<double> row(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
      row[j] = values[j] * n_users / sums[j];
    }
    matrix.set_row(id, std::move(row));
  }
  return matrix;
}

}  // namespace proficiency
