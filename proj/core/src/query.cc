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
#include <fstream>
#include <set>

#include "json.hpp"
#include "proficiency/common.h"
#include "proficiency/features.h"
#include "proficiency/preprocess.h"

namespace proficiency {

QuerySet::QuerySet(std::vector<Topic> topics) : topics_(std::move(topics)) {
  std::set<std::string> names;
  std::set<std::string> seen;
  for (const auto& [name, words] : topics_) {
    if (!names.insert(name).second) {
      throw ConfigError("query topic '" + name + "' declared twice");
    }
    for (const auto& word : words) {
      const auto tokens = tokenize(word);
      if (tokens.size() != 1 || tokens.front() != word) {
        throw ConfigError("query word '" + word + "' (topic '" + name +
                          "') does not survive tokenization");
      }
      const auto cps = text::decode_utf8(word);
      if (std::any_of(cps.begin(), cps.end(), text::is_upper)) {
        throw ConfigError("query word '" + word + "' must be lowercase");
      }
      if (seen.insert(word).second) flattened_.push_back(word);
    }
  }
}

std::vector<std::string> QuerySet::topic_names() const {
  std::vector<std::string> names;
  for (const auto& [name, words] : topics_) names.push_back(name);
  return names;
}

QuerySet QuerySet::truncated(std::size_t per_topic) const {
  std::vector<Topic> topics;
  for (const auto& [name, words] : topics_) {
    const auto n = std::min(per_topic, words.size());
    topics.emplace_back(name, std::vector<std::string>(words.begin(), words.begin() + n));
  }
  return QuerySet(std::move(topics));
}

QuerySet load_query_set(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open query file " + path.string());
  nlohmann::ordered_json doc =
      nlohmann::ordered_json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ConfigError(path.string() + ": query file must be a JSON object");
  }
  std::vector<QuerySet::Topic> topics;
  for (const auto& [name, words] : doc.items()) {
    if (!words.is_array()) {
      throw ConfigError(path.string() + ": topic '" + name + "' must map to an array");
    }
    std::vector<std::string> list;
    for (const auto& word : words) {
      if (!word.is_string()) {
        throw ConfigError(path.string() + ": topic '" + name + "' has a non-string word");
      }
      list.push_back(word.get<std::string>());
    }
    topics.emplace_back(name, std::move(list));
  }
  return QuerySet(std::move(topics));
}

void save_query_set(const QuerySet& query, const std::filesystem::path& path) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& [name, words] : query.topics()) doc[name] = words;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace proficiency
