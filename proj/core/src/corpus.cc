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

#include "proficiency/corpus.h"

#include <algorithm>
#include <fstream>
#include <string_view>

#include "json.hpp"
#include "proficiency/common.h"

namespace proficiency {

using nlohmann::json;

Corpus Corpus::from_posts(std::vector<Post> posts, const LabelMap& labels) {
  Corpus corpus;
  std::set<std::string> seen_ids;
  for (auto& post : posts) {
    if (post.user_id.empty()) throw DataError("post with empty user_id");
    if (post.post_id.empty()) throw DataError("post with empty post_id");
    if (!seen_ids.insert(post.post_id).second) {
      throw DataError("duplicate post_id '" + post.post_id + "'");
    }
    auto [it, inserted] = corpus.users_.try_emplace(post.user_id);
    UserRecord& record = it->second;
    if (inserted) {
      record.user_id = post.user_id;
      if (auto label = labels.find(post.user_id); label != labels.end()) {
        record.labels = label->second;
      }
    }
    record.post_count += 1;
    record.token_count += post.tokens.size();
    corpus.posts_[post.user_id].push_back(std::move(post));
  }
  return corpus;
}

const UserRecord& Corpus::user(const std::string& user_id) const {
  auto it = users_.find(user_id);
  if (it == users_.end()) throw DataError("unknown user '" + user_id + "'");
  return it->second;
}

const std::vector<Post>& Corpus::posts(const std::string& user_id) const {
  auto it = posts_.find(user_id);
  if (it == posts_.end()) throw DataError("unknown user '" + user_id + "'");
  return it->second;
}

std::vector<std::string> Corpus::user_ids() const {
  std::vector<std::string> ids;
  ids.reserve(users_.size());
  for (const auto& [id, record] : users_) ids.push_back(id);
  return ids;
}

std::size_t Corpus::num_posts() const {
  std::size_t n = 0;
  for (const auto& [id, record] : users_) n += record.post_count;
  return n;
}

std::size_t Corpus::num_tokens() const {
  std::size_t n = 0;
  for (const auto& [id, record] : users_) n += record.token_count;
  return n;
}

LabelMap Corpus::labels() const {
  LabelMap labels;
  for (const auto& [id, record] : users_) labels[id] = record.labels;
  return labels;
}

Corpus Corpus::tokenized(
    const std::function<std::vector<std::string>(const std::string&)>&
        tokenizer) const {
  if (preprocessed_) {
    throw InvariantError("corpus is already preprocessed; tokens are frozen");
  }
  Corpus out = *this;
  for (auto& [id, posts] : out.posts_) {
    std::size_t tokens = 0;
    for (auto& post : posts) {
      post.tokens = tokenizer(post.raw_text);
      tokens += post.tokens.size();
    }
    out.users_[id].token_count = tokens;
  }
  out.preprocessed_ = true;
  return out;
}

Corpus Corpus::subset(const std::vector<std::string>& user_ids) const {
  Corpus out;
  out.preprocessed_ = preprocessed_;
  for (const auto& id : user_ids) {
    out.users_[id] = user(id);
    out.posts_[id] = posts(id);
  }
  return out;
}

std::vector<std::reference_wrapper<const Post>> Corpus::all_posts() const {
  std::vector<std::reference_wrapper<const Post>> out;
  out.reserve(num_posts());
  for (const auto& [id, posts] : posts_) {
    for (const auto& post : posts) out.emplace_back(post);
  }
  return out;
}

namespace {

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

std::string where(const std::filesystem::path& path, std::size_t line_no) {
  return path.string() + ":" + std::to_string(line_no);
}

std::string required_string(const json& record, const char* field,
                            const std::filesystem::path& path,
                            std::size_t line_no) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_string()) {
    throw DataError(where(path, line_no) + ": missing or non-string field '" +
                    field + "'");
  }
  return it->get<std::string>();
}

// Calls `fn(record, line_no)` for every non-blank line; returns the count.
template <typename Fn>
std::size_t for_each_record(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object()) {
      throw DataError(where(path, line_no) + ": not a valid JSON object record");
    }
    fn(record, line_no);
    ++records;
  }
  return records;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& posts_path,
                   const std::filesystem::path& users_path) {
  LabelMap labels;
  if (!users_path.empty()) {
    for_each_record(users_path, [&](const json& record, std::size_t line_no) {
      std::string user_id = required_string(record, "user_id", users_path, line_no);
      std::set<std::string> user_labels;
      if (auto it = record.find("labels"); it != record.end()) {
        if (!it->is_array()) {
          throw DataError(where(users_path, line_no) + ": 'labels' must be an array");
        }
        for (const auto& label : *it) {
          if (!label.is_string()) {
            throw DataError(where(users_path, line_no) +
                            ": labels must be strings");
          }
          user_labels.insert(label.get<std::string>());
        }
      }
      if (!labels.emplace(user_id, std::move(user_labels)).second) {
        throw DataError(where(users_path, line_no) + ": duplicate user_id '" +
                        user_id + "'");
      }
    });
  }

  std::vector<Post> posts;
  std::set<std::string> seen;
  std::size_t n = for_each_record(posts_path, [&](const json& record,
                                                  std::size_t line_no) {
    Post post;
    post.user_id = required_string(record, "user_id", posts_path, line_no);
    post.post_id = required_string(record, "post_id", posts_path, line_no);
    post.raw_text = required_string(record, "text", posts_path, line_no);
    if (!seen.insert(post.post_id).second) {
      throw DataError(where(posts_path, line_no) + ": duplicate post_id '" +
                      post.post_id + "'");
    }
    posts.push_back(std::move(post));
  });
  if (n == 0) throw DataError(posts_path.string() + ": posts file is empty");
  return Corpus::from_posts(std::move(posts), labels);
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& posts_path,
                  const std::filesystem::path& users_path) {
  std::ofstream posts(posts_path);
  if (!posts) throw DataError("cannot write " + posts_path.string());
  for (const Post& post : corpus.all_posts()) {
    json record = {{"user_id", post.user_id},
                   {"post_id", post.post_id},
                   {"text", post.raw_text}};
    posts << record.dump() << '\n';
  }
  std::ofstream users(users_path);
  if (!users) throw DataError("cannot write " + users_path.string());
  for (const auto& [id, record] : corpus.users()) {
    json line = {{"user_id", id}, {"labels", record.labels}};
    users << line.dump() << '\n';
  }
}

Corpus filter_min_posts(const Corpus& corpus, std::size_t min_posts) {
  if (min_posts < 1) throw ConfigError("min_posts must be >= 1");
  std::vector<std::string> kept;
  for (const auto& [id, record] : corpus.users()) {
    if (record.post_count >= min_posts) kept.push_back(id);
  }
  if (kept.size() < 2) {
    throw DataError("only " + std::to_string(kept.size()) +
                    " user(s) have at least " + std::to_string(min_posts) +
                    " posts; at least 2 are required");
  }
  return corpus.subset(kept);
}

}  // namespace proficiency
