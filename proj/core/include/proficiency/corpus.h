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

#ifndef PROFICIENCY_CORPUS_H_
#define PROFICIENCY_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace proficiency {

// A post or a comment; the two are not distinguished.
struct Post {
  std::string user_id;
  std::string post_id;
  std::string raw_text;
  // Empty until the corpus is preprocessed.
  std::vector<std::string> tokens;
};

struct UserRecord {
  std::string user_id;
  std::set<std::string> labels;
  std::size_t post_count = 0;
  // Sum of token-list lengths over the user's posts (n_u).
  std::size_t token_count = 0;
};

using LabelMap = std::map<std::string, std::set<std::string>>;

// Users, their labels and their posts. Immutable once built: the only way to
// change a corpus is to derive a new one.
class Corpus {
 public:
  Corpus() = default;

  // Groups `posts` by user, preserving their relative order. Labels of users
  // with no posts are ignored; users without labels get an empty set.
  // Throws DataError on duplicate post ids or empty ids.
  static Corpus from_posts(std::vector<Post> posts, const LabelMap& labels);

  const std::map<std::string, UserRecord>& users() const { return users_; }
  const UserRecord& user(const std::string& user_id) const;
  bool contains(const std::string& user_id) const {
    return users_.count(user_id) > 0;
  }
  const std::vector<Post>& posts(const std::string& user_id) const;

  // Sorted.
  std::vector<std::string> user_ids() const;
  std::size_t num_users() const { return users_.size(); }
  std::size_t num_posts() const;
  std::size_t num_tokens() const;
  bool preprocessed() const { return preprocessed_; }
  LabelMap labels() const;

  // Returns a preprocessed copy whose tokens are `tokenizer(raw_text)`.
  // Throws InvariantError if this corpus is already preprocessed.
  Corpus tokenized(
      const std::function<std::vector<std::string>(const std::string&)>&
          tokenizer) const;

  // Keeps the listed users (unknown ids are an error) and all their posts.
  Corpus subset(const std::vector<std::string>& user_ids) const;

  // Every post in user order, then file order.
  std::vector<std::reference_wrapper<const Post>> all_posts() const;

 private:
  std::map<std::string, UserRecord> users_;
  std::map<std::string, std::vector<Post>> posts_;
  bool preprocessed_ = false;
};

// Reads line-delimited JSON records. Posts: {"user_id", "post_id", "text"}.
// Users: {"user_id", "labels": [...]}. Unknown fields are ignored. An empty
// `users_path` means no labels. Errors name the file and 1-based line.
Corpus load_corpus(const std::filesystem::path& posts_path,
                   const std::filesystem::path& users_path);

// Writes the two files read by load_corpus.
void write_corpus(const Corpus& corpus, const std::filesystem::path& posts_path,
                  const std::filesystem::path& users_path);

// Users with at least `min_posts` posts. Throws ConfigError for k < 1 and
// DataError if fewer than two users remain.
Corpus filter_min_posts(const Corpus& corpus, std::size_t min_posts);

inline constexpr std::size_t kRedditMinPosts = 100;
inline constexpr std::size_t kTwitterMinPosts = 1000;

// Synthetic corpora with planted topics.

struct SynthTopic {
  std::string name;
  std::vector<std::string> vocab;
};

struct SynthConfig {
  std::size_t n_users = 200;
  std::vector<SynthTopic> topics;
  std::vector<std::string> background_vocab;
  double topic_word_rate = 0.3;
  std::pair<std::size_t, std::size_t> posts_per_user{20, 20};
  std::pair<std::size_t, std::size_t> post_length{30, 60};
  // Fraction of each user's posts drawn from the background only.
  double background_post_fraction = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// Ground truth recorded while generating.
struct SynthManifest {
  std::map<std::string, std::string> user_topic;
  std::map<std::string, std::size_t> post_counts;
  std::set<std::string> background_posts;
};

struct SyntheticCorpus {
  Corpus corpus;
  SynthManifest manifest;
};

SyntheticCorpus generate_synthetic_corpus(const SynthConfig& config);

// `n` distinct lowercase words "<prefix><letters>", e.g. "polaa", "polab".
// Words containing a run of three equal letters are skipped, so every word
// survives preprocessing unchanged.
std::vector<std::string> make_synthetic_vocab(const std::string& prefix,
                                              std::size_t n);

// The planted-proficiency benchmark: 200 users, two topics of 50 disjoint
// words, topic_word_rate 0.3, 20 posts of 30-60 tokens per user.
SynthConfig planted_benchmark_config(std::uint64_t seed);

}  // namespace proficiency

#endif  // PROFICIENCY_CORPUS_H_
