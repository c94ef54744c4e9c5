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
#include <set>
#include <string>

#include "proficiency/common.h"
#include "proficiency/corpus.h"
#include "proficiency/random.h"

namespace proficiency {

void SynthConfig::validate() const {
  if (n_users < 2) throw ConfigError("synth.n_users must be >= 2");
  if (topics.empty()) throw ConfigError("synth.topics must not be empty");
  if (background_vocab.empty()) {
    throw ConfigError("synth.background_vocab must not be empty");
  }
  if (!(topic_word_rate >= 0.0 && topic_word_rate <= 1.0)) {
    throw ConfigError("synth.topic_word_rate must lie in [0, 1]");
  }
  if (!(background_post_fraction >= 0.0 && background_post_fraction <= 1.0)) {
    throw ConfigError("synth.background_post_fraction must lie in [0, 1]");
  }
  if (posts_per_user.first < 1 || posts_per_user.first > posts_per_user.second) {
    throw ConfigError("synth.posts_per_user must be a range with 1 <= lo <= hi");
  }
  if (post_length.first < 1 || post_length.first > post_length.second) {
    throw ConfigError("synth.post_length must be a range with 1 <= lo <= hi");
  }
  std::set<std::string> names;
  std::set<std::string> words(background_vocab.begin(), background_vocab.end());
  if (words.size() != background_vocab.size()) {
    throw ConfigError("synth.background_vocab contains duplicates");
  }
  for (const auto& topic : topics) {
    if (!names.insert(topic.name).second) {
      throw ConfigError("synth topic '" + topic.name + "' declared twice");
    }
    if (topic.vocab.empty()) {
      throw ConfigError("synth topic '" + topic.name + "' has an empty vocabulary");
    }
    for (const auto& word : topic.vocab) {
      if (!words.insert(word).second) {
        throw ConfigError("synth vocabularies overlap on '" + word + "'");
      }
    }
  }
}

namespace {

std::string zero_pad(std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return digits;
}

std::size_t digit_width(std::size_t n) {
  return std::to_string(n > 0 ? n - 1 : 0).size();
}

const std::string& pick(Rng& rng, const std::vector<std::string>& words) {
  return words[rng.below(words.size())];
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SyntheticCorpus out;
  std::vector<Post> posts;
  LabelMap labels;
  const std::size_t user_width = digit_width(config.n_users);
  const std::size_t post_width = digit_width(config.posts_per_user.second);

  for (std::size_t u = 0; u < config.n_users; ++u) {
    const std::string user_id = "user" + zero_pad(u, user_width);
    const SynthTopic& topic = config.topics[rng.below(config.topics.size())];
    labels[user_id] = {topic.name};
    out.manifest.user_topic[user_id] = topic.name;

    const std::size_t n_posts =
        rng.between(config.posts_per_user.first, config.posts_per_user.second);
    out.manifest.post_counts[user_id] = n_posts;

    // Exactly round(fraction * n) background posts, at shuffled positions.
    const auto n_background = static_cast<std::size_t>(
        std::llround(config.background_post_fraction * static_cast<double>(n_posts)));
    std::vector<char> background(n_posts, 0);
    std::fill_n(background.begin(), std::min(n_background, n_posts), 1);
    rng.shuffle(std::span<char>(background));

    for (std::size_t p = 0; p < n_posts; ++p) {
      Post post;
      post.user_id = user_id;
      post.post_id = user_id + "_p" + zero_pad(p, post_width);
      const double rate = background[p] ? 0.0 : config.topic_word_rate;
      if (background[p]) out.manifest.background_posts.insert(post.post_id);
      const std::size_t length =
          rng.between(config.post_length.first, config.post_length.second);
      for (std::size_t t = 0; t < length; ++t) {
        if (t > 0) post.raw_text += ' ';
        post.raw_text += rng.bernoulli(rate) ? pick(rng, topic.vocab)
                                             : pick(rng, config.background_vocab);
      }
      posts.push_back(std::move(post));
    }
  }
  out.corpus = Corpus::from_posts(std::move(posts), labels);
  return out;
}

std::vector<std::string> make_synthetic_vocab(const std::string& prefix,
                                              std::size_t n) {
  // Words with a run of three equal letters are skipped: preprocessing would
  // shorten them and they would no longer match their own vectors.
  auto has_long_run = [](const std::string& word) {
    for (std::size_t i = 2; i < word.size(); ++i) {
      if (word[i] == word[i - 1] && word[i] == word[i - 2]) return true;
    }
    return false;
  };
  if (has_long_run(prefix)) {
    throw ConfigError("synthetic vocabulary prefix '" + prefix +
                      "' has a run of three equal letters");
  }
  std::vector<std::string> words;
  words.reserve(n);
  for (std::size_t width = 2; words.size() < n; ++width) {
    std::size_t capacity = 1;
    for (std::size_t k = 0; k < width; ++k) capacity *= 26;
    for (std::size_t i = 0; i < capacity && words.size() < n; ++i) {
      std::string suffix(width, 'a');
      std::size_t x = i;
      for (std::size_t pos = width; pos-- > 0;) {
        suffix[pos] = static_cast<char>('a' + x % 26);
        x /= 26;
      }
      std::string word = prefix + suffix;
      if (!has_long_run(word)) words.push_back(std::move(word));
    }
  }
  return words;
}

SynthConfig planted_benchmark_config(std::uint64_t seed) {
  SynthConfig config;
  config.n_users = 200;
  config.topics = {{"alpha", make_synthetic_vocab("alp", 50)},
                   {"beta", make_synthetic_vocab("bet", 50)}};
  config.background_vocab = make_synthetic_vocab("bg", 500);
  config.topic_word_rate = 0.3;
  config.posts_per_user = {20, 20};
  config.post_length = {30, 60};
  config.background_post_fraction = 0.0;
  config.seed = seed;
  return config;
}

}  // namespace proficiency
