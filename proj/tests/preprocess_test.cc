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

#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "proficiency/common.h"
#include "proficiency/preprocess.h"
#include "proficiency/random.h"
#include "support/test_util.h"

namespace proficiency {
namespace {

using Tokens = std::vector<std::string>;

PreprocessConfig strip_at() {
  PreprocessConfig config;
  config.mention_mode = MentionMode::kStripAt;
  return config;
}

TEST(PreprocessTextTest, CombinedExample) {
  EXPECT_EQ(preprocess_text("SOOOOO    COOL @JoeBiden http://x.co call 5551234"),
            "soo cool @user <url> call <number>");
}

TEST(PreprocessTextTest, EmptyInput) { EXPECT_EQ(preprocess_text(""), ""); }

TEST(PreprocessTextTest, WhitespaceNormalization) {
  EXPECT_EQ(preprocess_text("  a \t\n b  "), "a b");
  EXPECT_EQ(preprocess_text("a\xC2\xA0" "b\xE3\x80\x80" "c"), "a b c");
  EXPECT_EQ(preprocess_text(" \t "), "");
}

TEST(PreprocessTextTest, Lowercasing) {
  EXPECT_EQ(preprocess_text("HeLLo"), "hello");
  EXPECT_EQ(preprocess_text("\xC3\x89" "COLE"), "\xC3\xA9" "cole");  // École
  EXPECT_EQ(preprocess_text("\xCE\xA3\xD0\x96"), "\xCF\x83\xD0\xB6");  // Σ Ж
}

TEST(PreprocessTextTest, RepeatedCharacters) {
  EXPECT_EQ(preprocess_text("soooooo"), "soo");
  EXPECT_EQ(preprocess_text("goal!!!!"), "goal!!");
  EXPECT_EQ(preprocess_text("cool"), "cool");
  EXPECT_EQ(preprocess_text("\xC3\xA9\xC3\xA9\xC3\xA9"), "\xC3\xA9\xC3\xA9");
  PreprocessConfig one;
  one.max_char_repeat = 1;
  EXPECT_EQ(preprocess_text("cool", one), "col");
}

TEST(PreprocessTextTest, Mentions) {
  EXPECT_EQ(preprocess_text("hi @JoeBiden"), "hi @user");
  EXPECT_EQ(preprocess_text("thanks @joe_biden, bye"), "thanks @user, bye");
  EXPECT_EQ(preprocess_text("@@joe"), "@user");
  EXPECT_EQ(preprocess_text("mail me at me@example"), "mail me at me@example");
  EXPECT_EQ(preprocess_text("@ alone"), "@ alone");
}

TEST(PreprocessTextTest, StripAtMode) {
  EXPECT_EQ(preprocess_text("hi @JoeBiden", strip_at()), "hi joebiden");
  EXPECT_EQ(preprocess_text("@@joe", strip_at()), "joe");
  EXPECT_EQ(preprocess_text("@__@ab", strip_at()), "__ab");
}

TEST(PreprocessTextTest, Urls) {
  EXPECT_EQ(preprocess_text("see HTTP://X.CO/abc"), "see <url>");
  EXPECT_EQ(preprocess_text("www.example.com"), "<url>");
  EXPECT_EQ(preprocess_text("(https://x.co)"), "(<url>)");
  EXPECT_EQ(preprocess_text("httpx"), "httpx");
  EXPECT_EQ(preprocess_text("hhttp://x"), "hhttp://x");
  EXPECT_EQ(preprocess_text("htttp://x"), "<url>");
  EXPECT_EQ(preprocess_text("wwww.x"), "ww.x");
}

TEST(PreprocessTextTest, Numbers) {
  EXPECT_EQ(preprocess_text("5551234"), "<number>");
  EXPECT_EQ(preprocess_text("555-1234 (555) 3.14 1/2"),
            "<number> (<number>) <number> <number>");
  EXPECT_EQ(preprocess_text("covid19"), "covid19");
  EXPECT_EQ(preprocess_text("3"), "3");
  EXPECT_EQ(preprocess_text("+1"), "+1");
}

TEST(TokenizeTest, StripsPunctuation) {
  EXPECT_EQ(tokenize("goal!!"), (Tokens{"goal"}));
  EXPECT_EQ(tokenize("\"quoted,\" (text)"), (Tokens{"quoted", "text"}));
}

TEST(TokenizeTest, KeepsQueryShapedWords) {
  EXPECT_EQ(tokenize("self-titled #championsleague @user"),
            (Tokens{"self-titled", "#championsleague", "@user"}));
  EXPECT_EQ(tokenize("co-star don't <url> <number>"),
            (Tokens{"co-star", "don't", "<url>", "<number>"}));
}

TEST(TokenizeTest, NeverEmitsEmpty) {
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("!!! ... --").empty());
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    for (const auto& token : tokenize(preprocess_text(testing::fuzz_string(rng)))) {
      ASSERT_FALSE(token.empty());
    }
  }
}

TEST(TokenizeTest, RoundTripFixpoint) {
  Rng rng(8);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyz0123456789";
  for (int trial = 0; trial < 500; ++trial) {
    std::string sentence;
    const std::size_t words = rng.below(12);
    for (std::size_t w = 0; w < words; ++w) {
      if (w > 0) sentence += ' ';
      const std::size_t length = 1 + rng.below(8);
      for (std::size_t c = 0; c < length; ++c) sentence += alphabet[rng.below(alphabet.size())];
    }
    const Tokens tokens = tokenize(sentence);
    std::string joined;
    for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + t;
    EXPECT_EQ(tokenize(joined), tokens);
  }
}

TEST(PreprocessPropertyTest, Idempotent) {
  Rng rng(12);
  for (int i = 0; i < 5000; ++i) {
    const std::string raw = testing::fuzz_string(rng);
    for (const auto& config : {PreprocessConfig{}, strip_at()}) {
      const std::string once = preprocess_text(raw, config);
      ASSERT_EQ(preprocess_text(once, config), once) << "raw: " << raw;
    }
  }
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.compare(0, prefix.size(), prefix) == 0;
}

TEST(PreprocessPropertyTest, OutputInvariants) {
  Rng rng(21);
  for (int i = 0; i < 5000; ++i) {
    const std::string raw = testing::fuzz_string(rng);
    const std::string out = preprocess_text(raw);
    const std::u32string cps = text::decode_utf8(out);
    ASSERT_EQ(text::encode_utf8(cps), out) << "not valid UTF-8";
    std::size_t run = 0;
    for (std::size_t k = 0; k < cps.size(); ++k) {
      ASSERT_FALSE(text::is_upper(cps[k])) << out;
      run = (k > 0 && cps[k] == cps[k - 1]) ? run + 1 : 1;
      ASSERT_LE(run, 2u) << out;
    }
    for (const auto& token : tokenize(out)) {
      ASSERT_FALSE(starts_with(token, "http://") || starts_with(token, "https://") ||
                   starts_with(token, "www."))
          << token;
      const std::u32string t = text::decode_utf8(token);
      const auto first = t.find_first_not_of(U'@');
      if (first > 0 && first != std::u32string::npos && text::is_word_char(t[first])) {
        ASSERT_EQ(token, "@user") << "raw: " << raw;
      }
    }
  }
}

TEST(PreprocessConfigTest, RejectsUnsafePlaceholders) {
  auto with_url = [](std::string placeholder) {
    PreprocessConfig config;
    config.url_placeholder = std::move(placeholder);
    return config;
  };
  EXPECT_THROW(with_url("").validate(), ConfigError);
  EXPECT_THROW(with_url("<url1>").validate(), ConfigError);
  EXPECT_THROW(with_url("@link").validate(), ConfigError);
  EXPECT_THROW(with_url("www.link").validate(), ConfigError);
  EXPECT_THROW(with_url("<URL>").validate(), ConfigError);
  EXPECT_THROW(with_url("[link]").validate(), ConfigError);
  EXPECT_THROW(with_url("a b").validate(), ConfigError);
  EXPECT_THROW(with_url("<number>").validate(), ConfigError);
  EXPECT_THROW(with_url("<linkkk>").validate(), ConfigError);
  EXPECT_NO_THROW(with_url("<link>").validate());
  PreprocessConfig zero;
  zero.max_char_repeat = 0;
  EXPECT_THROW(zero.validate(), ConfigError);
}

TEST(PreprocessConfigTest, CustomPlaceholder) {
  PreprocessConfig config;
  config.url_placeholder = "<link>";
  EXPECT_EQ(preprocess_text("go to www.x.org now", config), "go to <link> now");
}

TEST(PreprocessCorpusTest, TokenizesEveryPost) {
  std::vector<Post> posts = {testing::make_post("u1", "p1", "Hello WORLD!!!"),
                             testing::make_post("u2", "p2", "@Bob see http://x.y")};
  const Corpus corpus = preprocess_corpus(Corpus::from_posts(posts, {}), {});
  EXPECT_TRUE(corpus.preprocessed());
  EXPECT_EQ(corpus.posts("u1")[0].tokens, (Tokens{"hello", "world"}));
  EXPECT_EQ(corpus.posts("u2")[0].tokens, (Tokens{"@user", "see", "<url>"}));
  EXPECT_EQ(corpus.user("u1").token_count, 2u);
  EXPECT_THROW(preprocess_corpus(corpus, {}), InvariantError);
}

}  // namespace
}  // namespace proficiency
