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

#include <cmath>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "gtest/gtest.h"
#include "proficiency/common.h"
#include "proficiency/embeddings.h"
#include "proficiency/features.h"
#include "proficiency/random.h"
#include "proficiency/scoring.h"
#include "support/test_util.h"

namespace proficiency {
namespace {

double logit(double p) { return std::log(p / (1 - p)); }

Post tokens_post(std::string id, std::vector<std::string> tokens) {
  Post post = testing::make_post("a", std::move(id), "");
  post.tokens = std::move(tokens);
  return post;
}

// One dimension, so each sigmoid is set directly through the user value.
struct TinyWorld {
  WordEmbeddingTable words{1};
  UserEmbeddingTable users{1};
  TinyWorld() {
    words.add("putt", std::vector<double>{1});
    words.add("pawn", std::vector<double>{-1});
    users.set("a", {logit(0.6)});
    users.set("b", {logit(0.4)});
  }
};

TEST(ProficiencyScoreTest, MeanOfFeatures) {
  EXPECT_DOUBLE_EQ(proficiency_score(std::vector<double>{0.2, 0.4, 0.9}), 0.5);
  EXPECT_THROW(proficiency_score(std::vector<double>{}), InvariantError);
}

TEST(BrevityPenaltyTest, Examples) {
  EXPECT_DOUBLE_EQ(brevity_penalty(5, 10), std::exp(-1.0));
  EXPECT_EQ(brevity_penalty(10, 10), 1.0);
  EXPECT_EQ(brevity_penalty(40, 10), 1.0);
  EXPECT_THROW(brevity_penalty(0, 10), InvariantError);
  EXPECT_THROW(brevity_penalty(3, 0), InvariantError);
}

TEST(BrevityPenaltyTest, MonotoneAndBounded) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = 0.5 + rng.uniform() * 50;
    double previous = 0;
    for (std::size_t len = 1; len < 120; ++len) {
      const double bp = brevity_penalty(len, r);
      EXPECT_GT(bp, 0.0);
      EXPECT_LE(bp, 1.0);
      EXPECT_GE(bp, previous);
      if (static_cast<double>(len) >= r) {
        EXPECT_EQ(bp, 1.0);
      }
      previous = bp;
    }
  }
}

TEST(ScoreConfigTest, ParseAndValidate) {
  EXPECT_EQ(parse_score_model("u2v"), ScoreModel::kU2v);
  EXPECT_EQ(parse_score_model("relu2v"), ScoreModel::kRelU2v);
  EXPECT_THROW(parse_score_model("tf"), ConfigError);
  EXPECT_EQ(parse_word_scope("all"), WordScope::kAllInVocab);
  EXPECT_EQ(parse_word_scope("query"), WordScope::kQueryRestricted);
  EXPECT_THROW(parse_word_scope("some"), ConfigError);
  ScoreConfig config;
  config.reference_length = 0;
  EXPECT_THROW(config.validate(), ConfigError);
  config.reference_length = 4;
  EXPECT_NO_THROW(config.validate());
}

TEST(ScoreContentTest, RelativeScoreExample) {
  TinyWorld world;
  PopulationStats population(world.users, world.words, std::vector<std::string>{});
  ScoringContext context{world.users, world.words, population};
  ScoreConfig config;
  const ContentScore rel = score_content("a", tokens_post("p", {"putt"}), context, config, 0);
  EXPECT_NEAR(rel.ps, 1.2, 1e-12);
  EXPECT_EQ(rel.ps, rel.ps_hat);
  EXPECT_NEAR(*population.find("putt"), 0.5, 1e-15);
  config.model = ScoreModel::kU2v;
  EXPECT_NEAR(score_content("a", tokens_post("p", {"putt"}), context, config, 0).ps, 0.6,
              1e-12);
  EXPECT_NEAR(score_content("b", tokens_post("p", {"putt"}), context, config, 0).ps, 0.4,
              1e-12);
}

TEST(ScoreContentTest, SkipsUnknownWordsAndAppliesBrevity) {
  TinyWorld world;
  PopulationStats population(world.users, world.words, std::vector<std::string>{"putt"});
  ScoringContext context{world.users, world.words, population};
  ScoreConfig config;
  config.model = ScoreModel::kU2v;
  config.brevity = true;
  const ContentScore s =
      score_content("a", tokens_post("p", {"putt", "zz", "pawn", "yy"}), context, config, 8);
  EXPECT_EQ(s.scored_token_count, 2u);
  EXPECT_NEAR(s.ps, 0.5, 1e-12);
  EXPECT_NEAR(s.ps_hat, 0.5 * std::exp(1 - 8.0 / 4), 1e-12);
}

TEST(ScoreContentTest, Errors) {
  TinyWorld world;
  PopulationStats population;
  ScoringContext context{world.users, world.words, population};
  ScoreConfig config;
  EXPECT_THROW(score_content("a", tokens_post("p", {"zz"}), context, config, 0),
               NoScorableTokens);
  EXPECT_THROW(score_content("nobody", tokens_post("p", {"putt"}), context, config, 0),
               DataError);
  config.scope = WordScope::kQueryRestricted;
  EXPECT_THROW(score_content("a", tokens_post("p", {"putt"}), context, config, 0),
               ConfigError);
}

TEST(ScoreContentTest, QueryScope) {
  TinyWorld world;
  PopulationStats population;
  const QuerySet query({{"golf", {"putt"}}, {"chess", {"rook"}}});
  ScoringContext context{world.users, world.words, population, &query};
  ScoreConfig config;
  config.model = ScoreModel::kU2v;
  config.scope = WordScope::kQueryRestricted;
  const ContentScore s = score_content("a", tokens_post("p", {"putt", "pawn"}), context, config, 0);
  EXPECT_EQ(s.scored_token_count, 1u);
  EXPECT_NEAR(s.ps, 0.6, 1e-12);
  EXPECT_THROW(score_content("a", tokens_post("q", {"pawn"}), context, config, 0),
               NoScorableTokens);
}

struct RandomWorld {
  WordEmbeddingTable words{6};
  UserEmbeddingTable users{6};
  std::vector<Post> posts;
};

RandomWorld random_world(std::uint64_t seed) {
  Rng rng(seed);
  RandomWorld w;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> v(6);
    for (auto& x : v) x = rng.normal();
    w.words.add("w" + std::to_string(i), v);
  }
  for (int u = 0; u < 8; ++u) {
    std::vector<double> v(6);
    for (auto& x : v) x = rng.normal() * 0.5;
    w.users.set("u" + std::to_string(u), v);
  }
  for (int p = 0; p < 30; ++p) {
    std::vector<std::string> tokens;
    for (std::size_t t = 0, n = 1 + rng.below(12); t < n; ++t) {
      tokens.push_back("w" + std::to_string(rng.below(24)));  // some unknown
    }
    w.posts.push_back(tokens_post("p" + std::to_string(100 + p), tokens));
  }
  return w;
}

// Recomputes every score from the formulas with independent loops.
TEST(RankUserPostsTest, MatchesRecomputation) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RandomWorld w = random_world(seed);
    PopulationStats population(w.users, w.words, w.words.words());
    ScoringContext context{w.users, w.words, population};
    ScoreConfig config;
    config.brevity = true;
    const RankedPosts ranked = rank_user_posts("u3", w.posts, context, config);

    double total = 0;
    for (const auto& post : w.posts) total += static_cast<double>(post.tokens.size());
    const double r = total / static_cast<double>(w.posts.size());
    EXPECT_DOUBLE_EQ(ranked.reference_length, r);
    EXPECT_EQ(ranked.scored.size() + ranked.unscorable.size(), w.posts.size());

    std::unordered_map<std::string, double> expected;
    for (const auto& post : w.posts) {
      double sum = 0;
      std::size_t n = 0;
      for (const auto& token : post.tokens) {
        auto vec = w.words.find(token);
        if (!vec) continue;
        auto sig = [&](const std::vector<double>& u) {
          double z = 0;
          for (std::size_t d = 0; d < 6; ++d) z += (*vec)[d] * u[d];
          return 1 / (1 + std::exp(-z));
        };
        double mean = 0;
        for (const auto& [id, u] : w.users.vectors()) mean += sig(u) / 8;
        sum += sig(w.users.vector("u3")) / mean;
        ++n;
      }
      if (n == 0) continue;
      const double len = static_cast<double>(post.tokens.size());
      expected[post.post_id] = sum / static_cast<double>(n) * std::exp(std::min(0.0, 1 - r / len));
    }
    ASSERT_EQ(expected.size(), ranked.scored.size());
    for (std::size_t i = 0; i < ranked.scored.size(); ++i) {
      const auto& s = ranked.scored[i];
      EXPECT_NEAR(s.ps_hat, expected.at(s.post_id), 1e-12 * s.ps_hat);
      if (i > 0) {
        EXPECT_GE(ranked.scored[i - 1].ps_hat, s.ps_hat);
      }
    }
  }
}

TEST(RankUserPostsTest, TiesBreakByPostId) {
  TinyWorld world;
  PopulationStats population;
  ScoringContext context{world.users, world.words, population};
  ScoreConfig config;
  config.model = ScoreModel::kU2v;
  const std::vector<Post> posts = {tokens_post("p3", {"putt"}), tokens_post("p1", {"putt"}),
                                   tokens_post("p2", {"zz"}), tokens_post("p0", {"pawn"})};
  const RankedPosts ranked = rank_user_posts("a", posts, context, config);
  ASSERT_EQ(ranked.scored.size(), 3u);
  EXPECT_EQ(ranked.scored[0].post_id, "p1");
  EXPECT_EQ(ranked.scored[1].post_id, "p3");
  EXPECT_EQ(ranked.scored[2].post_id, "p0");
  EXPECT_EQ(ranked.unscorable, (std::vector<std::string>{"p2"}));
}

TEST(RankUserPostsTest, FixedReferenceLength) {
  TinyWorld world;
  PopulationStats population;
  ScoringContext context{world.users, world.words, population};
  ScoreConfig config;
  config.brevity = true;
  config.reference_length = 3;
  const std::vector<Post> posts = {tokens_post("p", {"putt"})};
  const RankedPosts ranked = rank_user_posts("a", posts, context, config);
  EXPECT_EQ(ranked.reference_length, 3);
  EXPECT_NEAR(ranked.scored[0].ps_hat, ranked.scored[0].ps * std::exp(-2.0), 1e-15);
}

// Scaling the population means rescales every relative score by the same
// factor, so the ranking is unchanged.
TEST(PopulationStatsTest, RescaleKeepsRanking) {
  const RandomWorld w = random_world(9);
  PopulationStats base(w.users, w.words, w.words.words());
  PopulationStats scaled = base;
  scaled.rescale(2.5);
  EXPECT_NEAR(*scaled.find("w3"), 2.5 * *base.find("w3"), 1e-15);
  ScoringContext a{w.users, w.words, base};
  ScoringContext b{w.users, w.words, scaled};
  const auto ra = rank_user_posts("u1", w.posts, a, ScoreConfig{});
  const auto rb = rank_user_posts("u1", w.posts, b, ScoreConfig{});
  ASSERT_EQ(ra.scored.size(), rb.scored.size());
  for (std::size_t i = 0; i < ra.scored.size(); ++i) {
    EXPECT_EQ(ra.scored[i].post_id, rb.scored[i].post_id);
    EXPECT_NEAR(rb.scored[i].ps * 2.5, ra.scored[i].ps, 1e-12);
  }
}

TEST(PopulationStatsTest, LazyCache) {
  TinyWorld world;
  PopulationStats population(world.users, world.words, std::vector<std::string>{"putt"});
  EXPECT_EQ(population.size(), 1u);
  EXPECT_FALSE(population.find("pawn").has_value());
  EXPECT_NEAR(population.mean_sigmoid("pawn", world.users, world.words), 0.5, 1e-15);
  EXPECT_EQ(population.size(), 2u);
}

TEST(WriteScoresTest, Csv) {
  const std::vector<ContentScore> scores = {{"a", "p1", 1.5, 0.75, 2}};
  std::ostringstream plain;
  write_scores(scores, plain);
  EXPECT_EQ(plain.str(), "user_id,post_id,ps,ps_hat,scored_token_count\na,p1," +
                             format_double(1.5) + "," + format_double(0.75) + ",2\n");
  const std::unordered_map<std::string, std::string> texts = {{"p1", "hi, there"}};
  std::ostringstream with_text;
  const std::vector<std::string> comments = {"seed=1"};
  write_scores(scores, with_text, &texts, comments);
  EXPECT_EQ(with_text.str(), "# seed=1\nuser_id,post_id,ps,ps_hat,scored_token_count,text\na,p1," +
                                 format_double(1.5) + "," + format_double(0.75) +
                                 ",2,\"hi, there\"\n");
}

}  // namespace
}  // namespace proficiency
