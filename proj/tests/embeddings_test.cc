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
#include <limits>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "proficiency/common.h"
#include "proficiency/corpus.h"
#include "proficiency/embeddings.h"
#include "proficiency/features.h"
#include "proficiency/random.h"
#include "support/test_util.h"

namespace proficiency {
namespace {

using testing::TempDir;

double naive_dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> v) { return std::sqrt(naive_dot(v, v)); }

TEST(WordTableTest, AddAndFind) {
  WordEmbeddingTable table(2);
  EXPECT_TRUE(table.add("a", std::vector<double>{1, 2}));
  EXPECT_FALSE(table.add("a", std::vector<double>{3, 4}));
  EXPECT_EQ(table.size(), 1u);
  EXPECT_EQ((*table.find("a"))[1], 2.0);
  EXPECT_FALSE(table.find("b").has_value());
  EXPECT_THROW(table.add("b", std::vector<double>{1}), InvariantError);
  EXPECT_THROW(table.add("b", std::vector<double>{1, INFINITY}), InvariantError);
}

TEST(WordTableTest, LoadLowercasesAndDropsDuplicates) {
  TempDir dir;
  const auto path = dir.write("w.txt", "3 2\nHello 1 2\nhello 3 4\nx -0.5 1e-3\n");
  const WordEmbeddingTable table = load_word_embeddings(path);
  EXPECT_EQ(table.words(), (std::vector<std::string>{"hello", "x"}));
  EXPECT_EQ((*table.find("hello"))[0], 1.0);
  EXPECT_EQ((*table.find("x"))[1], 1e-3);
}

TEST(WordTableTest, LoadErrors) {
  TempDir dir;
  EXPECT_THROW(load_word_embeddings(dir.write("a", "1 2\nx 1\n")), DataError);
  EXPECT_THROW(load_word_embeddings(dir.write("b", "2 2\nx 1 2\n")), DataError);
  EXPECT_THROW(load_word_embeddings(dir.write("c", "x 1 2\n")), DataError);
  EXPECT_THROW(load_word_embeddings(dir.write("d", "1 2\nx 1 nan\n")), DataError);
  EXPECT_THROW(load_word_embeddings(dir.write("e", "1 2\nx 1 q\n")), DataError);
  EXPECT_THROW(load_word_embeddings(dir.write("f", "")), DataError);
  EXPECT_THROW(load_word_embeddings(dir.path() / "absent"), DataError);
}

TEST(WordTableTest, SaveLoadExact) {
  TempDir dir;
  Rng rng(1);
  WordEmbeddingTable table(5);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> v(5);
    for (auto& x : v) x = rng.normal() * 1e-3;
    table.add("w" + std::to_string(i), v);
  }
  save_word_embeddings(table, dir.path() / "w.txt");
  const WordEmbeddingTable back = load_word_embeddings(dir.path() / "w.txt");
  ASSERT_EQ(back.words(), table.words());
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t d = 0; d < 5; ++d) EXPECT_EQ(back.vector(i)[d], table.vector(i)[d]);
  }
}

TEST(UserTableTest, SaveLoadAndErrors) {
  TempDir dir;
  UserEmbeddingTable users(2);
  users.set("u1", {0.1, -0.2});
  users.set("u2", {1.0 / 3, 2});
  EXPECT_THROW(users.set("u3", {1}), InvariantError);
  EXPECT_THROW(users.vector("u9"), DataError);
  save_user_embeddings(users, dir.path() / "u.txt");
  const UserEmbeddingTable back = load_user_embeddings(dir.path() / "u.txt");
  EXPECT_EQ(back.vectors(), users.vectors());
  EXPECT_THROW(load_user_embeddings(dir.write("dup", "2 1\nu 1\nu 2\n")), DataError);
}

TEST(SigmoidTest, MatchesFormula) {
  for (double x = -30; x <= 30; x += 0.37) {
    EXPECT_NEAR(sigmoid(x), 1.0 / (1.0 + std::exp(-x)), 1e-15) << x;
  }
  EXPECT_EQ(sigmoid(0), 0.5);
}

TEST(SigmoidTest, StaysInsideOpenInterval) {
  for (double x : {-1e6, -800.0, -50.0, 50.0, 800.0, 1e6}) {
    EXPECT_GT(sigmoid(x), 0.0) << x;
    EXPECT_LT(sigmoid(x), 1.0) << x;
    EXPECT_TRUE(std::isfinite(std::log(sigmoid(x))));
    EXPECT_TRUE(std::isfinite(std::log(1 - sigmoid(x))));
  }
}

TEST(DotTest, MatchesNaiveSum) {
  Rng rng(2);
  for (std::size_t n : {0, 1, 3, 4, 7, 400}) {
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal();
    }
    const double expected = naive_dot(a, b);
    EXPECT_NEAR(dot(a, b), expected, 1e-12 * (1 + std::abs(expected)));
  }
}

struct Tables {
  WordEmbeddingTable words{3};
  UserEmbeddingTable users{3};
};

Tables small_tables() {
  Tables t;
  t.words.add("putt", std::vector<double>{1, 0, 0});
  t.words.add("pawn", std::vector<double>{0, 2, 0});
  t.words.add("rook", std::vector<double>{0, 0, -1});
  t.users.set("a", {1, 0.5, 0});
  t.users.set("b", {-1, 0, 2});
  t.users.set("c", {0, 0, 0});
  return t;
}

TEST(U2vTest, SigmoidOfDotProducts) {
  const Tables t = small_tables();
  const QuerySet query({{"golf", {"putt", "unknown"}}, {"chess", {"pawn", "rook"}}});
  const FeatureMatrix u2v = u2v_features(t.users, t.words, query);
  EXPECT_EQ(u2v.column_names(), (std::vector<std::string>{"putt", "pawn", "rook"}));
  for (const auto& id : {"a", "b", "c"}) {
    const auto& u = t.users.vector(id);
    for (std::size_t j = 0; j < 3; ++j) {
      const double z = naive_dot(*t.words.find(u2v.column_names()[j]), u);
      EXPECT_NEAR(u2v.row(id)[j], 1 / (1 + std::exp(-z)), 1e-15);
    }
  }
}

TEST(U2vTest, Errors) {
  const Tables t = small_tables();
  const QuerySet none({{"x", {"nothing"}}, {"y", {"here"}}});
  EXPECT_THROW(u2v_features(t.users, t.words, none), DataError);
  WordEmbeddingTable other(2);
  other.add("putt", std::vector<double>{1, 0});
  EXPECT_THROW(u2v_features(t.users, other, QuerySet({{"g", {"putt"}}, {"h", {"x"}}})),
               DataError);
}

TEST(RelU2vTest, ColumnsAverageToOne) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    FeatureMatrix u2v(ModelId::kU2v, {"a", "b", "c"});
    const std::size_t n = 2 + rng.below(20);
    for (std::size_t u = 0; u < n; ++u) {
      u2v.set_row("u" + std::to_string(u),
                  {rng.uniform(), rng.uniform() * 1e-9 + 1e-12, 0.5});
    }
    const FeatureMatrix rel = rel_u2v_features(u2v);
    EXPECT_EQ(rel.model(), ModelId::kRelU2v);
    for (std::size_t j = 0; j < 3; ++j) {
      const auto col = u2v.column(j);
      double mean = 0;
      for (double v : col) mean += v;
      mean /= static_cast<double>(n);
      const auto rel_col = rel.column(j);
      double rel_mean = 0;
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(rel_col[i], col[i] / mean, 1e-12 * rel_col[i]);
        rel_mean += rel_col[i];
      }
      EXPECT_NEAR(rel_mean / static_cast<double>(n), 1.0, 1e-12);
    }
  }
}

TEST(RelU2vTest, Examples) {
  FeatureMatrix u2v(ModelId::kU2v, {"a", "b"});
  u2v.set_row("u1", {0.2, 0.7});
  u2v.set_row("u2", {0.6, 0.7});
  u2v.set_row("u3", {0.2, 0.7});
  const FeatureMatrix rel = rel_u2v_features(u2v);
  EXPECT_NEAR(rel.row("u1")[0], 0.6, 1e-15);
  EXPECT_NEAR(rel.row("u2")[0], 1.8, 1e-15);
  for (const auto& id : {"u1", "u2", "u3"}) EXPECT_DOUBLE_EQ(rel.row(id)[1], 1.0);

  FeatureMatrix pair(ModelId::kU2v, {"a"});
  pair.set_row("u1", {0.2});
  pair.set_row("u2", {0.6});
  EXPECT_DOUBLE_EQ(rel_u2v_features(pair).row("u1")[0], 0.5);
  EXPECT_DOUBLE_EQ(rel_u2v_features(pair).row("u2")[0], 1.5);
}

TEST(RelU2vTest, Errors) {
  FeatureMatrix tf(ModelId::kTf, {"a"});
  tf.set_row("u1", {0.5});
  tf.set_row("u2", {0.5});
  EXPECT_THROW(rel_u2v_features(tf), ConfigError);
  FeatureMatrix single(ModelId::kU2v, {"a"});
  single.set_row("u1", {0.5});
  EXPECT_THROW(rel_u2v_features(single), DataError);
}

SynthConfig vocab_config() {
  SynthConfig config;
  config.topics = {{"golf", make_synthetic_vocab("gol", 15)},
                   {"chess", make_synthetic_vocab("che", 15)}};
  config.background_vocab = make_synthetic_vocab("bg", 30);
  return config;
}

TEST(SynthEmbeddingTest, NormsAndDeterminism) {
  SynthEmbeddingConfig config;
  config.dim = 50;
  config.seed = 3;
  const WordEmbeddingTable a = synthesize_word_embeddings(vocab_config(), config);
  const WordEmbeddingTable b = synthesize_word_embeddings(vocab_config(), config);
  EXPECT_EQ(a.size(), 60u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(norm(a.vector(i)), 4.0, 1e-12);
    for (std::size_t d = 0; d < 50; ++d) ASSERT_EQ(a.vector(i)[d], b.vector(i)[d]);
  }
}

TEST(SynthEmbeddingTest, CoherenceGroupsTopics) {
  SynthEmbeddingConfig config;
  config.dim = 200;
  config.coherence = 0.7;
  config.seed = 8;
  const WordEmbeddingTable table = synthesize_word_embeddings(vocab_config(), config);
  auto cosine = [&](const std::string& x, const std::string& y) {
    return naive_dot(*table.find(x), *table.find(y)) / 16.0;
  };
  // Same topic: about coherence^2; different topics: about 0.
  EXPECT_NEAR(cosine("golaa", "golab"), 0.49, 0.2);
  EXPECT_NEAR(cosine("golaa", "cheaa"), 0.0, 0.3);
}

TEST(SynthEmbeddingTest, ZeroCoherenceIsOrthogonal) {
  SynthEmbeddingConfig config;
  config.dim = 60;
  config.coherence = 0.0;
  config.seed = 5;
  const WordEmbeddingTable table = synthesize_word_embeddings(vocab_config(), config);
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = i + 1; j < table.size(); ++j) {
      ASSERT_NEAR(naive_dot(table.vector(i), table.vector(j)), 0.0, 1e-10);
    }
  }
}

TEST(SynthEmbeddingTest, Validation) {
  SynthEmbeddingConfig config;
  config.dim = 0;
  EXPECT_THROW(synthesize_word_embeddings(vocab_config(), config), ConfigError);
  config.dim = 10;
  config.coherence = 1.0;
  EXPECT_THROW(synthesize_word_embeddings(vocab_config(), config), ConfigError);
  config.coherence = 0.5;
  config.norm = 0;
  EXPECT_THROW(synthesize_word_embeddings(vocab_config(), config), ConfigError);
}

TEST(InitialVectorTest, RangeAndIndependence) {
  const auto v = initial_user_vector(9, "alice", 400);
  for (double x : v) {
    EXPECT_GE(x, -0.5 / 400);
    EXPECT_LE(x, 0.5 / 400);
  }
  EXPECT_EQ(v, initial_user_vector(9, "alice", 400));
  EXPECT_NE(v, initial_user_vector(9, "bob", 400));
  EXPECT_NE(v, initial_user_vector(10, "alice", 400));
}

}  // namespace
}  // namespace proficiency
