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

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "cli/commands.h"
#include "gtest/gtest.h"
#include "nlohmann/json.hpp"
#include "proficiency/corpus.h"
#include "support/test_util.h"

namespace proficiency {
namespace {

using nlohmann::json;

std::filesystem::path fixture() { return testing::data_dir() / "fixture"; }

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  return json::parse(in);
}

// Counts records line by line, without the library loader.
TEST(FixtureTest, PostCountsMatchManifest) {
  const json manifest = read_json(fixture() / "manifest.json");
  std::map<std::string, std::size_t> counts;
  std::ifstream in(fixture() / "posts.jsonl");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    ++lines;
    ++counts[json::parse(line).at("user_id").get<std::string>()];
  }
  EXPECT_EQ(lines, 200u * 20u);
  ASSERT_EQ(counts.size(), manifest["post_counts"].size());
  for (const auto& [user, n] : counts) {
    EXPECT_EQ(manifest["post_counts"][user].get<std::size_t>(), n) << user;
  }

  const Corpus corpus = load_corpus(fixture() / "posts.jsonl", fixture() / "users.jsonl");
  EXPECT_EQ(corpus.num_posts(), lines);
  for (const auto& [user, record] : corpus.users()) {
    EXPECT_EQ(record.post_count, counts.at(user));
    EXPECT_EQ(record.labels,
              (std::set<std::string>{manifest["user_topic"][user].get<std::string>()}));
  }
}

TEST(FixtureTest, QueryCoversBothTopics) {
  const json query = read_json(fixture() / "query.json");
  EXPECT_EQ(query.size(), 2u);
  EXPECT_EQ(query["alpha"].size(), 50u);
  EXPECT_EQ(query["beta"].size(), 50u);
}

// The committed files are exactly what the synth command produces.
TEST(FixtureTest, RegeneratesByteForByte) {
  testing::TempDir dir;
  std::ostringstream out, err;
  ASSERT_EQ(cli::run({"synth", "--config", (fixture() / "config.json").string(), "--out",
                      dir.path().string(), "--quiet"},
                     out, err),
            cli::kExitOk)
      << err.str();
  for (const char* name :
       {"posts.jsonl", "users.jsonl", "query.json", "manifest.json", "word_vectors.txt"}) {
    EXPECT_TRUE(testing::read_file(dir.path() / name) == testing::read_file(fixture() / name))
        << name;
  }
}

}  // namespace
}  // namespace proficiency
