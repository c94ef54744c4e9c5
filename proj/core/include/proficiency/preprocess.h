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

#ifndef PROFICIENCY_PREPROCESS_H_
#define PROFICIENCY_PREPROCESS_H_

#include <string>
#include <string_view>
#include <vector>

#include "proficiency/corpus.h"

namespace proficiency {

enum class MentionMode {
  kMaskAll,  // "@handle" -> "@user"
  kStripAt,  // "@handle" -> "handle"
};

inline constexpr std::string_view kUserPlaceholder = "@user";

struct PreprocessConfig {
  MentionMode mention_mode = MentionMode::kMaskAll;
  std::string url_placeholder = "<url>";
  std::string number_placeholder = "<number>";
  int max_char_repeat = 2;

  // Placeholders must be non-empty, digit-free, not start with '@', not look
  // like a URL and survive tokenize() unchanged; max_char_repeat >= 1.
  void validate() const;

  std::vector<std::string> placeholders() const;
};

// Normalizes raw post text. Steps, in order:
//   1. whitespace runs collapse to one space, ends are trimmed;
//   2. lowercasing;
//   3. mentions are masked (or their '@' stripped);
//   4. URLs, then standalone numbers, are masked;
//   5. runs longer than max_char_repeat are cut to max_char_repeat.
// Masking runs before run reduction because reduction would corrupt the
// patterns ("www." -> "ww."). The function is idempotent.
//
// Steps 3-4 look at the "core" of each space-delimited word, i.e. the word
// with leading and trailing characters that tokenize() strips removed:
//   mention: core starts with '@'+ then a word character;
//   URL:     core starts with "http://", "https://" or "www." (checked on the
//            run-reduced core so that "htttp://" is caught too);
//   number:  core holds only digits and + - ( ) . / with at least 2 digits.
// The whole core is replaced; stripped punctuation around it is kept.
//
// Text is treated as UTF-8; invalid bytes become U+FFFD. Lowercasing covers
// ASCII, Latin-1, Greek and basic Cyrillic.
std::string preprocess_text(std::string_view raw,
                            const PreprocessConfig& config = {});

// Splits normalized text on single spaces and strips leading and trailing
// characters other than letters, digits, '#', '@', '<' and '>'. Internal
// hyphens and apostrophes survive. Never returns an empty token.
std::vector<std::string> tokenize(std::string_view normalized);

// preprocess_text followed by tokenize.
std::vector<std::string> preprocess_and_tokenize(std::string_view raw,
                                                 const PreprocessConfig& config);

Corpus preprocess_corpus(const Corpus& corpus, const PreprocessConfig& config);

namespace text {

// Code point helpers shared with the tests.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view code_points);
bool is_space(char32_t c);
bool is_token_char(char32_t c);
bool is_word_char(char32_t c);
char32_t to_lower(char32_t c);
bool is_upper(char32_t c);

}  // namespace text

}  // namespace proficiency

#endif  // PROFICIENCY_PREPROCESS_H_
