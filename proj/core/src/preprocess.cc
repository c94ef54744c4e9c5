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

#include "proficiency/preprocess.h"

#include <algorithm>
#include <array>

#include "proficiency/common.h"

namespace proficiency {
namespace text {

std::u32string decode_utf8(std::string_view bytes) {
  constexpr char32_t kReplacement = 0xFFFD;
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  while (i < bytes.size()) {
    const auto b0 = static_cast<unsigned char>(bytes[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
      len = 2, cp = b0 & 0x1F, min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3, cp = b0 & 0x0F, min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4, cp = b0 & 0x07, min = 0x10000;
    }
    bool ok = len > 0 && i + len <= bytes.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(bytes[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (ok && (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))) {
      ok = false;
    }
    if (ok) {
      out.push_back(cp);
      i += len;
    } else {
      out.push_back(kReplacement);
      ++i;
    }
  }
  return out;
}

std::string encode_utf8(std::u32string_view code_points) {
  std::string out;
  out.reserve(code_points.size());
  for (char32_t c : code_points) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

bool is_space(char32_t c) {
  switch (c) {
    case ' ': case '\t': case '\n': case '\v': case '\f': case '\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

namespace {

bool is_ascii_alnum(char32_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

// Non-ASCII punctuation, symbols and emoji blocks.
bool is_symbol(char32_t c) {
  return (c >= 0x80 && c <= 0xBF) || c == 0xD7 || c == 0xF7 ||
         (c >= 0x2000 && c <= 0x2BFF) || (c >= 0x3000 && c <= 0x303F) ||
         (c >= 0xFE10 && c <= 0xFE6F) || (c >= 0xFF00 && c <= 0xFF20) ||
         c == 0xFEFF || c == 0xFFFD || (c >= 0x1F000 && c <= 0x1FAFF);
}

bool is_non_ascii_letter(char32_t c) {
  return c >= 0x80 && !is_space(c) && !is_symbol(c);
}

}  // namespace

bool is_token_char(char32_t c) {
  if (c < 0x80) {
    return is_ascii_alnum(c) || c == '#' || c == '@' || c == '<' || c == '>';
  }
  return is_non_ascii_letter(c);
}

bool is_word_char(char32_t c) {
  if (c < 0x80) return is_ascii_alnum(c) || c == '_';
  return is_non_ascii_letter(c);
}

bool is_upper(char32_t c) {
  return (c >= 'A' && c <= 'Z') || (c >= 0xC0 && c <= 0xDE && c != 0xD7) ||
         (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) || (c >= 0x400 && c <= 0x42F);
}

char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 0x20;
  if (c < 0x80) return c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

}  // namespace text

namespace {

using text::is_token_char;

std::u32string reduce_runs(std::u32string_view s, int max_repeat) {
  std::u32string out;
  out.reserve(s.size());
  int run = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    run = (i > 0 && s[i] == s[i - 1]) ? run + 1 : 1;
    if (run <= max_repeat) out.push_back(s[i]);
  }
  return out;
}

bool starts_with(std::u32string_view s, std::u32string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool is_mention(std::u32string_view core) {
  std::size_t i = 0;
  while (i < core.size() && core[i] == U'@') ++i;
  return i > 0 && i < core.size() && text::is_word_char(core[i]);
}

bool has_url_prefix(std::u32string_view s) {
  return starts_with(s, U"http://") || starts_with(s, U"https://") ||
         starts_with(s, U"www.");
}

// Checked before and after run reduction: "www." itself has a run of three.
bool is_url(std::u32string_view core, int max_repeat) {
  return has_url_prefix(core) || has_url_prefix(reduce_runs(core, max_repeat));
}

bool is_number(std::u32string_view core) {
  std::size_t digits = 0;
  for (char32_t c : core) {
    if (c >= '0' && c <= '9') {
      ++digits;
    } else if (c != '+' && c != '-' && c != '(' && c != ')' && c != '.' &&
               c != '/') {
      return false;
    }
  }
  return digits >= 2;
}

struct Placeholders {
  std::u32string user;
  std::u32string url;
  std::u32string number;
};

// Applies mention, URL and number masking to the core of one word.
void mask_word(std::u32string& word, const PreprocessConfig& config,
               const Placeholders& placeholders) {
  std::size_t begin = 0;
  while (begin < word.size() && !is_token_char(word[begin])) ++begin;
  if (begin == word.size()) return;
  std::size_t end = word.size();
  while (!is_token_char(word[end - 1])) --end;

  std::u32string core = word.substr(begin, end - begin);
  if (is_mention(core)) {
    if (config.mention_mode == MentionMode::kStripAt) {
      // The handle may expose a new core, e.g. "@__@ab" -> "__@ab".
      core.erase(0, core.find_first_not_of(U'@'));
      word.replace(begin, end - begin, core);
      mask_word(word, config, placeholders);
      return;
    }
    core = placeholders.user;
  }
  if (is_url(core, config.max_char_repeat)) {
    core = placeholders.url;
  } else if (is_number(core)) {
    core = placeholders.number;
  }
  word.replace(begin, end - begin, core);
}

}  // namespace

void PreprocessConfig::validate() const {
  if (max_char_repeat < 1) {
    throw ConfigError("preprocess.max_char_repeat must be >= 1");
  }
  auto check = [&](const std::string& field, const std::string& value) {
    const std::u32string cps = text::decode_utf8(value);
    if (cps.empty()) throw ConfigError(field + " must not be empty");
    for (char32_t c : cps) {
      if (c >= '0' && c <= '9') throw ConfigError(field + " must not contain digits");
      if (text::to_lower(c) != c) throw ConfigError(field + " must be lowercase");
    }
    if (cps.front() == U'@') throw ConfigError(field + " must not start with '@'");
    if (is_url(cps, max_char_repeat)) {
      throw ConfigError(field + " must not look like a URL");
    }
    if (reduce_runs(cps, max_char_repeat) != cps) {
      throw ConfigError(field + " has a character run longer than max_char_repeat");
    }
    const auto tokens = tokenize(value);
    if (tokens.size() != 1 || tokens.front() != value) {
      throw ConfigError(field + " must survive tokenization unchanged");
    }
  };
  check("preprocess.url_placeholder", url_placeholder);
  check("preprocess.number_placeholder", number_placeholder);
  if (url_placeholder == number_placeholder) {
    throw ConfigError("preprocess placeholders must differ");
  }
}

std::vector<std::string> PreprocessConfig::placeholders() const {
  return {std::string(kUserPlaceholder), url_placeholder, number_placeholder};
}

std::string preprocess_text(std::string_view raw, const PreprocessConfig& config) {
  const Placeholders placeholders{text::decode_utf8(kUserPlaceholder),
                                  text::decode_utf8(config.url_placeholder),
                                  text::decode_utf8(config.number_placeholder)};
  const std::u32string input = text::decode_utf8(raw);

  std::u32string joined;
  joined.reserve(input.size());
  std::u32string word;
  auto flush = [&] {
    if (word.empty()) return;
    mask_word(word, config, placeholders);
    if (!joined.empty()) joined.push_back(U' ');
    joined += word;
    word.clear();
  };
  for (char32_t c : input) {
    if (text::is_space(c)) {
      flush();
    } else {
      word.push_back(text::to_lower(c));
    }
  }
  flush();
  return text::encode_utf8(reduce_runs(joined, config.max_char_repeat));
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  const std::u32string input = text::decode_utf8(normalized);
  std::size_t i = 0;
  while (i < input.size()) {
    while (i < input.size() && text::is_space(input[i])) ++i;
    std::size_t j = i;
    while (j < input.size() && !text::is_space(input[j])) ++j;
    std::size_t begin = i;
    std::size_t end = j;
    while (begin < end && !is_token_char(input[begin])) ++begin;
    while (end > begin && !is_token_char(input[end - 1])) --end;
    if (end > begin) {
      tokens.push_back(
          text::encode_utf8(std::u32string_view(input).substr(begin, end - begin)));
    }
    i = j;
  }
  return tokens;
}

std::vector<std::string> preprocess_and_tokenize(std::string_view raw,
                                                 const PreprocessConfig& config) {
  return tokenize(preprocess_text(raw, config));
}

Corpus preprocess_corpus(const Corpus& corpus, const PreprocessConfig& config) {
  config.validate();
  return corpus.tokenized(
      [&](const std::string& raw) { return preprocess_and_tokenize(raw, config); });
}

}  // namespace proficiency
