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

#ifndef PROFICIENCY_COMMON_H_
#define PROFICIENCY_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace proficiency {

inline constexpr std::string_view kVersion = "0.1.0";

// Base for every error raised by the library. The subclasses map onto the
// command-line exit codes: configuration (1), data (2), invariant (3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

// Fixed-point text with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

// Parses a full string as a double; throws DataError on trailing garbage.
double parse_double(std::string_view text);

// 64-bit FNV-1a. Stable across platforms; used for seeds and config hashes.
std::uint64_t fnv1a64(std::string_view data);

std::string hex64(std::uint64_t value);

// Quotes a CSV field when it contains a comma, quote or line break.
std::string csv_field(std::string_view value);

enum class LogLevel { kQuiet = 0, kWarning = 1, kInfo = 2 };

void set_log_level(LogLevel level);
LogLevel log_level();
void log_warning(std::string_view message);
void log_info(std::string_view message);

}  // namespace proficiency

#endif  // PROFICIENCY_COMMON_H_
