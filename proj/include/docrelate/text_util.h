// Copyright 2026 The docrelate Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DOCRELATE_TEXT_UTIL_H_
#define DOCRELATE_TEXT_UTIL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace docrelate {

std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
std::string to_upper_ascii(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);
std::vector<std::string> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Collapses every run of whitespace (including newlines) into one space and
// trims the ends.
std::string collapse_whitespace(std::string_view s);

// Removes leading and trailing ASCII punctuation: "SWIFT:" -> "SWIFT".
std::string strip_punctuation(std::string_view s);

// Lowercased, punctuation-stripped, whitespace-collapsed form used whenever
// user text is compared against document text.
std::string normalize_term(std::string_view s);

bool starts_with_ci(std::string_view s, std::string_view prefix);
bool equals_ci(std::string_view a, std::string_view b);

// Byte offsets of every UTF-8 code point start, plus a final entry equal to
// s.size(). Invalid bytes count as one code point each.
std::vector<std::size_t> utf8_offsets(std::string_view s);

// Backslash escaping for tab/newline/backslash so a cell fits in one TSV
// field; unescape_field is its inverse.
std::string escape_field(std::string_view s);
std::string unescape_field(std::string_view s);

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);

bool is_valid_utf8(std::string_view s);

}  // namespace docrelate

#endif  // DOCRELATE_TEXT_UTIL_H_
