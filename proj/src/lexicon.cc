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

#include "docrelate/lexicon.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "docrelate/error.h"
#include "docrelate/text_util.h"

namespace docrelate {

namespace {

std::string read_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kLexiconLoadError,
                "cannot open lexicon " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (!is_valid_utf8(text)) {
    throw Error(ErrorCode::kLexiconLoadError,
                "lexicon is not valid UTF-8: " + path.string());
  }
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
  return text;
}

}  // namespace

Gazetteer::Gazetteer(const std::vector<std::string>& entries) {
  for (const auto& e : entries) add(e);
}

void Gazetteer::add(std::string_view entry) {
  const std::string norm = normalize_term(entry);
  if (norm.empty()) return;
  max_tokens_ = std::max(max_tokens_, split_whitespace(norm).size());
  terms_.insert(norm);
}

Gazetteer Gazetteer::from_text(std::string_view text) {
  Gazetteer g;
  for (const std::string& line : split(text, '\n')) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    g.add(t);
  }
  return g;
}

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
  return from_text(read_lexicon_file(path));
}

bool Gazetteer::contains(std::string_view term) const {
  return terms_.count(normalize_term(term)) > 0;
}

void AliasTable::add(std::string_view canonical, std::string_view alias) {
  const std::string c = trim(canonical);
  const std::string a = trim(alias);
  if (c.empty() || a.empty()) return;
  if (to_canonical_.emplace(to_lower_ascii(c), c).second) {
    surface_terms_.push_back(c);
  }
  if (to_canonical_.emplace(to_lower_ascii(a), c).second) {
    surface_terms_.push_back(a);
  }
}

AliasTable AliasTable::from_text(std::string_view text) {
  AliasTable table;
  std::size_t line_no = 0;
  for (const std::string& line : split(text, '\n')) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos || trim(t.substr(0, eq)).empty()) {
      throw Error(ErrorCode::kLexiconLoadError,
                  "alias line " + std::to_string(line_no) +
                      " is not 'canonical = alias, ...'");
    }
    const std::string canonical = trim(t.substr(0, eq));
    table.add(canonical, canonical);
    for (const std::string& alias : split(t.substr(eq + 1), ',')) {
      table.add(canonical, alias);
    }
  }
  return table;
}

AliasTable AliasTable::load(const std::filesystem::path& path) {
  return from_text(read_lexicon_file(path));
}

std::string AliasTable::canonicalize(std::string_view term) const {
  const auto it = to_canonical_.find(to_lower_ascii(trim(term)));
  return it == to_canonical_.end() ? std::string(term) : it->second;
}

bool AliasTable::known(std::string_view term) const {
  return to_canonical_.count(to_lower_ascii(trim(term))) > 0;
}

std::vector<std::string> AliasTable::all_terms() const { return surface_terms_; }

Lexicons Lexicons::load_dir(const std::filesystem::path& dir) {
  Lexicons lex;
  if (std::filesystem::exists(dir / "cities.txt")) {
    lex.cities = Gazetteer::load(dir / "cities.txt");
  }
  if (std::filesystem::exists(dir / "countries.txt")) {
    lex.countries = Gazetteer::load(dir / "countries.txt");
  }
  if (std::filesystem::exists(dir / "aliases.txt")) {
    lex.aliases = AliasTable::load(dir / "aliases.txt");
  }
  return lex;
}

}  // namespace docrelate
