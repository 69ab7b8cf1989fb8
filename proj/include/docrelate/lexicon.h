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

#ifndef DOCRELATE_LEXICON_H_
#define DOCRELATE_LEXICON_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace docrelate {

// Case-insensitive term list, one entry per line. Entries may span several
// words ("new york").
class Gazetteer {
 public:
  Gazetteer() = default;
  explicit Gazetteer(const std::vector<std::string>& entries);

  static Gazetteer from_text(std::string_view text);
  // Throws LexiconLoadError when the file is unreadable or not UTF-8.
  static Gazetteer load(const std::filesystem::path& path);

  bool contains(std::string_view term) const;
  std::size_t max_tokens() const { return max_tokens_; }
  std::size_t size() const { return terms_.size(); }
  const std::set<std::string>& terms() const { return terms_; }

 private:
  void add(std::string_view entry);

  std::set<std::string> terms_;
  std::size_t max_tokens_ = 0;
};

// Lines of `canonical = alias1, alias2, ...`; '#' starts a comment.
class AliasTable {
 public:
  AliasTable() = default;

  static AliasTable from_text(std::string_view text);
  static AliasTable load(const std::filesystem::path& path);

  void add(std::string_view canonical, std::string_view alias);
  // Canonical form for a known alias (or canonical term); input otherwise.
  std::string canonicalize(std::string_view term) const;
  bool known(std::string_view term) const;
  // Every alias and canonical term, as written in the source file.
  std::vector<std::string> all_terms() const;

 private:
  std::map<std::string, std::string> to_canonical_;  // lowercased key
  std::vector<std::string> surface_terms_;
};

struct Lexicons {
  Gazetteer cities;
  Gazetteer countries;
  AliasTable aliases;

  // Loads cities.txt, countries.txt and aliases.txt from dir; each missing
  // file leaves its lexicon empty.
  static Lexicons load_dir(const std::filesystem::path& dir);
};

inline std::string canonicalize_alias(std::string_view term,
                                      const AliasTable& table) {
  return table.canonicalize(term);
}

}  // namespace docrelate

#endif  // DOCRELATE_LEXICON_H_
