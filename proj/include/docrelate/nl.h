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

#ifndef DOCRELATE_NL_H_
#define DOCRELATE_NL_H_

#include <filesystem>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "docrelate/lexicon.h"
#include "docrelate/query.h"
#include "docrelate/relation_store.h"

namespace docrelate {

inline constexpr std::string_view kCondValPlaceholder = "<COND_VAL>";

enum class Intent { kExtraction, kWorkflow, kBookKeeping };
std::string_view intent_name(Intent intent);
Intent parse_intent(std::string_view name);

enum class TemplateId {
  kT1IdSubquery,
  kT2PrimaryEq,
  kT3SubstrFrom,
  kT4SubstrBetween,
  kT0Generic,
};
std::string_view template_id_name(TemplateId t);
TemplateId parse_template_id(std::string_view name);
// Number of values the template consumes.
std::size_t template_arity(TemplateId t);

// Regex sets driving classify_intent. Matching is case-insensitive.
struct IntentPatterns {
  std::vector<std::regex> bookkeeping;
  std::vector<std::regex> workflow;

  static const IntentPatterns& defaults();
  // Lines of `bookkeeping<TAB>regex` or `workflow<TAB>regex`; '#' comments.
  static IntentPatterns from_text(std::string_view text);
  static IntentPatterns load(const std::filesystem::path& path);
};

// Book-keeping first, then workflow, else extraction. Throws EmptyUtterance.
Intent classify_intent(std::string_view utterance,
                       const IntentPatterns& patterns = IntentPatterns::defaults());

// Terms the recognizer may lift out of an utterance, stored as normalized
// token sequences.
class CondValueLexicon {
 public:
  CondValueLexicon() = default;
  explicit CondValueLexicon(const std::vector<std::string>& terms);

  // Document words, line texts, key_value keys and every alias term. Terms
  // made only of command vocabulary ("the", "word", "right", ...) are left out.
  static CondValueLexicon from_document(const RelationDB& db, const AliasTable& aliases);

  void add(std::string_view term);
  const std::vector<std::vector<std::string>>& terms() const { return terms_; }
  std::size_t max_tokens() const { return max_tokens_; }
  // `normalized` is a space-joined token sequence.
  bool contains(const std::string& normalized) const { return joined_.count(normalized) > 0; }

 private:
  std::vector<std::vector<std::string>> terms_;
  std::set<std::string> joined_;
  std::size_t max_tokens_ = 0;
};

bool is_command_word(std::string_view normalized_token);

struct NormalizedUtterance {
  std::string text;
  std::vector<std::string> values;
  friend bool operator==(const NormalizedUtterance&, const NormalizedUtterance&) = default;
};

// Quoted spans ('...' or "...") always match and their quotes stay in the
// text. Lexicon terms match whole tokens, case-insensitively, ignoring
// punctuation around the tokens; longest match wins, then leftmost.
NormalizedUtterance recognize_cond_values(std::string_view utterance,
                                          const CondValueLexicon& lexicon);

// Inverse of recognize_cond_values.
std::string restore_utterance(const NormalizedUtterance& n);

// Throws UnmappableUtterance when no pattern fires and no value was found.
TemplateId map_template(const NormalizedUtterance& n);

enum class TableContext { kFresh, kFromTemp };

// Throws UnknownRelationPhrase.
std::string map_table(const NormalizedUtterance& n, TableContext context, TemplateId t);

// Column compared against the value in T2 and T0 queries.
std::string primary_column(std::string_view table, const RelationDB* db = nullptr);

struct ComposeOptions {
  // Entity named in a T1 utterance: "block", "line" or "box".
  std::string entity = "block";
  // When set, values are grounded against this document and TEMP's columns
  // decide which column SUBSTR reads.
  const RelationDB* db = nullptr;
  const AliasTable* aliases = nullptr;
};

// Throws SlotArityMismatch when too few values are given. Extra values are
// ignored and reported through `warnings` when it is non-null.
Query compose_sql(TemplateId t, const std::string& table,
                  const std::vector<std::string>& values,
                  const ComposeOptions& options = {},
                  std::vector<std::string>* warnings = nullptr);

// Cell of `column` in `relation` that `value` refers to: an exact match,
// else a case/punctuation-insensitive match, else an alias match. Returns
// the value unchanged when nothing matches.
std::string ground_value(std::string_view value, const Relation& relation,
                         std::string_view column, const AliasTable* aliases = nullptr);

// Like ground_value, but for substrings: returns the spelling of the first
// case-insensitive occurrence of `value` inside any cell of `column`.
std::string ground_substring(std::string_view value, const Relation& relation,
                             std::string_view column);

// "block", "line" or "box" for T1 utterances; "block" when none is named.
std::string t1_entity(const NormalizedUtterance& n);

struct NlTrace {
  Intent intent = Intent::kExtraction;
  NormalizedUtterance normalized;
  TemplateId template_id = TemplateId::kT0Generic;
  std::string table;
  Query query;
  std::vector<std::string> warnings;
};

// Runs recognition, template mapping, table mapping and composition. The
// stage name of a failure is reported through `failed_stage`.
NlTrace compile_utterance(std::string_view utterance, const RelationDB& db,
                          const CondValueLexicon& lexicon, const AliasTable& aliases,
                          TableContext context,
                          std::string* failed_stage = nullptr);

// One annotated corpus line.
struct CorpusEntry {
  std::string utterance;
  Intent intent = Intent::kExtraction;
  std::optional<TemplateId> template_id;  // "-" for non-extraction lines
  std::optional<std::string> table;
  std::vector<std::string> values;
};

// utterance<TAB>intent<TAB>template<TAB>table<TAB>values, values joined by
// '|'. '#' lines and blank lines are skipped.
std::vector<CorpusEntry> parse_corpus(std::string_view text);

// Book-keeping and workflow commands understood by the session.
struct WorkflowCommand {
  enum class Kind { kClear, kSave, kApply, kList, kCreate } kind = Kind::kClear;
  std::optional<std::string> name;
};

WorkflowCommand parse_workflow_command(std::string_view utterance, Intent intent);

}  // namespace docrelate

#endif  // DOCRELATE_NL_H_
