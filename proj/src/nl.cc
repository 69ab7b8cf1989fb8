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

#include "docrelate/nl.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "docrelate/error.h"
#include "docrelate/text_util.h"

namespace docrelate {

namespace {

constexpr auto kIcase = std::regex::ECMAScript | std::regex::icase;

std::regex make_regex(const std::string& pattern) { return std::regex(pattern, kIcase); }

bool search(const std::string& text, const std::string& pattern) {
  return std::regex_search(text, make_regex(pattern));
}

// Position of the first match, or npos.
std::size_t find_pattern(const std::string& text, const std::string& pattern) {
  std::smatch m;
  if (!std::regex_search(text, m, make_regex(pattern))) return std::string::npos;
  return static_cast<std::size_t>(m.position(0));
}

const char* const kDefaultPatterns = R"(# Book-keeping commands act on the session's recording.
bookkeeping	\b(clear|reset|discard|empty|wipe)\b.*\b(workflow|recording|history|sequence)\b
bookkeeping	^(?!.*\b(as|named|called)\s+\S).*\b(save|store)\b.*\b(workflow|sequence|recording)\b
bookkeeping	\b(apply|run|replay|execute)\b.*\bworkflow\b
bookkeeping	\b(list|show)\b.*\bworkflows\b
# Workflow requests create or name a workflow.
workflow	\b(create|start|begin|new)\b.*\b(workflow|sequence)\b
workflow	\b(save|store|name|call)\b.*\b(as|named|called)\s+\S
)";

struct Token {
  std::size_t begin = 0;  // core span, punctuation stripped
  std::size_t end = 0;
  std::string norm;
};

std::vector<Token> tokenize_utterance(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    std::size_t b = i;
    std::size_t e = j;
    while (b < e && std::ispunct(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(s[e - 1]))) --e;
    out.push_back(Token{b, e, to_lower_ascii(s.substr(b, e - b))});
    i = j;
  }
  return out;
}

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

bool boundary_before(std::string_view s, std::size_t i) {
  return i == 0 || std::isspace(static_cast<unsigned char>(s[i - 1])) || s[i - 1] == '(';
}

bool boundary_after(std::string_view s, std::size_t i) {
  return i >= s.size() || std::isspace(static_cast<unsigned char>(s[i])) ||
         std::ispunct(static_cast<unsigned char>(s[i]));
}

// Inner spans of quoted segments.
std::vector<Span> quoted_spans(std::string_view s) {
  std::vector<Span> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char q = s[i];
    if ((q == '\'' || q == '"') && boundary_before(s, i)) {
      std::size_t j = i + 1;
      while (j < s.size() && !(s[j] == q && boundary_after(s, j + 1))) ++j;
      if (j < s.size() && j > i + 1) {
        out.push_back(Span{i + 1, j});
        i = j + 1;
        continue;
      }
    }
    ++i;
  }
  return out;
}

std::string lower(std::string_view s) { return to_lower_ascii(s); }

const std::string kTempPhrase =
    R"(\b(previous|last|prior|earlier|preceding)\s+(result|results|output|answer|step|query)\b|\btemp(orary)?\s+table\b|\bthat\s+result\b|\bthose\s+results\b)";
const std::string kLineBelowPhrase =
    R"(\bline\s+((directly|just|immediately|right)\s+)?(below|under|underneath|beneath)\b)";
const std::string kRightPhrase =
    R"(\bright\b|\bnext\s+to\b|\bafter\b|\bfollow(s|ing)?\b|\bbeside\b)";
const std::string kLeftPhrase = R"(\bleft\b|\bbefore\b|\bpreceding\b|\bprior\s+to\b)";
const std::string kAbovePhrase = R"(\babove\b|\bover\b|\bon\s+top\s+of\b)";
const std::string kBelowPhrase = R"(\bbelow\b|\bunder\b|\bunderneath\b|\bbeneath\b)";
const std::string kContainPhrase =
    R"(\b(contain|contains|containing|has|having|with|include|includes|including)\b)";

// Text of the utterance with every placeholder masked so value text never
// triggers a phrase.
std::string phrase_text(const NormalizedUtterance& n) {
  std::string t = lower(n.text);
  const std::string ph = lower(kCondValPlaceholder);
  for (std::size_t at = t.find(ph); at != std::string::npos; at = t.find(ph, at + 1)) {
    std::fill(t.begin() + static_cast<std::ptrdiff_t>(at),
              t.begin() + static_cast<std::ptrdiff_t>(at + ph.size()), ' ');
    t[at] = '#';
  }
  return t;
}

std::optional<std::string> direction_table(const std::string& t) {
  const std::pair<const std::string*, const char*> options[] = {
      {&kRightPhrase, "rightof"},
      {&kLeftPhrase, "leftof"},
      {&kAbovePhrase, "above"},
      {&kBelowPhrase, "below"},
  };
  std::size_t best = std::string::npos;
  std::optional<std::string> table;
  for (const auto& [pattern, name] : options) {
    const std::size_t at = find_pattern(t, *pattern);
    if (at < best) {
      best = at;
      table = name;
    }
  }
  return table;
}

bool has_direction(const std::string& t) { return direction_table(t).has_value(); }

std::optional<std::string> column_of_type(const Relation& r, ColumnType type,
                                          std::initializer_list<std::string_view> preferred) {
  for (std::string_view p : preferred) {
    if (auto idx = r.column_index(p); idx && r.columns[*idx].type == type) return std::string(p);
  }
  for (const Column& c : r.columns) {
    if (c.type == type) return c.name;
  }
  return std::nullopt;
}

std::string substr_column(const std::string& table, const RelationDB* db) {
  if (db != nullptr && db->has_table(table)) {
    const Relation& r = db->get_table(table);
    if (auto c = column_of_type(r, ColumnType::kText, {"line", "text"})) return *c;
  }
  return table == "lines" || table == "words" ? "text" : "line";
}

const Relation* lookup(const RelationDB* db, const std::string& table) {
  if (db == nullptr || !db->has_table(table)) return nullptr;
  return &db->get_table(table);
}

}  // namespace

std::string_view intent_name(Intent intent) {
  switch (intent) {
    case Intent::kExtraction: return "Extraction";
    case Intent::kWorkflow: return "Workflow";
    case Intent::kBookKeeping: return "BookKeeping";
  }
  return "?";
}

Intent parse_intent(std::string_view name) {
  for (Intent i : {Intent::kExtraction, Intent::kWorkflow, Intent::kBookKeeping}) {
    if (equals_ci(intent_name(i), name)) return i;
  }
  throw Error(ErrorCode::kMalformedInput, "unknown intent '" + std::string(name) + "'");
}

std::string_view template_id_name(TemplateId t) {
  switch (t) {
    case TemplateId::kT1IdSubquery: return "T1_id_subquery";
    case TemplateId::kT2PrimaryEq: return "T2_primary_eq";
    case TemplateId::kT3SubstrFrom: return "T3_substr_from";
    case TemplateId::kT4SubstrBetween: return "T4_substr_between";
    case TemplateId::kT0Generic: return "T0_generic";
  }
  return "?";
}

TemplateId parse_template_id(std::string_view name) {
  for (TemplateId t : {TemplateId::kT1IdSubquery, TemplateId::kT2PrimaryEq,
                       TemplateId::kT3SubstrFrom, TemplateId::kT4SubstrBetween,
                       TemplateId::kT0Generic}) {
    if (template_id_name(t) == name) return t;
  }
  throw Error(ErrorCode::kMalformedInput, "unknown template '" + std::string(name) + "'");
}

std::size_t template_arity(TemplateId t) {
  switch (t) {
    case TemplateId::kT4SubstrBetween: return 2;
    case TemplateId::kT0Generic: return 0;
    default: return 1;
  }
}

const IntentPatterns& IntentPatterns::defaults() {
  static const IntentPatterns patterns = from_text(kDefaultPatterns);
  return patterns;
}

IntentPatterns IntentPatterns::from_text(std::string_view text) {
  IntentPatterns p;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kLexiconLoadError,
                  "pattern line " + std::to_string(line_no) + " has no tab");
    }
    const std::string kind = trim(line.substr(0, tab));
    const std::string pattern = trim(line.substr(tab + 1));
    std::regex re;
    try {
      re = make_regex(pattern);
    } catch (const std::regex_error& e) {
      throw Error(ErrorCode::kLexiconLoadError,
                  "pattern line " + std::to_string(line_no) + ": " + e.what());
    }
    if (kind == "bookkeeping") {
      p.bookkeeping.push_back(std::move(re));
    } else if (kind == "workflow") {
      p.workflow.push_back(std::move(re));
    } else {
      throw Error(ErrorCode::kLexiconLoadError,
                  "pattern line " + std::to_string(line_no) + ": unknown set '" + kind + "'");
    }
  }
  return p;
}

IntentPatterns IntentPatterns::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kLexiconLoadError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

Intent classify_intent(std::string_view utterance, const IntentPatterns& patterns) {
  const std::string text = collapse_whitespace(utterance);
  if (text.empty()) throw Error(ErrorCode::kEmptyUtterance, "empty utterance");
  for (const std::regex& re : patterns.bookkeeping) {
    if (std::regex_search(text, re)) return Intent::kBookKeeping;
  }
  for (const std::regex& re : patterns.workflow) {
    if (std::regex_search(text, re)) return Intent::kWorkflow;
  }
  return Intent::kExtraction;
}

bool is_command_word(std::string_view token) {
  static const std::set<std::string, std::less<>> words = {
      "a", "above", "after", "all", "an", "and", "any", "apply", "are", "at", "before",
      "below", "beneath", "beside", "between", "block", "blocks", "box", "boxes", "by",
      "can", "clear", "contain", "containing", "contains", "could", "data", "directly",
      "display", "document", "entry", "extract", "fetch", "field", "find", "following",
      "for", "from", "get", "give", "has", "have", "having", "i", "immediately",
      "in", "include", "including", "info", "information", "is", "it", "just", "key",
      "kindly", "left", "line", "lines", "list", "me", "next", "of", "on", "or", "over",
      "part", "please", "preceding", "previous", "prior", "result", "results", "retrieve",
      "return", "right", "save", "show", "string", "substr", "substring", "table", "text",
      "that", "the", "this", "to", "top", "towards", "type", "under", "underneath",
      "value", "values", "want", "what", "which", "with", "word", "words", "workflow",
      "you", "output", "last", "find", "tell", "its", "located", "lies", "sits", "one"};
  return words.count(token) > 0;
}

CondValueLexicon::CondValueLexicon(const std::vector<std::string>& terms) {
  for (const std::string& t : terms) add(t);
}

void CondValueLexicon::add(std::string_view term) {
  const std::string norm = normalize_term(term);
  if (norm.empty() || joined_.count(norm) > 0) return;
  std::vector<std::string> tokens = split(norm, ' ');
  if (std::all_of(tokens.begin(), tokens.end(), is_command_word)) return;
  max_tokens_ = std::max(max_tokens_, tokens.size());
  joined_.insert(norm);
  terms_.push_back(std::move(tokens));
}

CondValueLexicon CondValueLexicon::from_document(const RelationDB& db,
                                                 const AliasTable& aliases) {
  CondValueLexicon lex;
  auto add_column = [&](std::string_view table, std::string_view column) {
    if (!db.has_table(table)) return;
    const Relation& r = db.get_table(table);
    const auto idx = r.column_index(column);
    if (!idx) return;
    for (const Row& row : r.rows) lex.add(value_to_string(row[*idx]));
  };
  add_column("words", "text");
  add_column("lines", "text");
  add_column("key_value", "key");
  for (const std::string& t : aliases.all_terms()) lex.add(t);
  return lex;
}

NormalizedUtterance recognize_cond_values(std::string_view utterance,
                                          const CondValueLexicon& lexicon) {
  std::vector<Span> matches = quoted_spans(utterance);
  auto inside_quote = [&](const Token& t) {
    return std::any_of(matches.begin(), matches.end(), [&](const Span& q) {
      return t.begin < q.end + 1 && t.end + 1 > q.begin;
    });
  };

  const std::vector<Token> tokens = tokenize_utterance(utterance);
  struct Candidate {
    std::size_t first = 0;
    std::size_t count = 0;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string joined;
    for (std::size_t n = 1; n <= lexicon.max_tokens() && i + n <= tokens.size(); ++n) {
      const Token& t = tokens[i + n - 1];
      if (t.norm.empty() || inside_quote(t)) break;
      if (n > 1) joined += ' ';
      joined += t.norm;
      if (lexicon.contains(joined)) candidates.push_back({i, n});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     if (a.count != b.count) return a.count > b.count;
                     return a.first < b.first;
                   });
  std::vector<bool> taken(tokens.size(), false);
  for (const Candidate& c : candidates) {
    bool free = true;
    for (std::size_t k = c.first; k < c.first + c.count; ++k) free = free && !taken[k];
    if (!free) continue;
    for (std::size_t k = c.first; k < c.first + c.count; ++k) taken[k] = true;
    matches.push_back(Span{tokens[c.first].begin, tokens[c.first + c.count - 1].end});
  }
  std::sort(matches.begin(), matches.end(),
            [](const Span& a, const Span& b) { return a.begin < b.begin; });

  NormalizedUtterance out;
  std::size_t cursor = 0;
  for (const Span& m : matches) {
    out.text.append(utterance.substr(cursor, m.begin - cursor));
    out.text.append(kCondValPlaceholder);
    out.values.emplace_back(utterance.substr(m.begin, m.end - m.begin));
    cursor = m.end;
  }
  out.text.append(utterance.substr(cursor));
  return out;
}

std::string restore_utterance(const NormalizedUtterance& n) {
  std::string out;
  std::size_t cursor = 0;
  for (const std::string& v : n.values) {
    const std::size_t at = n.text.find(kCondValPlaceholder, cursor);
    if (at == std::string::npos) break;
    out.append(n.text, cursor, at - cursor);
    out.append(v);
    cursor = at + kCondValPlaceholder.size();
  }
  out.append(n.text, cursor);
  return out;
}

TemplateId map_template(const NormalizedUtterance& n) {
  const std::string t = phrase_text(n);
  if (search(t, R"(\bsub-?str(ing)?s?\b)")) {
    if (search(t, R"(\bbetween\b)")) return TemplateId::kT4SubstrBetween;
    if (search(t, kRightPhrase)) return TemplateId::kT3SubstrFrom;
  }
  if (n.values.size() >= 2 && search(t, R"(\bbetween\b)")) return TemplateId::kT4SubstrBetween;
  if (search(t, R"(\b(block|line|box)s?\b.*)" + kContainPhrase)) {
    return TemplateId::kT1IdSubquery;
  }
  if (!n.values.empty() &&
      (has_direction(t) || search(t, R"(\bvalue\s+of\b|\bkey\b)"))) {
    return TemplateId::kT2PrimaryEq;
  }
  if (!n.values.empty() ||
      search(t, R"(\b(words?|lines?|blocks?|boxes|box|keys?|types?|typed)\b)") ||
      search(t, kTempPhrase)) {
    return TemplateId::kT0Generic;
  }
  throw Error(ErrorCode::kUnmappableUtterance,
              "no template fits '" + restore_utterance(n) + "'");
}

std::string t1_entity(const NormalizedUtterance& n) {
  const std::string t = phrase_text(n);
  std::smatch m;
  static const std::regex re(R"(\b(block|line|box)s?\b)", kIcase);
  if (std::regex_search(t, m, re)) return to_lower_ascii(m[1].str());
  return "block";
}

std::string map_table(const NormalizedUtterance& n, TableContext context, TemplateId tid) {
  const std::string t = phrase_text(n);
  if (context == TableContext::kFromTemp || search(t, kTempPhrase)) {
    return std::string(kTempTable);
  }
  if (tid == TemplateId::kT3SubstrFrom || tid == TemplateId::kT4SubstrBetween) {
    return "lines";
  }
  if (tid == TemplateId::kT1IdSubquery) {
    const std::string entity = t1_entity(n);
    if (entity == "line") return "lines";
    if (entity == "box") return "box_lines";
    return "block_lines";
  }
  if (search(t, kLineBelowPhrase)) return "line_below_word";
  if (auto d = direction_table(t)) return *d;
  if (search(t, R"(\bblocks?\b)")) return "block_lines";
  if (search(t, R"(\b(box|boxes)\b)")) return "box_lines";
  if (search(t, R"(\blines?\b)")) return "lines";
  if (search(t, R"(\bvalue\s+of\b|\bkeys?\b|\bfields?\b)")) return "key_value";
  if (search(t, R"(\b(data\s+)?types?\b|\btyped\b)")) return "typed_words";
  if (search(t, R"(\bwords?\b)")) return "words";
  throw Error(ErrorCode::kUnknownRelationPhrase,
              "no table matches '" + restore_utterance(n) + "'");
}

std::string primary_column(std::string_view table, const RelationDB* db) {
  if (table == kTempTable) {
    if (db != nullptr && db->temp()) {
      if (auto c = column_of_type(*db->temp(), ColumnType::kText,
                                  {"anchor_text", "key", "line", "text", "word_text"})) {
        return *c;
      }
    }
    return "text";
  }
  if (table == "rightof" || table == "leftof" || table == "above" || table == "below") {
    return "anchor_text";
  }
  if (table == "key_value") return "key";
  if (table == "block_lines" || table == "box_lines") return "line";
  if (table == "line_below_word") return "word_text";
  return "text";
}

std::string ground_value(std::string_view value, const Relation& relation,
                         std::string_view column, const AliasTable* aliases) {
  const auto idx = relation.column_index(column);
  if (!idx || relation.columns[*idx].type != ColumnType::kText) return std::string(value);
  const Value exact{std::string(value)};
  for (const Row& r : relation.rows) {
    if (r[*idx] == exact) return std::string(value);
  }
  const std::string norm = normalize_term(value);
  for (const Row& r : relation.rows) {
    const std::string& cell = std::get<std::string>(r[*idx]);
    if (normalize_term(cell) == norm) return cell;
  }
  if (aliases != nullptr && aliases->known(value)) {
    const std::string canon = normalize_term(aliases->canonicalize(value));
    for (const Row& r : relation.rows) {
      const std::string& cell = std::get<std::string>(r[*idx]);
      const std::string cell_core = strip_punctuation(cell);
      if (aliases->known(cell_core) &&
          normalize_term(aliases->canonicalize(cell_core)) == canon) {
        return cell;
      }
    }
  }
  return std::string(value);
}

std::string ground_substring(std::string_view value, const Relation& relation,
                             std::string_view column) {
  const auto idx = relation.column_index(column);
  if (!idx || relation.columns[*idx].type != ColumnType::kText || value.empty()) {
    return std::string(value);
  }
  for (const Row& r : relation.rows) {
    if (std::get<std::string>(r[*idx]).find(value) != std::string::npos) {
      return std::string(value);
    }
  }
  const std::string needle = to_lower_ascii(value);
  for (const Row& r : relation.rows) {
    const std::string& cell = std::get<std::string>(r[*idx]);
    const std::size_t at = to_lower_ascii(cell).find(needle);
    if (at != std::string::npos) return cell.substr(at, value.size());
  }
  return std::string(value);
}

Query compose_sql(TemplateId t, const std::string& table,
                  const std::vector<std::string>& values, const ComposeOptions& options,
                  std::vector<std::string>* warnings) {
  const std::size_t arity = template_arity(t);
  if (values.size() < arity) {
    throw Error(ErrorCode::kSlotArityMismatch,
                std::string(template_id_name(t)) + " needs " + std::to_string(arity) +
                    " value(s), got " + std::to_string(values.size()));
  }
  const std::size_t used = t == TemplateId::kT0Generic ? std::min<std::size_t>(1, values.size())
                                                       : arity;
  if (values.size() > used && warnings != nullptr) {
    warnings->push_back("using the first " + std::to_string(used) + " of " +
                        std::to_string(values.size()) + " values for " +
                        std::string(template_id_name(t)));
  }

  const RelationDB* db = options.db;
  const Relation* target = lookup(db, table);
  Query q;
  q.table = table;
  switch (t) {
    case TemplateId::kT1IdSubquery: {
      std::string id = options.entity + "_id";
      if (target != nullptr && !target->column_index(id)) {
        for (const char* c : {"block_id", "line_id", "box_id"}) {
          if (target->column_index(c)) {
            id = c;
            break;
          }
        }
      }
      std::string v = values[0];
      if (const Relation* words = lookup(db, "words")) {
        v = ground_value(v, *words, "text", options.aliases);
      }
      Query inner;
      inner.select = std::vector<std::string>{id};
      inner.table = "words";
      inner.where = Condition{"text", Value{v}};
      q.select = Star{};
      q.where = Condition{id, std::make_shared<const Query>(std::move(inner))};
      break;
    }
    case TemplateId::kT2PrimaryEq:
    case TemplateId::kT0Generic: {
      q.select = Star{};
      if (used > 0) {
        const std::string col = primary_column(table, db);
        std::string v = values[0];
        if (target != nullptr) v = ground_value(v, *target, col, options.aliases);
        q.where = Condition{col, Value{v}};
      }
      break;
    }
    case TemplateId::kT3SubstrFrom:
    case TemplateId::kT4SubstrBetween: {
      SubstrCall call;
      call.column = substr_column(table, db);
      auto grounded = [&](const std::string& v) {
        return target != nullptr ? ground_substring(v, *target, call.column) : v;
      };
      call.start.value = grounded(values[0]);
      if (t == TemplateId::kT4SubstrBetween) {
        SubstrLength len;
        len.end.value = grounded(values[1]);
        len.minus = call.start.value;
        call.length = std::move(len);
      }
      q.select = std::move(call);
      break;
    }
  }
  return q;
}

NlTrace compile_utterance(std::string_view utterance, const RelationDB& db,
                          const CondValueLexicon& lexicon, const AliasTable& aliases,
                          TableContext context, std::string* failed_stage) {
  NlTrace trace;
  std::string stage = "recognize_cond_values";
  try {
    if (trim(utterance).empty()) throw Error(ErrorCode::kEmptyUtterance, "empty utterance");
    trace.normalized = recognize_cond_values(utterance, lexicon);
    stage = "map_template";
    trace.template_id = map_template(trace.normalized);
    stage = "map_table";
    trace.table = map_table(trace.normalized, context, trace.template_id);
    stage = "compose_sql";
    ComposeOptions options;
    options.entity = t1_entity(trace.normalized);
    options.db = &db;
    options.aliases = &aliases;
    trace.query = compose_sql(trace.template_id, trace.table, trace.normalized.values,
                              options, &trace.warnings);
  } catch (...) {
    if (failed_stage != nullptr) *failed_stage = stage;
    throw;
  }
  return trace;
}

std::vector<CorpusEntry> parse_corpus(std::string_view text) {
  std::vector<CorpusEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line[0] == '#') continue;
    std::vector<std::string> f = split(line, '\t');
    if (f.size() < 4 || f.size() > 5) {
      throw Error(ErrorCode::kMalformedInput,
                  "corpus line " + std::to_string(line_no) + " needs 4 or 5 fields");
    }
    CorpusEntry e;
    e.utterance = f[0];
    e.intent = parse_intent(f[1]);
    if (f[2] != "-") e.template_id = parse_template_id(f[2]);
    if (f[3] != "-") e.table = f[3];
    if (f.size() == 5 && !f[4].empty()) e.values = split(f[4], '|');
    out.push_back(std::move(e));
  }
  return out;
}

WorkflowCommand parse_workflow_command(std::string_view utterance, Intent intent) {
  const std::string text = collapse_whitespace(utterance);
  const std::string t = lower(text);
  WorkflowCommand cmd;
  static const std::regex named(R"(\b(?:as|named|called)\s+["']?([A-Za-z0-9][\w.-]*))", kIcase);
  std::smatch m;
  if (std::regex_search(text, m, named)) cmd.name = m[1].str();

  if (intent == Intent::kWorkflow) {
    cmd.kind = search(t, R"(\b(create|start|begin|new)\b)") ? WorkflowCommand::Kind::kCreate
                                                            : WorkflowCommand::Kind::kSave;
    return cmd;
  }
  if (search(t, R"(\b(clear|reset|discard|empty|wipe)\b)")) {
    cmd.kind = WorkflowCommand::Kind::kClear;
  } else if (search(t, R"(\b(apply|run|replay|execute)\b)")) {
    cmd.kind = WorkflowCommand::Kind::kApply;
    static const std::set<std::string> filler = {"on", "to", "for", "this", "the", "a",
                                                 "against", "workflow", "it", "that"};
    static const std::regex after_workflow(R"(\bworkflow\s+["']?([A-Za-z0-9][\w.-]*))",
                                           kIcase);
    static const std::regex after_verb(
        R"(\b(?:apply|run|replay|execute)\s+["']?([A-Za-z0-9][\w.-]*))", kIcase);
    for (const std::regex* re : {&after_workflow, &after_verb}) {
      if (!cmd.name && std::regex_search(text, m, *re) &&
          filler.count(to_lower_ascii(m[1].str())) == 0) {
        cmd.name = m[1].str();
      }
    }
  } else if (search(t, R"(\b(list|show)\b)")) {
    cmd.kind = WorkflowCommand::Kind::kList;
  } else {
    cmd.kind = WorkflowCommand::Kind::kSave;
  }
  return cmd;
}

}  // namespace docrelate
