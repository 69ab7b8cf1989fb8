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

#include "docrelate/query.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "docrelate/error.h"
#include "docrelate/text_util.h"

namespace docrelate {

bool operator==(const Condition& a, const Condition& b) {
  if (a.column != b.column || a.rhs.index() != b.rhs.index()) return false;
  if (!a.is_subquery()) return a.literal() == b.literal();
  return a.subquery() == b.subquery();
}

bool operator==(const Query& a, const Query& b) {
  return a.select == b.select && a.table == b.table && a.where == b.where;
}

namespace {

enum class TokenKind { kIdent, kString, kInteger, kPunct, kEnd };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;  // identifier, decoded string, digits, or the punct char
  std::size_t offset = 0;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::kIdent: return "'" + t.text + "'";
    case TokenKind::kString: return "string " + quote_string(t.text);
    case TokenKind::kInteger: return "integer " + t.text;
    case TokenKind::kPunct: return "'" + t.text + "'";
    case TokenKind::kEnd: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token tok;
    tok.offset = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
        ++j;
      }
      tok.kind = TokenKind::kIdent;
      tok.text = std::string(text.substr(i, j - i));
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.kind = TokenKind::kInteger;
      tok.text = std::string(text.substr(i, j - i));
      i = j;
    } else if (c == '"') {
      std::string value;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < text.size()) {
        if (text[j] == '\\' && j + 1 < text.size() &&
            (text[j + 1] == '"' || text[j + 1] == '\\')) {
          value += text[j + 1];
          j += 2;
        } else if (text[j] == '"') {
          closed = true;
          ++j;
          break;
        } else {
          value += text[j++];
        }
      }
      if (!closed) {
        throw ParseError(tokens.size() + 1, i, {"closing '\"'"}, "unterminated string");
      }
      tok.kind = TokenKind::kString;
      tok.text = std::move(value);
      i = j;
    } else if (std::string_view("*,()=+-;").find(c) != std::string_view::npos) {
      tok.kind = TokenKind::kPunct;
      tok.text = std::string(1, c);
      ++i;
    } else {
      throw ParseError(tokens.size() + 1, i, {"a token"},
                       "unexpected character '" + std::string(1, c) + "'");
    }
    tokens.push_back(std::move(tok));
  }
  Token end;
  end.offset = text.size();
  tokens.push_back(end);
  return tokens;
}

bool is_reserved(std::string_view word) {
  const std::string u = to_upper_ascii(word);
  return u == "SELECT" || u == "FROM" || u == "WHERE" || u == "SUBSTR" || u == "POS";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Query parse() {
    Query q = parse_query();
    accept_punct(";");
    if (peek().kind != TokenKind::kEnd) fail({"end of input"});
    return q;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& peek_at(std::size_t ahead) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw ParseError(pos_ + 1, peek().offset, std::move(expected), describe(peek()));
  }

  bool is_keyword(const Token& t, std::string_view kw) const {
    return t.kind == TokenKind::kIdent && equals_ci(t.text, kw);
  }

  void expect_keyword(std::string_view kw) {
    if (!is_keyword(peek(), kw)) fail({std::string(kw)});
    ++pos_;
  }

  bool accept_punct(std::string_view p) {
    if (peek().kind == TokenKind::kPunct && peek().text == p) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail({"'" + std::string(p) + "'"});
  }

  std::string expect_ident() {
    if (peek().kind != TokenKind::kIdent || is_reserved(peek().text)) fail({"identifier"});
    return tokens_[pos_++].text;
  }

  std::string expect_string() {
    if (peek().kind != TokenKind::kString) fail({"string"});
    return tokens_[pos_++].text;
  }

  std::int64_t expect_integer() {
    if (peek().kind != TokenKind::kInteger) fail({"integer"});
    std::int64_t v = 0;
    const std::string& digits = peek().text;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc()) fail({"integer within 64 bits"});
    ++pos_;
    return v;
  }

  Query parse_query() {
    Query q;
    expect_keyword("SELECT");
    if (accept_punct("*")) {
      q.select = Star{};
    } else if (is_keyword(peek(), "SUBSTR")) {
      q.select = parse_substr();
    } else if (peek().kind == TokenKind::kIdent && !is_reserved(peek().text)) {
      std::vector<std::string> cols{expect_ident()};
      while (accept_punct(",")) cols.push_back(expect_ident());
      q.select = std::move(cols);
    } else {
      fail({"'*'", "identifier", "SUBSTR"});
    }
    expect_keyword("FROM");
    q.table = expect_ident();
    if (is_keyword(peek(), "WHERE")) {
      ++pos_;
      q.where = parse_condition();
    }
    return q;
  }

  SubstrCall parse_substr() {
    expect_keyword("SUBSTR");
    expect_punct("(");
    SubstrCall call;
    call.column = expect_ident();
    expect_punct(",");
    call.start = parse_posexpr();
    if (accept_punct(",")) {
      SubstrLength len;
      const std::string first = parse_pos_call();
      len.end.value = first;
      if (peek().kind == TokenKind::kPunct && peek().text == "-" &&
          is_keyword(peek_at(1), "POS")) {
        ++pos_;
        len.minus = parse_pos_call();
      } else {
        len.end.offset = parse_offset();
      }
      call.length = std::move(len);
    }
    expect_punct(")");
    return call;
  }

  std::string parse_pos_call() {
    expect_keyword("POS");
    expect_punct("(");
    std::string v = expect_string();
    expect_punct(")");
    return v;
  }

  std::int64_t parse_offset() {
    if (accept_punct("+")) return expect_integer();
    if (accept_punct("-")) return -expect_integer();
    return 0;
  }

  PosExpr parse_posexpr() {
    PosExpr p;
    p.value = parse_pos_call();
    p.offset = parse_offset();
    return p;
  }

  Condition parse_condition() {
    Condition c;
    c.column = expect_ident();
    expect_punct("=");
    if (accept_punct("(")) {
      c.rhs = std::make_shared<const Query>(parse_query());
      expect_punct(")");
    } else if (peek().kind == TokenKind::kString) {
      c.rhs = Value{expect_string()};
    } else if (peek().kind == TokenKind::kInteger) {
      c.rhs = Value{expect_integer()};
    } else if (accept_punct("-")) {
      c.rhs = Value{-expect_integer()};
    } else {
      fail({"string", "integer", "'('"});
    }
    return c;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string pos_to_sql(const std::string& value) { return "pos(" + quote_string(value) + ")"; }

std::string offset_to_sql(std::int64_t offset) {
  if (offset == 0) return "";
  return offset > 0 ? "+" + std::to_string(offset) : "-" + std::to_string(-offset);
}

[[noreturn]] void unknown_column(const Relation& r, std::string_view column) {
  throw Error(ErrorCode::kUnknownColumn,
              "unknown column '" + std::string(column) + "' in " + r.name);
}

std::size_t require_column(const Relation& r, std::string_view column) {
  const auto idx = r.column_index(column);
  if (!idx) unknown_column(r, column);
  return *idx;
}

}  // namespace

std::string quote_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

Query parse_sql(std::string_view text) { return Parser(tokenize(text)).parse(); }

std::string to_sql(const Query& q) {
  std::string out = "SELECT ";
  if (std::holds_alternative<Star>(q.select)) {
    out += "*";
  } else if (const auto* cols = std::get_if<std::vector<std::string>>(&q.select)) {
    out += join(*cols, ", ");
  } else {
    const SubstrCall& s = std::get<SubstrCall>(q.select);
    out += "SUBSTR( " + s.column + ", " + pos_to_sql(s.start.value) +
           offset_to_sql(s.start.offset);
    if (s.length) {
      out += ", " + pos_to_sql(s.length->end.value);
      out += s.length->minus ? "-" + pos_to_sql(*s.length->minus)
                             : offset_to_sql(s.length->end.offset);
    }
    out += " )";
  }
  out += " FROM " + q.table;
  if (q.where) {
    out += " WHERE " + q.where->column + "=";
    if (q.where->is_subquery()) {
      out += "(" + to_sql(q.where->subquery()) + ")";
    } else if (is_text(q.where->literal())) {
      out += quote_string(std::get<std::string>(q.where->literal()));
    } else {
      out += std::to_string(std::get<std::int64_t>(q.where->literal()));
    }
  }
  return out;
}

std::optional<std::int64_t> pos_of(std::string_view haystack, std::string_view needle) {
  const std::size_t at = haystack.find(needle);
  if (at == std::string_view::npos) return std::nullopt;
  const auto before = utf8_offsets(haystack.substr(0, at)).size() - 1;
  const auto len = utf8_offsets(needle).size() - 1;
  return static_cast<std::int64_t>(before + len + 1);
}

std::string substr_chars(std::string_view s, std::int64_t start,
                         std::optional<std::int64_t> length) {
  const std::vector<std::size_t> offs = utf8_offsets(s);
  const auto n = static_cast<std::int64_t>(offs.size() - 1);
  if (start < 1) {
    if (length) *length -= 1 - start;
    start = 1;
  }
  if (length && *length <= 0) return "";
  if (start > n) return "";
  const std::int64_t first = start - 1;
  const std::int64_t last = length ? std::min(n, first + *length) : n;
  return std::string(s.substr(offs[static_cast<std::size_t>(first)],
                              offs[static_cast<std::size_t>(last)] -
                                  offs[static_cast<std::size_t>(first)]));
}

TracedResult evaluate_traced(const Query& q, const RelationDB& db) {
  const Relation& source = db.get_table(q.table);

  // Resolve the filter first so schema errors surface before any row work.
  std::vector<std::size_t> kept;
  if (q.where) {
    const std::size_t col = require_column(source, q.where->column);
    const ColumnType col_type = source.columns[col].type;
    if (q.where->is_subquery()) {
      const Relation inner = evaluate(q.where->subquery(), db);
      if (inner.columns.size() != 1) {
        throw Error(ErrorCode::kNonScalarSubquery,
                    "subquery must yield one column, got " +
                        std::to_string(inner.columns.size()));
      }
      if (inner.columns[0].type != col_type) {
        throw Error(ErrorCode::kTypeMismatch,
                    "subquery column type does not match " + q.where->column);
      }
      std::set<Value> values;
      for (const Row& r : inner.rows) values.insert(r[0]);
      for (std::size_t i = 0; i < source.rows.size(); ++i) {
        if (values.count(source.rows[i][col]) > 0) kept.push_back(i);
      }
    } else {
      const Value& lit = q.where->literal();
      if (is_text(lit) != (col_type == ColumnType::kText)) {
        throw Error(ErrorCode::kTypeMismatch,
                    "cannot compare " + std::string(column_type_name(col_type)) +
                        " column " + q.where->column + " with " +
                        (is_text(lit) ? "a string" : "an integer"));
      }
      for (std::size_t i = 0; i < source.rows.size(); ++i) {
        if (source.rows[i][col] == lit) kept.push_back(i);
      }
    }
  } else {
    kept.resize(source.rows.size());
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;
  }

  TracedResult out;
  out.relation.name = "result";
  if (std::holds_alternative<Star>(q.select)) {
    out.relation.columns = source.columns;
    for (std::size_t i : kept) out.relation.rows.push_back(source.rows[i]);
    out.source_rows = std::move(kept);
  } else if (const auto* cols = std::get_if<std::vector<std::string>>(&q.select)) {
    std::vector<std::size_t> idx;
    for (const std::string& c : *cols) {
      idx.push_back(require_column(source, c));
      out.relation.columns.push_back(source.columns[idx.back()]);
    }
    for (std::size_t i : kept) {
      Row row;
      for (std::size_t c : idx) row.push_back(source.rows[i][c]);
      out.relation.rows.push_back(std::move(row));
    }
    out.source_rows = std::move(kept);
  } else {
    const SubstrCall& s = std::get<SubstrCall>(q.select);
    const std::size_t col = require_column(source, s.column);
    if (source.columns[col].type != ColumnType::kText) {
      throw Error(ErrorCode::kTypeMismatch, "SUBSTR needs a text column, " + s.column +
                                                " is integer");
    }
    out.relation.columns = {{"result", ColumnType::kText}};
    for (std::size_t i : kept) {
      const std::string& text = std::get<std::string>(source.rows[i][col]);
      const auto start = pos_of(text, s.start.value);
      if (!start) continue;
      std::optional<std::int64_t> length;
      if (s.length) {
        const auto end = pos_of(text, s.length->end.value);
        if (!end) continue;
        if (s.length->minus) {
          const auto minus = pos_of(text, *s.length->minus);
          if (!minus) continue;
          length = *end - *minus;
        } else {
          length = *end + s.length->end.offset;
        }
      }
      out.relation.rows.push_back(
          Row{trim(substr_chars(text, *start + s.start.offset, length))});
      out.source_rows.push_back(i);
    }
  }
  return out;
}

Relation evaluate(const Query& query, const RelationDB& db) {
  return evaluate_traced(query, db).relation;
}

Relation execute_and_stage(std::string_view text, RelationDB& db) {
  Relation result = evaluate(parse_sql(text), db);
  db.stage_temp(result);
  return result;
}

}  // namespace docrelate
