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

#include "docrelate/relation_store.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unordered_map>

#include "docrelate/error.h"
#include "docrelate/text_util.h"

namespace docrelate {

namespace {

constexpr ColumnType T = ColumnType::kText;
constexpr ColumnType I = ColumnType::kInteger;

const std::vector<Column> kAdjacencySchema = {
    {"anchor_id", I}, {"anchor_text", T}, {"neighbor_id", I}, {"neighbor_text", T}};

const std::vector<std::pair<std::string, std::vector<Column>>>& schemas() {
  static const std::vector<std::pair<std::string, std::vector<Column>>> s = {
      {"words",
       {{"word_id", I}, {"text", T}, {"x0", I}, {"y0", I}, {"x1", I}, {"y1", I},
        {"conf", I}, {"line_id", I}, {"block_id", I}, {"box_id", I}}},
      {"lines",
       {{"line_id", I}, {"text", T}, {"x0", I}, {"y0", I}, {"x1", I}, {"y1", I},
        {"block_id", I}, {"box_id", I}}},
      {"blocks",
       {{"block_id", I}, {"x0", I}, {"y0", I}, {"x1", I}, {"y1", I}, {"line_count", I}}},
      {"boxes", {{"box_id", I}, {"x0", I}, {"y0", I}, {"x1", I}, {"y1", I}}},
      {"block_lines",
       {{"block_id", I}, {"line_id", I}, {"line", T}, {"x0", I}, {"y0", I},
        {"x1", I}, {"y1", I}}},
      {"box_lines",
       {{"box_id", I}, {"line_id", I}, {"line", T}, {"x0", I}, {"y0", I},
        {"x1", I}, {"y1", I}}},
      {"rightof", kAdjacencySchema},
      {"leftof", kAdjacencySchema},
      {"above", kAdjacencySchema},
      {"below", kAdjacencySchema},
      {"line_below_word",
       {{"word_id", I}, {"word_text", T}, {"below_line_id", I},
        {"below_line_text", T}, {"block_id", I}}},
      {"key_value", {{"key", T}, {"value", T}, {"line_id", I}}},
      {"typed_words", {{"word_id", I}, {"text", T}, {"data_type", T}}},
  };
  return s;
}

std::int64_t id_or_null(const std::optional<int>& id) { return id ? *id : -1; }

Relation make_relation(const std::string& name) {
  return Relation{name, base_relation_schema(name), {}};
}

void append_bbox(Row& row, const BBox& b) {
  row.emplace_back(std::int64_t{b.x0});
  row.emplace_back(std::int64_t{b.y0});
  row.emplace_back(std::int64_t{b.x1});
  row.emplace_back(std::int64_t{b.y1});
}

void sort_by_first_id(Relation& r) {
  std::optional<std::size_t> key;
  for (std::size_t i = 0; i < r.columns.size(); ++i) {
    if (r.columns[i].type == ColumnType::kInteger) {
      key = i;
      break;
    }
  }
  if (!key) return;
  std::stable_sort(r.rows.begin(), r.rows.end(), [k = *key](const Row& a, const Row& b) {
    return std::get<std::int64_t>(a[k]) < std::get<std::int64_t>(b[k]);
  });
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << data;
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

}  // namespace

const std::vector<std::string>& base_relation_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, cols] : schemas()) n.push_back(name);
    return n;
  }();
  return names;
}

const std::vector<Column>& base_relation_schema(std::string_view name) {
  for (const auto& [n, cols] : schemas()) {
    if (n == name) return cols;
  }
  throw Error(ErrorCode::kUnknownTable, "unknown table: " + std::string(name));
}

RelationDB::RelationDB(std::string doc_id, PageSize page_size,
                       std::map<std::string, Relation, std::less<>> base) {
  for (const std::string& name : base_relation_names()) {
    const auto it = base.find(name);
    if (it == base.end()) {
      base.emplace(name, make_relation(name));
    } else if (it->second.columns != base_relation_schema(name)) {
      throw Error(ErrorCode::kSchemaViolation, "column layout mismatch for " + name);
    }
  }
  for (const auto& [name, rel] : base) {
    if (name == kTempTable) {
      throw Error(ErrorCode::kSchemaViolation, "TEMP cannot be a base relation");
    }
    rel.validate();
  }
  base_ = std::make_shared<const Base>(
      Base{std::move(doc_id), page_size, std::move(base)});
}

const Relation& RelationDB::get_table(std::string_view name) const {
  if (name == kTempTable) {
    if (!temp_) throw Error(ErrorCode::kUnknownTable, "no TEMP result has been staged");
    return *temp_;
  }
  const auto it = base_->relations.find(name);
  if (it == base_->relations.end()) {
    throw Error(ErrorCode::kUnknownTable, "unknown table: " + std::string(name));
  }
  return it->second;
}

bool RelationDB::has_table(std::string_view name) const {
  if (name == kTempTable) return temp_.has_value();
  return base_->relations.find(name) != base_->relations.end();
}

void RelationDB::stage_temp(Relation r) {
  r.name = std::string(kTempTable);
  temp_ = std::move(r);
}

RelationDB populate(const DocumentEntities& e) {
  std::map<std::string, Relation, std::less<>> rels;
  for (const std::string& name : base_relation_names()) {
    rels.emplace(name, make_relation(name));
  }

  std::unordered_map<int, const Line*> line_by_id;
  for (const Line& l : e.lines) line_by_id[l.line_id] = &l;
  std::unordered_map<int, std::size_t> word_index;
  for (std::size_t i = 0; i < e.words.size(); ++i) word_index[e.words[i].word_id] = i;

  Relation& words = rels.at("words");
  for (std::size_t i = 0; i < e.words.size(); ++i) {
    const Word& w = e.words[i];
    const int line_id = i < e.word_line.size() ? e.word_line[i] : -1;
    std::optional<int> block_id;
    if (const auto it = line_by_id.find(line_id); it != line_by_id.end()) {
      block_id = it->second->block_id;
    }
    Row row{std::int64_t{w.word_id}, w.text};
    append_bbox(row, w.bbox);
    row.emplace_back(static_cast<std::int64_t>(std::lround(w.confidence * 100.0)));
    row.emplace_back(std::int64_t{line_id});
    row.emplace_back(id_or_null(block_id));
    row.emplace_back(id_or_null(i < e.word_box.size() ? e.word_box[i] : std::nullopt));
    words.rows.push_back(std::move(row));
  }

  Relation& lines = rels.at("lines");
  for (const Line& l : e.lines) {
    Row row{std::int64_t{l.line_id}, l.text};
    append_bbox(row, l.bbox);
    row.emplace_back(id_or_null(l.block_id));
    row.emplace_back(id_or_null(l.box_id));
    lines.rows.push_back(std::move(row));
  }

  Relation& blocks = rels.at("blocks");
  Relation& block_lines = rels.at("block_lines");
  for (const TextBlock& b : e.blocks) {
    Row row{std::int64_t{b.block_id}};
    append_bbox(row, b.bbox);
    row.emplace_back(static_cast<std::int64_t>(b.line_ids.size()));
    blocks.rows.push_back(std::move(row));
    for (int lid : b.line_ids) {
      const Line& l = *line_by_id.at(lid);
      Row lr{std::int64_t{b.block_id}, std::int64_t{l.line_id}, l.text};
      append_bbox(lr, l.bbox);
      block_lines.rows.push_back(std::move(lr));
    }
  }

  Relation& boxes = rels.at("boxes");
  for (const BoxRegion& b : e.boxes) {
    Row row{std::int64_t{b.box_id}};
    append_bbox(row, b.bbox);
    boxes.rows.push_back(std::move(row));
  }
  Relation& box_lines = rels.at("box_lines");
  for (const BoxRegion& b : e.boxes) {
    for (const Line& l : e.lines) {
      if (l.box_id != b.box_id) continue;
      Row lr{std::int64_t{b.box_id}, std::int64_t{l.line_id}, l.text};
      append_bbox(lr, l.bbox);
      box_lines.rows.push_back(std::move(lr));
    }
  }

  for (const AdjacencyRow& a : e.adjacency) {
    rels.at(std::string(direction_table(a.relation)))
        .rows.push_back(Row{std::int64_t{a.anchor_word_id}, a.anchor_text,
                            id_or_null(a.neighbor_word_id), a.neighbor_text});
  }

  Relation& below = rels.at("line_below_word");
  for (const LineBelowRow& r : e.line_below) {
    below.rows.push_back(Row{std::int64_t{r.word_id}, r.word_text,
                             id_or_null(r.below_line_id), r.below_line_text,
                             std::int64_t{r.block_id}});
  }

  Relation& kv = rels.at("key_value");
  for (const KeyValueRow& r : e.key_values) {
    kv.rows.push_back(Row{r.key_text, r.value_text, std::int64_t{r.line_id}});
  }

  Relation& typed = rels.at("typed_words");
  for (const TypedWordRow& r : e.typed_words) {
    const auto it = word_index.find(r.word_id);
    if (it == word_index.end()) {
      throw Error(ErrorCode::kSchemaViolation,
                  "typed word refers to unknown word " + std::to_string(r.word_id));
    }
    typed.rows.push_back(Row{std::int64_t{r.word_id}, e.words[it->second].text,
                             std::string(data_type_name(r.data_type))});
  }

  for (auto& [name, rel] : rels) sort_by_first_id(rel);
  return RelationDB(e.doc_id, e.page_size, std::move(rels));
}

std::string relation_to_tsv(const Relation& r, bool header) {
  std::string out;
  if (header) {
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
      if (c > 0) out += '\t';
      out += r.columns[c].name;
    }
    out += '\n';
  }
  for (const Row& row : r.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += '\t';
      out += escape_field(value_to_string(row[c]));
    }
    out += '\n';
  }
  return out;
}

void dump_db(const RelationDB& db, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());
  for (const auto& [name, rel] : db.base_relations()) {
    write_file(dir / (name + ".tsv"), relation_to_tsv(rel));
  }
  const nlohmann::json meta = {{"doc_id", db.doc_id()},
                               {"page_width", db.page_size().width},
                               {"page_height", db.page_size().height}};
  write_file(dir / "meta.json", meta.dump(2) + "\n");
}

RelationDB load_db(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::kUnknownDocument, "no document database at " + dir.string());
  }
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_file(dir / "meta.json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedInput, std::string("bad meta.json: ") + e.what());
  }
  std::map<std::string, Relation, std::less<>> rels;
  for (const std::string& name : base_relation_names()) {
    Relation rel = make_relation(name);
    const std::string text = read_file(dir / (name + ".tsv"));
    std::vector<std::string> lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw Error(ErrorCode::kMalformedInput, name + ".tsv has no header");
    std::vector<std::string> header = split(lines[0], '\t');
    if (header.size() != rel.columns.size()) {
      throw Error(ErrorCode::kSchemaViolation, name + ".tsv header mismatch");
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (header[c] != rel.columns[c].name) {
        throw Error(ErrorCode::kSchemaViolation, name + ".tsv header mismatch");
      }
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const std::vector<std::string> cells = split(lines[i], '\t');
      if (cells.size() != rel.columns.size()) {
        throw Error(ErrorCode::kSchemaViolation,
                    name + ".tsv line " + std::to_string(i + 1) + " has wrong arity");
      }
      Row row;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (rel.columns[c].type == ColumnType::kText) {
          row.emplace_back(unescape_field(cells[c]));
        } else {
          std::int64_t v = 0;
          const char* end = cells[c].data() + cells[c].size();
          auto [ptr, ec] = std::from_chars(cells[c].data(), end, v);
          if (ec != std::errc() || ptr != end) {
            throw Error(ErrorCode::kSchemaViolation,
                        name + ".tsv: bad integer '" + cells[c] + "'");
          }
          row.emplace_back(v);
        }
      }
      rel.rows.push_back(std::move(row));
    }
    rels.emplace(name, std::move(rel));
  }
  return RelationDB(meta.value("doc_id", dir.filename().string()),
                    PageSize{meta.value("page_width", 0), meta.value("page_height", 0)},
                    std::move(rels));
}

}  // namespace docrelate
