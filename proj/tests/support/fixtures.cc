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

#include "fixtures.h"

#include <atomic>
#include <fstream>
#include <sstream>

#include "docrelate/error.h"
#include "docrelate/ingest.h"

namespace docrelate::testing {

std::filesystem::path data_dir() { return DOCRELATE_TEST_DATA; }

std::filesystem::path lexicon_dir() { return DOCRELATE_LEXICON_DIR; }

std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Lexicons& demo_lexicons() {
  static const Lexicons lex = Lexicons::load_dir(lexicon_dir());
  return lex;
}

RawDocument fixture_raw(const std::string& name) {
  const std::string ocr = read_text(data_dir() / (name + ".json"));
  const auto png = data_dir() / (name + ".png");
  std::optional<std::string> image;
  if (std::filesystem::exists(png)) image = read_text(png);
  std::optional<std::string_view> view;
  if (image) view = *image;
  return ingest_document(name, ocr, OcrFormat::kJsonWords, view, EngineConfig{});
}

DocumentEntities fixture_entities(const std::string& name) {
  return build_entities(fixture_raw(name), EngineConfig{}, demo_lexicons());
}

RelationDB fixture_db(const std::string& name) { return populate(fixture_entities(name)); }

const Value& cell(const Relation& r, std::size_t row, std::string_view column) {
  const auto idx = r.column_index(column);
  if (!idx) throw Error(ErrorCode::kUnknownColumn, std::string(column));
  return r.rows.at(row).at(*idx);
}

std::string text_cell(const Relation& r, std::size_t row, std::string_view column) {
  return std::get<std::string>(cell(r, row, column));
}

std::int64_t int_cell(const Relation& r, std::size_t row, std::string_view column) {
  return std::get<std::int64_t>(cell(r, row, column));
}

std::filesystem::path temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path() /
             ("docrelate-" + tag + "-" + std::to_string(::getpid()) + "-" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace docrelate::testing
