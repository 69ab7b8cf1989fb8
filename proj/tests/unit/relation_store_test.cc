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

#include <functional>
#include <set>

#include "docrelate/error.h"
#include "doctest.h"
#include "fixtures.h"

using namespace docrelate;
using testing::int_cell;
using testing::text_cell;

namespace {

const RelationDB& bank_a() {
  static const RelationDB db = testing::fixture_db("bank_a");
  return db;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIoError;
}

}  // namespace

TEST_SUITE("relation_store") {
  TEST_CASE("every base relation exists with its schema") {
    const auto& names = base_relation_names();
    CHECK(names.size() == 13);
    for (const std::string& n : names) {
      CHECK(bank_a().has_table(n));
      CHECK(bank_a().get_table(n).columns == base_relation_schema(n));
      CHECK_NOTHROW(bank_a().get_table(n).validate());
    }
    CHECK(code_of([] { base_relation_schema("nope"); }) == ErrorCode::kUnknownTable);
    CHECK(code_of([] { bank_a().get_table("nope"); }) == ErrorCode::kUnknownTable);
  }

  TEST_CASE("row counts of fixture A") {
    const RelationDB& db = bank_a();
    const auto words = db.get_table("words").rows.size();
    CHECK(db.get_table("lines").rows.size() == 14);
    CHECK(db.get_table("blocks").rows.size() == 8);
    CHECK(db.get_table("boxes").rows.size() == 1);
    CHECK(db.get_table("box_lines").rows.size() == 3);
    CHECK(db.get_table("block_lines").rows.size() == 14);
    for (const char* t : {"rightof", "leftof", "above", "below", "line_below_word", "typed_words"}) {
      CHECK(db.get_table(t).rows.size() == words);
    }
    CHECK(db.get_table("key_value").rows.size() == 4);
  }

  TEST_CASE("absent neighbors are -1 and \"null\"") {
    const Relation& r = bank_a().get_table("rightof");
    bool saw_null = false;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      if (int_cell(r, i, "neighbor_id") == -1) {
        saw_null = true;
        CHECK(text_cell(r, i, "neighbor_text") == "null");
      }
    }
    CHECK(saw_null);
    const Relation& w = bank_a().get_table("words");
    for (std::size_t i = 0; i < w.rows.size(); ++i) {
      const bool boxed = int_cell(w, i, "box_id") == 0;
      const std::int64_t line = int_cell(w, i, "line_id");
      CHECK(boxed == (line >= 8 && line <= 10));
    }
  }

  TEST_CASE("referential integrity") {
    const RelationDB& db = bank_a();
    std::set<std::int64_t> words;
    std::set<std::int64_t> lines;
    std::set<std::int64_t> blocks;
    for (std::size_t i = 0; i < db.get_table("words").rows.size(); ++i) {
      words.insert(int_cell(db.get_table("words"), i, "word_id"));
    }
    for (std::size_t i = 0; i < db.get_table("lines").rows.size(); ++i) {
      lines.insert(int_cell(db.get_table("lines"), i, "line_id"));
    }
    for (std::size_t i = 0; i < db.get_table("blocks").rows.size(); ++i) {
      blocks.insert(int_cell(db.get_table("blocks"), i, "block_id"));
    }
    for (const char* t : {"rightof", "leftof", "above", "below"}) {
      const Relation& r = db.get_table(t);
      for (std::size_t i = 0; i < r.rows.size(); ++i) {
        CHECK(words.count(int_cell(r, i, "anchor_id")) == 1);
        const auto n = int_cell(r, i, "neighbor_id");
        CHECK((n == -1 || words.count(n) == 1));
      }
    }
    const Relation& lb = db.get_table("line_below_word");
    for (std::size_t i = 0; i < lb.rows.size(); ++i) {
      const auto l = int_cell(lb, i, "below_line_id");
      CHECK((l == -1 || lines.count(l) == 1));
      CHECK(blocks.count(int_cell(lb, i, "block_id")) == 1);
    }
    const Relation& kv = db.get_table("key_value");
    for (std::size_t i = 0; i < kv.rows.size(); ++i) CHECK(lines.count(int_cell(kv, i, "line_id")) == 1);
  }

  TEST_CASE("rows are sorted by the first integer column") {
    for (const auto& [name, rel] : bank_a().base_relations()) {
      for (std::size_t c = 0; c < rel.columns.size(); ++c) {
        if (rel.columns[c].type != ColumnType::kInteger) continue;
        for (std::size_t i = 1; i < rel.rows.size(); ++i) {
          CHECK(std::get<std::int64_t>(rel.rows[i - 1][c]) <= std::get<std::int64_t>(rel.rows[i][c]));
        }
        break;
      }
    }
  }

  TEST_CASE("TEMP is per copy and never a base relation") {
    RelationDB a = bank_a();
    CHECK_FALSE(a.has_table("TEMP"));
    CHECK(code_of([&] { a.get_table("TEMP"); }) == ErrorCode::kUnknownTable);
    a.stage_temp(Relation{"result", {{"x", ColumnType::kInteger}}, {{std::int64_t{1}}}});
    CHECK(a.get_table("TEMP").name == "TEMP");
    const RelationDB b = a;
    a.clear_temp();
    CHECK(b.has_table("TEMP"));
    CHECK_FALSE(a.has_table("TEMP"));
    CHECK(&a.get_table("words") == &b.get_table("words"));

    std::map<std::string, Relation, std::less<>> bad;
    bad.emplace("TEMP", Relation{"TEMP", {}, {}});
    CHECK(code_of([&] { RelationDB("x", {}, bad); }) == ErrorCode::kSchemaViolation);
  }

  TEST_CASE("schema violations are rejected") {
    std::map<std::string, Relation, std::less<>> wrong;
    wrong.emplace("boxes", Relation{"boxes", {{"box_id", ColumnType::kInteger}}, {}});
    CHECK(code_of([&] { RelationDB("x", {}, wrong); }) == ErrorCode::kSchemaViolation);
    Relation r{"t", {{"a", ColumnType::kInteger}}, {{std::string("text")}}};
    CHECK(code_of([&] { r.validate(); }) == ErrorCode::kSchemaViolation);
    r.rows = {{std::int64_t{1}, std::int64_t{2}}};
    CHECK(code_of([&] { r.validate(); }) == ErrorCode::kSchemaViolation);
  }

  TEST_CASE("dump and load round trip") {
    const auto dir = testing::temp_dir("store");
    dump_db(bank_a(), dir / "bank_a");
    CHECK(std::filesystem::exists(dir / "bank_a" / "meta.json"));
    CHECK(std::filesystem::exists(dir / "bank_a" / "rightof.tsv"));
    const RelationDB loaded = load_db(dir / "bank_a");
    CHECK(loaded.doc_id() == "bank_a");
    CHECK(loaded.page_size() == bank_a().page_size());
    CHECK(loaded.base_relations() == bank_a().base_relations());
    CHECK(code_of([&] { load_db(dir / "missing"); }) == ErrorCode::kUnknownDocument);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("TSV rendering escapes cells") {
    Relation r{"t", {{"a", ColumnType::kText}, {"b", ColumnType::kInteger}},
               {{std::string("x\ty"), std::int64_t{-3}}}};
    CHECK(relation_to_tsv(r) == "a\tb\nx\\ty\t-3\n");
    CHECK(relation_to_tsv(r, false) == "x\\ty\t-3\n");
  }
}
