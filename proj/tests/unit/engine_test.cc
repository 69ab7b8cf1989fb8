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

#include "docrelate/engine.h"

#include <thread>

#include "doctest.h"
#include "fixtures.h"

using namespace docrelate;

namespace {

EngineOptions options_with_lexicons() {
  EngineOptions o;
  o.lexicons = testing::demo_lexicons();
  return o;
}

Engine& loaded(Engine& e) {
  for (const char* name : {"bank_a", "bank_b", "invoice_c"}) e.add_document(testing::fixture_db(name), false);
  return e;
}

const char* const kAccountSteps[] = {
    "Kindly get the block information for the block containing the word remit",
    "get the line which has word Account in it from the previous result",
    "Get substring which is towards right of Account from the previous result"};

std::vector<int> words_where(const RelationDB& db, std::string_view column, std::int64_t v) {
  const Relation& w = db.get_table("words");
  std::vector<int> out;
  for (std::size_t i = 0; i < w.rows.size(); ++i) {
    if (testing::int_cell(w, i, column) == v) out.push_back(static_cast<int>(testing::int_cell(w, i, "word_id")));
  }
  return out;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("sessions need known documents") {
    Engine e(options_with_lexicons());
    loaded(e);
    CHECK(e.document_ids() == std::vector<std::string>{"bank_a", "bank_b", "invoice_c"});
    try {
      e.create_session("nope");
      FAIL("expected UnknownDocument");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::kUnknownDocument);
    }
    try {
      e.handle_utterance("s99", "show all words");
      FAIL("expected UnknownSession");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::kUnknownSession);
    }
    const std::string a = e.create_session("bank_a");
    const std::string b = e.create_session("bank_a");
    CHECK(a != b);
    CHECK(e.session(a)->doc_id() == "bank_a");
  }

  TEST_CASE("account sequence") {
    Engine e(options_with_lexicons());
    loaded(e);
    const std::string sid = e.create_session("bank_a");
    const RelationDB db = e.document("bank_a");

    Response r = e.handle_utterance(sid, kAccountSteps[0]);
    REQUIRE(r.kind == Response::Kind::kResult);
    CHECK(r.intent == Intent::kExtraction);
    CHECK(r.sql == "SELECT * FROM block_lines WHERE block_id=(SELECT block_id FROM words WHERE text=\"remit\")");
    CHECK(r.relation->rows.size() == 3);
    CHECK(r.highlight_word_ids == words_where(db, "block_id", 5));
    REQUIRE(r.trace);
    CHECK(r.trace->template_id == TemplateId::kT1IdSubquery);

    r = e.handle_utterance(sid, kAccountSteps[1]);
    CHECK(r.sql == "SELECT * FROM TEMP WHERE line_id=(SELECT line_id FROM words WHERE text=\"Account\")");
    CHECK(r.relation->rows.size() == 1);
    CHECK(r.highlight_word_ids == words_where(db, "line_id", 9));

    r = e.handle_utterance(sid, kAccountSteps[2]);
    CHECK(r.sql == "SELECT SUBSTR( line, pos(\"Account\") ) FROM TEMP");
    CHECK(testing::text_cell(*r.relation, 0, "result") == "123456");
    REQUIRE(r.highlight_word_ids.size() == 1);
    CHECK(testing::text_cell(db.get_table("words"), static_cast<std::size_t>(r.highlight_word_ids[0]), "text") ==
          "123456");
    CHECK(e.session(sid)->recording().size() == 3);
  }

  TEST_CASE("highlights for adjacency and key rows") {
    Engine e(options_with_lexicons());
    loaded(e);
    const std::string sid = e.create_session("bank_a");
    const RelationDB db = e.document("bank_a");
    Response r = e.handle_utterance(sid, "word right of SWIFT");
    CHECK(r.highlight_word_ids == std::vector<int>{3, 4});
    r = e.handle_utterance(sid, "line below DRAWEE");
    CHECK(r.highlight_word_ids.size() == 1 + words_where(db, "line_id", 7).size());
    r = e.handle_sql(sid, "SELECT * FROM words WHERE text=\"nothing\"");
    CHECK(r.highlight_word_ids.empty());
  }

  TEST_CASE("failures name their stage and leave state alone") {
    Engine e(options_with_lexicons());
    loaded(e);
    const std::string sid = e.create_session("bank_a");
    e.handle_sql(sid, "SELECT * FROM lines WHERE line_id=9");
    Response r = e.handle_utterance(sid, "hello there");
    CHECK(r.kind == Response::Kind::kError);
    CHECK(r.stage == "map_template");
    CHECK(r.error_code == ErrorCode::kUnmappableUtterance);
    r = e.handle_utterance(sid, "Account");
    CHECK(r.stage == "map_table");
    r = e.handle_utterance(sid, "");
    CHECK(r.stage == "classify_intent");
    CHECK(r.error_code == ErrorCode::kEmptyUtterance);
    r = e.handle_sql(sid, "SELECT nope FROM words");
    CHECK(r.stage == "query_engine");
    CHECK(r.error_code == ErrorCode::kUnknownColumn);
    r = e.handle_sql(sid, "SELECT FROM");
    CHECK(r.error_code == ErrorCode::kParseError);
    CHECK(e.session(sid)->recording().size() == 1);
    CHECK(e.session(sid)->db().temp()->rows.size() == 1);
  }

  TEST_CASE("conversational workflow commands") {
    Engine e(options_with_lexicons());
    loaded(e);
    const std::string sid = e.create_session("bank_a");
    Response r = e.handle_utterance(sid, "save the workflow");
    CHECK(r.kind == Response::Kind::kError);
    CHECK(r.error_code == ErrorCode::kEmptyRecording);
    CHECK(r.stage == "workflow");

    r = e.handle_utterance(sid, "create a workflow called acct");
    CHECK(r.kind == Response::Kind::kAck);
    CHECK(r.intent == Intent::kWorkflow);
    for (const char* u : kAccountSteps) e.handle_utterance(sid, u);
    r = e.handle_utterance(sid, "save the workflow");
    REQUIRE(r.workflow);
    CHECK(r.workflow->name == "acct");
    CHECK(r.workflow->template_id == "unknown");
    CHECK(r.workflow->steps.size() == 3);

    r = e.handle_utterance(sid, "list all workflows");
    CHECK(r.workflow_names == std::vector<std::string>{"acct"});

    r = e.handle_utterance(sid, "clear the workflow");
    CHECK(e.session(sid)->recording().empty());
    CHECK_FALSE(e.session(sid)->db().temp().has_value());

    r = e.handle_utterance(sid, "apply the workflow");
    REQUIRE(r.kind == Response::Kind::kResult);
    CHECK(testing::text_cell(*r.relation, 0, "result") == "123456");
    CHECK(r.applied->steps.size() == 3);

    r = e.handle_utterance(sid, "apply workflow missing");
    CHECK(r.error_code == ErrorCode::kUnknownWorkflow);

    e.handle_utterance(sid, "show all words");
    r = e.handle_utterance(sid, "save this workflow");
    CHECK(r.workflow->name == "workflow-1");
    r = e.handle_utterance(sid, "save the steps as acct");
    CHECK(r.error_code == ErrorCode::kDuplicateName);

    const ApplyResult on_b = e.apply_workflow("acct", "bank_b");
    CHECK(testing::text_cell(*on_b.steps.back().relation, 0, "result") == "789001");
  }

  TEST_CASE("sessions replay identically") {
    Engine e(options_with_lexicons());
    loaded(e);
    const std::string a = e.create_session("bank_a");
    const std::string b = e.create_session("bank_a");
    for (const char* u : kAccountSteps) {
      const Response x = e.handle_utterance(a, u);
      const Response y = e.handle_utterance(b, u);
      CHECK(x.sql == y.sql);
      CHECK(*x.relation == *y.relation);
      CHECK(x.highlight_word_ids == y.highlight_word_ids);
    }
  }

  TEST_CASE("concurrent sessions stay independent") {
    Engine e(options_with_lexicons());
    loaded(e);
    std::vector<std::string> ids;
    for (int i = 0; i < 8; ++i) ids.push_back(e.create_session(i % 2 == 0 ? "bank_a" : "bank_b"));
    std::vector<std::string> results(ids.size());
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      threads.emplace_back([&, i] {
        Response r;
        for (int round = 0; round < 5; ++round) {
          for (const char* u : kAccountSteps) r = e.handle_utterance(ids[i], u);
        }
        results[i] = r.relation ? testing::text_cell(*r.relation, 0, "result") : "";
      });
    }
    for (auto& t : threads) t.join();
    for (std::size_t i = 0; i < ids.size(); ++i) CHECK(results[i] == (i % 2 == 0 ? "123456" : "789001"));
  }

  TEST_CASE("data directory persistence") {
    const auto dir = testing::temp_dir("engine");
    const std::string ocr = testing::read_text(testing::data_dir() / "bank_a.json");
    std::string generated;
    {
      EngineOptions o = options_with_lexicons();
      o.data_dir = dir;
      Engine e(o);
      const DocumentSummary s = e.ingest(std::nullopt, ocr, OcrFormat::kJsonWords, std::nullopt);
      generated = s.doc_id;
      CHECK(s.doc_id.size() == 17);
      CHECK(s.doc_id[0] == 'd');
      CHECK(s.counts.at("words") == 31);
      CHECK(s.counts.at("lines") == 14);
      CHECK(e.ingest(std::nullopt, ocr, OcrFormat::kJsonWords, std::nullopt).doc_id == generated);
      e.ingest(std::string("named"), ocr, OcrFormat::kJsonWords, std::nullopt);
      CHECK_THROWS_AS(e.ingest(std::string("bad id"), ocr, OcrFormat::kJsonWords, std::nullopt), Error);
      const std::string sid = e.create_session("named");
      e.handle_utterance(sid, kAccountSteps[0]);
      e.save_workflow(sid, "kept");
      e.register_template("named", "bank");
    }
    EngineOptions o;
    o.data_dir = dir;
    Engine again(o);
    CHECK(again.document_ids() == std::vector<std::string>{generated, "named"});
    CHECK(again.document("named").base_relations() == again.document(generated).base_relations());
    CHECK(again.workflow_names() == std::vector<std::string>{"kept"});
    CHECK(again.match_document("named").signature_id == "bank");
    std::filesystem::remove_all(dir);
  }
}
