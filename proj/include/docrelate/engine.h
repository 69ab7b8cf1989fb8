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

#ifndef DOCRELATE_ENGINE_H_
#define DOCRELATE_ENGINE_H_

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "docrelate/config.h"
#include "docrelate/error.h"
#include "docrelate/ingest.h"
#include "docrelate/lexicon.h"
#include "docrelate/nl.h"
#include "docrelate/query.h"
#include "docrelate/relation_store.h"
#include "docrelate/template_registry.h"
#include "docrelate/workflow.h"

namespace docrelate {

struct Response {
  enum class Kind { kResult, kAck, kError };

  Kind kind = Kind::kAck;
  std::string message;
  std::optional<Intent> intent;

  // Results.
  std::optional<Relation> relation;
  std::string sql;
  std::vector<int> highlight_word_ids;
  std::optional<NlTrace> trace;
  std::vector<std::string> warnings;

  // Workflow acks.
  std::optional<Workflow> workflow;
  std::optional<ApplyResult> applied;
  std::vector<std::string> workflow_names;

  // Errors.
  std::string stage;
  std::optional<ErrorCode> error_code;
};

std::string_view response_kind_name(Response::Kind kind);

// Word ids behind the rows of a traced result, read from the FROM table:
// word_id, anchor_id and neighbor_id cells directly, and every word of a
// referenced line (below_line_id, or line_id when the row names no word).
// Rows naming only a block or box contribute that block's or box's words.
// SUBSTR rows contribute the words of their line that occur in the result.
std::vector<int> highlight_word_ids(const Query& query, const TracedResult& traced,
                                    const Relation& source, const RelationDB& db);

class Session {
 public:
  Session(std::string id, RelationDB db, CondValueLexicon lexicon)
      : id_(std::move(id)), db_(std::move(db)), lexicon_(std::move(lexicon)) {}

  const std::string& id() const { return id_; }
  const std::string& doc_id() const { return db_.doc_id(); }
  RelationDB& db() { return db_; }
  const RelationDB& db() const { return db_; }
  const CondValueLexicon& lexicon() const { return lexicon_; }
  Recording& recording() { return recording_; }
  const Recording& recording() const { return recording_; }

  std::optional<std::string> pending_name;
  std::optional<std::string> last_saved;
  std::mutex mu;

 private:
  std::string id_;
  RelationDB db_;
  CondValueLexicon lexicon_;
  Recording recording_;
};

struct EngineOptions {
  // Holds db/, workflows/, templates/ and lexicons/. Without it everything
  // lives in memory.
  std::optional<std::filesystem::path> data_dir;
  EngineConfig config;
  // Defaults to <data>/lexicons/ when that folder exists.
  std::optional<Lexicons> lexicons;
  IntentPatterns intent_patterns = IntentPatterns::defaults();
};

struct DocumentSummary {
  std::string doc_id;
  PageSize page_size;
  std::map<std::string, std::size_t> counts;
};

DocumentSummary summarize(const RelationDB& db);

// Shared state behind the HTTP service, the CLI and the REPL. Thread-safe:
// sessions serialize on their own mutex; documents are guarded by a
// reader/writer lock.
class Engine {
 public:
  explicit Engine(EngineOptions options = {});

  const EngineConfig& config() const { return options_.config; }
  const Lexicons& lexicons() const { return lexicons_; }
  const std::optional<std::filesystem::path>& data_dir() const { return options_.data_dir; }

  // doc_id defaults to "d" + a hash of the payloads. Re-ingesting an id
  // replaces the document.
  DocumentSummary ingest(std::optional<std::string> doc_id, std::string_view ocr_payload,
                         OcrFormat format, std::optional<std::string_view> image_payload);
  // Writes the document under <data>/db/ when persist is set and a data
  // directory is configured.
  void add_document(RelationDB db, bool persist = true);
  // Throws UnknownDocument.
  RelationDB document(std::string_view doc_id) const;
  std::vector<std::string> document_ids() const;

  // Throws UnknownDocument.
  std::string create_session(std::string_view doc_id);
  // Throws UnknownSession.
  std::shared_ptr<Session> session(std::string_view session_id) const;

  Response handle_utterance(std::string_view session_id, std::string_view utterance);
  Response handle_utterance(Session& session, std::string_view utterance);
  Response handle_sql(std::string_view session_id, std::string_view sql);
  Response handle_sql(Session& session, std::string_view sql);

  Workflow save_workflow(std::string_view session_id, const std::string& name);
  Workflow save_workflow(Session& session, const std::string& name);
  ApplyResult apply_workflow(std::string_view name, std::string_view doc_id) const;
  std::vector<std::string> workflow_names() const { return workflows_->names(); }
  const WorkflowRegistry& workflows() const { return *workflows_; }

  std::string register_template(std::string_view doc_id, const std::string& name);
  TemplateMatch match_document(std::string_view doc_id) const;
  const TemplateRegistry& templates() const { return *templates_; }

 private:
  Response run_extraction(Session& s, std::string_view utterance);
  Response run_workflow_command(Session& s, std::string_view utterance, Intent intent);
  std::string template_of(const RelationDB& db) const;
  std::string auto_workflow_name() const;

  EngineOptions options_;
  Lexicons lexicons_;
  std::unique_ptr<WorkflowRegistry> workflows_;
  std::unique_ptr<TemplateRegistry> templates_;

  mutable std::shared_mutex docs_mu_;
  mutable std::map<std::string, RelationDB, std::less<>> docs_;

  mutable std::mutex sessions_mu_;
  std::map<std::string, std::shared_ptr<Session>, std::less<>> sessions_;
  std::uint64_t next_session_ = 1;
};

}  // namespace docrelate

#endif  // DOCRELATE_ENGINE_H_
