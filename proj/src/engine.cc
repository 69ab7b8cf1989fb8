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

#include <algorithm>
#include <cstdio>
#include <set>

#include "docrelate/entities.h"
#include "docrelate/text_util.h"

namespace docrelate {

namespace {

Response error_response(const std::string& stage, const Error& e) {
  Response r;
  r.kind = Response::Kind::kError;
  r.stage = stage;
  r.error_code = e.code();
  r.message = e.what();
  return r;
}

std::map<std::int64_t, std::vector<int>> words_by(const Relation& words,
                                                  std::string_view column) {
  std::map<std::int64_t, std::vector<int>> out;
  const auto col = words.column_index(column);
  const auto id = words.column_index("word_id");
  if (!col || !id) return out;
  for (const Row& r : words.rows) {
    const auto key = std::get<std::int64_t>(r[*col]);
    if (key >= 0) out[key].push_back(static_cast<int>(std::get<std::int64_t>(r[*id])));
  }
  return out;
}

std::optional<std::int64_t> int_at(const Relation& r, const Row& row, std::string_view column) {
  const auto idx = r.column_index(column);
  if (!idx || r.columns[*idx].type != ColumnType::kInteger) return std::nullopt;
  return std::get<std::int64_t>(row[*idx]);
}

}  // namespace

std::string_view response_kind_name(Response::Kind kind) {
  switch (kind) {
    case Response::Kind::kResult: return "result";
    case Response::Kind::kAck: return "ack";
    case Response::Kind::kError: return "error";
  }
  return "?";
}

std::vector<int> highlight_word_ids(const Query& query, const TracedResult& traced,
                                    const Relation& source, const RelationDB& db) {
  std::set<int> ids;
  if (!db.has_table("words")) return {};
  const Relation& words = db.get_table("words");
  const auto by_line = words_by(words, "line_id");

  auto add_line = [&](std::int64_t line_id) {
    if (auto it = by_line.find(line_id); it != by_line.end()) ids.insert(it->second.begin(), it->second.end());
  };

  const bool direct = source.column_index("word_id") || source.column_index("anchor_id") ||
                      source.column_index("neighbor_id");
  const bool has_line = source.column_index("line_id") || source.column_index("below_line_id");

  for (std::size_t k = 0; k < traced.source_rows.size(); ++k) {
    const Row& row = source.rows[traced.source_rows[k]];
    if (const auto* call = std::get_if<SubstrCall>(&query.select)) {
      const std::string& result = std::get<std::string>(traced.relation.rows[k][0]);
      if (result.empty()) continue;
      std::vector<std::pair<int, std::string>> candidates;
      if (auto wid = int_at(source, row, "word_id"); wid && *wid >= 0) {
        const auto tidx = source.column_index(call->column);
        candidates.emplace_back(static_cast<int>(*wid), std::get<std::string>(row[*tidx]));
      } else if (auto lid = int_at(source, row, "line_id"); lid && *lid >= 0) {
        const auto tidx = *words.column_index("text");
        const auto widx = *words.column_index("word_id");
        const auto lidx = *words.column_index("line_id");
        for (const Row& w : words.rows) {
          if (std::get<std::int64_t>(w[lidx]) == *lid) {
            candidates.emplace_back(static_cast<int>(std::get<std::int64_t>(w[widx])),
                                    std::get<std::string>(w[tidx]));
          }
        }
      }
      for (const auto& [id, text] : candidates) {
        if (result.find(text) != std::string::npos || text.find(result) != std::string::npos) {
          ids.insert(id);
        }
      }
      continue;
    }
    for (const char* c : {"word_id", "anchor_id", "neighbor_id"}) {
      if (auto v = int_at(source, row, c); v && *v >= 0) ids.insert(static_cast<int>(*v));
    }
    if (auto v = int_at(source, row, "below_line_id"); v && *v >= 0) add_line(*v);
    if (!direct) {
      if (auto v = int_at(source, row, "line_id"); v && *v >= 0) add_line(*v);
    }
    if (!direct && !has_line) {
      for (const char* c : {"block_id", "box_id"}) {
        const auto v = int_at(source, row, c);
        if (!v || *v < 0) continue;
        const auto groups = words_by(words, c);
        if (auto it = groups.find(*v); it != groups.end()) {
          ids.insert(it->second.begin(), it->second.end());
        }
        break;
      }
    }
  }
  return {ids.begin(), ids.end()};
}

DocumentSummary summarize(const RelationDB& db) {
  DocumentSummary s;
  s.doc_id = db.doc_id();
  s.page_size = db.page_size();
  for (const char* name : {"words", "lines", "blocks", "boxes", "key_value"}) {
    s.counts[name] = db.has_table(name) ? db.get_table(name).rows.size() : 0;
  }
  std::size_t typed = 0;
  if (db.has_table("typed_words")) {
    const Relation& t = db.get_table("typed_words");
    const auto idx = *t.column_index("data_type");
    for (const Row& r : t.rows) typed += std::get<std::string>(r[idx]) != "NONE";
  }
  s.counts["typed_words"] = typed;
  return s;
}

Engine::Engine(EngineOptions options) : options_(std::move(options)) {
  if (options_.lexicons) lexicons_ = *options_.lexicons;
  if (options_.data_dir) {
    const auto& dir = *options_.data_dir;
    std::filesystem::create_directories(dir / "db");
    if (!options_.lexicons && std::filesystem::is_directory(dir / "lexicons")) {
      lexicons_ = Lexicons::load_dir(dir / "lexicons");
    }
    workflows_ = std::make_unique<WorkflowRegistry>(dir / "workflows");
    templates_ = std::make_unique<TemplateRegistry>(dir / "templates");
  } else {
    workflows_ = std::make_unique<WorkflowRegistry>();
    templates_ = std::make_unique<TemplateRegistry>();
  }
}

DocumentSummary Engine::ingest(std::optional<std::string> doc_id, std::string_view ocr_payload,
                               OcrFormat format,
                               std::optional<std::string_view> image_payload) {
  if (!doc_id) {
    std::string key(ocr_format_name(format));
    key += '\0';
    key += ocr_payload;
    if (image_payload) {
      key += '\0';
      key += *image_payload;
    }
    char buf[24];
    std::snprintf(buf, sizeof(buf), "d%016llx",
                  static_cast<unsigned long long>(fnv1a64(key)));
    doc_id = buf;
  }
  validate_name(*doc_id);
  const RawDocument raw = ingest_document(*doc_id, ocr_payload, format, image_payload,
                                          options_.config);
  RelationDB db = populate(build_entities(raw, options_.config, lexicons_));
  DocumentSummary summary = summarize(db);
  add_document(std::move(db));
  return summary;
}

void Engine::add_document(RelationDB db, bool persist) {
  std::unique_lock lock(docs_mu_);
  if (persist && options_.data_dir) dump_db(db, *options_.data_dir / "db" / db.doc_id());
  docs_[db.doc_id()] = std::move(db);
}

RelationDB Engine::document(std::string_view doc_id) const {
  {
    std::shared_lock lock(docs_mu_);
    if (auto it = docs_.find(doc_id); it != docs_.end()) return it->second;
  }
  std::unique_lock lock(docs_mu_);
  if (auto it = docs_.find(doc_id); it != docs_.end()) return it->second;
  if (options_.data_dir) {
    try {
      validate_name(doc_id);
    } catch (const Error&) {
      throw Error(ErrorCode::kUnknownDocument, "unknown document '" + std::string(doc_id) + "'");
    }
    const auto dir = *options_.data_dir / "db" / std::string(doc_id);
    if (std::filesystem::exists(dir / "meta.json")) {
      RelationDB db = load_db(dir);
      docs_.emplace(std::string(doc_id), db);
      return db;
    }
  }
  throw Error(ErrorCode::kUnknownDocument, "unknown document '" + std::string(doc_id) + "'");
}

std::vector<std::string> Engine::document_ids() const {
  std::set<std::string> ids;
  {
    std::shared_lock lock(docs_mu_);
    for (const auto& [id, db] : docs_) ids.insert(id);
  }
  if (options_.data_dir) {
    std::error_code ec;
    for (const auto& e : std::filesystem::directory_iterator(*options_.data_dir / "db", ec)) {
      if (std::filesystem::exists(e.path() / "meta.json")) ids.insert(e.path().filename().string());
    }
  }
  return {ids.begin(), ids.end()};
}

std::string Engine::create_session(std::string_view doc_id) {
  RelationDB db = document(doc_id);
  db.clear_temp();
  CondValueLexicon lexicon = CondValueLexicon::from_document(db, lexicons_.aliases);
  std::lock_guard lock(sessions_mu_);
  std::string id = "s" + std::to_string(next_session_++);
  sessions_[id] = std::make_shared<Session>(id, std::move(db), std::move(lexicon));
  return id;
}

std::shared_ptr<Session> Engine::session(std::string_view session_id) const {
  std::lock_guard lock(sessions_mu_);
  const auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kUnknownSession, "unknown session '" + std::string(session_id) + "'");
  }
  return it->second;
}

Response Engine::handle_utterance(std::string_view session_id, std::string_view utterance) {
  auto s = session(session_id);
  std::lock_guard lock(s->mu);
  return handle_utterance(*s, utterance);
}

Response Engine::handle_utterance(Session& s, std::string_view utterance) {
  Intent intent;
  try {
    intent = classify_intent(utterance, options_.intent_patterns);
  } catch (const Error& e) {
    return error_response("classify_intent", e);
  }
  Response r = intent == Intent::kExtraction ? run_extraction(s, utterance)
                                             : run_workflow_command(s, utterance, intent);
  r.intent = intent;
  return r;
}

Response Engine::run_extraction(Session& s, std::string_view utterance) {
  std::string stage = "recognize_cond_values";
  NlTrace trace;
  try {
    trace = compile_utterance(utterance, s.db(), s.lexicon(), lexicons_.aliases,
                              TableContext::kFresh, &stage);
  } catch (const Error& e) {
    return error_response(stage, e);
  }
  Response r;
  try {
    const TracedResult traced = evaluate_traced(trace.query, s.db());
    r.highlight_word_ids =
        highlight_word_ids(trace.query, traced, s.db().get_table(trace.query.table), s.db());
    r.relation = traced.relation;
    s.db().stage_temp(traced.relation);
  } catch (const Error& e) {
    Response err = error_response("query_engine", e);
    err.sql = to_sql(trace.query);
    err.trace = trace;
    return err;
  }
  r.kind = Response::Kind::kResult;
  r.sql = to_sql(trace.query);
  r.warnings = trace.warnings;
  r.message = std::to_string(r.relation->rows.size()) + " row(s)";
  r.trace = std::move(trace);
  s.recording().record_step(std::string(utterance), r.sql);
  return r;
}

Response Engine::handle_sql(std::string_view session_id, std::string_view sql) {
  auto s = session(session_id);
  std::lock_guard lock(s->mu);
  return handle_sql(*s, sql);
}

Response Engine::handle_sql(Session& s, std::string_view sql) {
  Response r;
  try {
    const Query q = parse_sql(sql);
    const TracedResult traced = evaluate_traced(q, s.db());
    r.highlight_word_ids = highlight_word_ids(q, traced, s.db().get_table(q.table), s.db());
    r.relation = traced.relation;
    r.sql = to_sql(q);
    s.db().stage_temp(traced.relation);
  } catch (const Error& e) {
    return error_response("query_engine", e);
  }
  r.kind = Response::Kind::kResult;
  r.intent = Intent::kExtraction;
  r.message = std::to_string(r.relation->rows.size()) + " row(s)";
  s.recording().record_step("", r.sql);
  return r;
}

std::string Engine::template_of(const RelationDB& db) const {
  return templates_->match(compute_signature(db), options_.config.template_threshold)
      .signature_id;
}

std::string Engine::auto_workflow_name() const {
  for (int k = 1;; ++k) {
    std::string name = "workflow-" + std::to_string(k);
    if (!workflows_->contains(name)) return name;
  }
}

Workflow Engine::save_workflow(std::string_view session_id, const std::string& name) {
  auto s = session(session_id);
  std::lock_guard lock(s->mu);
  return save_workflow(*s, name);
}

Workflow Engine::save_workflow(Session& s, const std::string& name) {
  Workflow wf = workflows_->save(name, template_of(s.db()), s.recording());
  s.last_saved = wf.name;
  s.pending_name.reset();
  return wf;
}

ApplyResult Engine::apply_workflow(std::string_view name, std::string_view doc_id) const {
  const Workflow wf = workflows_->get(name);
  return docrelate::apply_workflow(wf, document(doc_id), templates_.get(),
                                   options_.config.template_threshold);
}

Response Engine::run_workflow_command(Session& s, std::string_view utterance, Intent intent) {
  const WorkflowCommand cmd = parse_workflow_command(utterance, intent);
  Response r;
  r.kind = Response::Kind::kAck;
  try {
    switch (cmd.kind) {
      case WorkflowCommand::Kind::kClear:
        s.recording().clear();
        s.db().clear_temp();
        r.message = "workflow cleared";
        break;
      case WorkflowCommand::Kind::kCreate:
        s.recording().clear();
        if (cmd.name) validate_name(*cmd.name);
        s.pending_name = cmd.name;
        r.message = cmd.name ? "recording workflow '" + *cmd.name + "'" : "recording workflow";
        break;
      case WorkflowCommand::Kind::kSave: {
        const std::string name = cmd.name     ? *cmd.name
                                 : s.pending_name ? *s.pending_name
                                                  : auto_workflow_name();
        r.workflow = save_workflow(s, name);
        r.message = "saved workflow '" + name + "' with " +
                    std::to_string(r.workflow->steps.size()) + " step(s)";
        break;
      }
      case WorkflowCommand::Kind::kApply: {
        const std::optional<std::string> name = cmd.name ? cmd.name : s.last_saved;
        if (!name) throw Error(ErrorCode::kUnknownWorkflow, "no workflow named or saved yet");
        const Workflow wf = workflows_->get(*name);
        ApplyResult applied = docrelate::apply_workflow(
            wf, s.db(), templates_.get(), options_.config.template_threshold);
        r.kind = Response::Kind::kResult;
        if (!applied.steps.empty() && applied.steps.back().relation) {
          r.relation = applied.steps.back().relation;
          s.db().stage_temp(*r.relation);
        }
        r.warnings = applied.warnings;
        r.message = "applied workflow '" + *name + "'";
        r.applied = std::move(applied);
        break;
      }
      case WorkflowCommand::Kind::kList:
        r.workflow_names = workflows_->names();
        r.message = std::to_string(r.workflow_names.size()) + " workflow(s)";
        break;
    }
  } catch (const Error& e) {
    return error_response("workflow", e);
  }
  return r;
}

std::string Engine::register_template(std::string_view doc_id, const std::string& name) {
  return templates_->register_template(name, compute_signature(document(doc_id), name));
}

TemplateMatch Engine::match_document(std::string_view doc_id) const {
  return templates_->match(compute_signature(document(doc_id)),
                           options_.config.template_threshold);
}

}  // namespace docrelate
