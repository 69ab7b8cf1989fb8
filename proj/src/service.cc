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

#include "docrelate/service.h"

#include <optional>

namespace docrelate {

namespace {

using nlohmann::json;

json value_to_json(const Value& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  return std::get<std::int64_t>(v);
}

json bbox_json(const Relation& r, const Row& row) {
  json out = json::array();
  for (const char* c : {"x0", "y0", "x1", "y1"}) {
    out.push_back(std::get<std::int64_t>(row[*r.column_index(c)]));
  }
  return out;
}

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_ok(httplib::Response& res, const json& data) {
  send(res, 200, json{{"ok", true}, {"data", data}});
}

void send_error(httplib::Response& res, int status, const std::string& stage,
                const std::string& code, const std::string& message) {
  send(res, status,
       json{{"ok", false},
            {"error", {{"stage", stage}, {"code", code}, {"message", message}}}});
}

void send_error(httplib::Response& res, const std::string& stage, const Error& e) {
  send_error(res, http_status(e.code()), stage, std::string(error_code_name(e.code())),
             e.what());
}

// Parses a JSON object body; throws MalformedInput.
json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::kMalformedInput, "request body must be a JSON object");
  }
  return body;
}

std::string string_field(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || !it->is_string()) {
    throw Error(ErrorCode::kMalformedInput, std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

std::optional<std::string> form_field(const httplib::Request& req, const char* key) {
  if (req.has_file(key)) return req.get_file_value(key).content;
  if (req.has_param(key)) return req.get_param_value(key);
  return std::nullopt;
}

template <typename F>
httplib::Server::Handler guarded(const std::string& stage, F f) {
  return [stage, f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const Error& e) {
      send_error(res, stage, e);
    } catch (const std::exception& e) {
      send_error(res, 500, stage, "Internal", e.what());
    }
  };
}

json trace_json(const NlTrace& t) {
  return json{{"normalized", t.normalized.text},
              {"values", t.normalized.values},
              {"template", std::string(template_id_name(t.template_id))},
              {"table", t.table}};
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedInput:
    case ErrorCode::kUnsupportedFormat:
    case ErrorCode::kMalformedImage:
    case ErrorCode::kEmptyUtterance:
      return 400;
    case ErrorCode::kUnknownDocument:
    case ErrorCode::kUnknownSession:
    case ErrorCode::kUnknownWorkflow:
    case ErrorCode::kUnknownTemplate:
      return 404;
    default:
      return 422;
  }
}

json relation_to_json(const Relation& r) {
  json cols = json::array();
  for (const Column& c : r.columns) {
    cols.push_back({{"name", c.name}, {"type", std::string(column_type_name(c.type))}});
  }
  json rows = json::array();
  for (const Row& row : r.rows) {
    json cells = json::array();
    for (const Value& v : row) cells.push_back(value_to_json(v));
    rows.push_back(std::move(cells));
  }
  return json{{"name", r.name}, {"columns", cols}, {"rows", rows}};
}

json workflow_to_json(const Workflow& wf) {
  json steps = json::array();
  for (const WorkflowStep& s : wf.steps) {
    steps.push_back({{"utterance", s.utterance}, {"sql", s.sql}});
  }
  return json{{"name", wf.name}, {"template_id", wf.template_id}, {"steps", steps}};
}

json apply_result_to_json(const ApplyResult& r) {
  json steps = json::array();
  for (const StepResult& s : r.steps) {
    json step{{"utterance", s.utterance}, {"sql", s.sql}, {"empty", s.empty}};
    step["relation"] = s.relation ? relation_to_json(*s.relation) : json(nullptr);
    step["error"] = s.error ? json(*s.error) : json(nullptr);
    steps.push_back(std::move(step));
  }
  json out{{"workflow", r.workflow}, {"steps", steps}, {"warnings", r.warnings}};
  if (r.template_match) {
    out["template_match"] = {{"signature_id", r.template_match->signature_id},
                             {"score", r.template_match->score}};
  } else {
    out["template_match"] = nullptr;
  }
  return out;
}

json response_to_json(const Response& r) {
  json out{{"kind", std::string(response_kind_name(r.kind))}, {"message", r.message}};
  out["intent"] = r.intent ? json(std::string(intent_name(*r.intent))) : json(nullptr);
  out["sql"] = r.sql;
  out["relation"] = r.relation ? relation_to_json(*r.relation) : json(nullptr);
  out["highlight_word_ids"] = r.highlight_word_ids;
  out["nl"] = r.trace ? trace_json(*r.trace) : json(nullptr);
  out["warnings"] = r.warnings;
  if (r.workflow) out["workflow"] = workflow_to_json(*r.workflow);
  if (r.applied) out["applied"] = apply_result_to_json(*r.applied);
  if (r.kind == Response::Kind::kAck && !r.workflow) out["workflows"] = r.workflow_names;
  return out;
}

json summary_to_json(const DocumentSummary& s) {
  return json{{"doc_id", s.doc_id},
              {"page", {{"width", s.page_size.width}, {"height", s.page_size.height}}},
              {"counts", s.counts}};
}

json entities_to_json(const RelationDB& db) {
  json out{{"doc_id", db.doc_id()},
           {"page", {{"width", db.page_size().width}, {"height", db.page_size().height}}}};
  auto ids = [](const Relation& r, const Row& row, std::initializer_list<const char*> cols,
                json& target) {
    for (const char* c : cols) {
      const auto v = std::get<std::int64_t>(row[*r.column_index(c)]);
      target[c] = v >= 0 ? json(v) : json(nullptr);
    }
  };
  json words = json::array();
  const Relation& w = db.get_table("words");
  for (const Row& row : w.rows) {
    json e{{"id", std::get<std::int64_t>(row[0])},
           {"text", std::get<std::string>(row[*w.column_index("text")])},
           {"bbox", bbox_json(w, row)},
           {"conf", std::get<std::int64_t>(row[*w.column_index("conf")])}};
    ids(w, row, {"line_id", "block_id", "box_id"}, e);
    words.push_back(std::move(e));
  }
  json lines = json::array();
  const Relation& l = db.get_table("lines");
  for (const Row& row : l.rows) {
    json e{{"id", std::get<std::int64_t>(row[0])},
           {"text", std::get<std::string>(row[*l.column_index("text")])},
           {"bbox", bbox_json(l, row)}};
    ids(l, row, {"block_id", "box_id"}, e);
    lines.push_back(std::move(e));
  }
  json blocks = json::array();
  const Relation& b = db.get_table("blocks");
  for (const Row& row : b.rows) {
    blocks.push_back({{"id", std::get<std::int64_t>(row[0])},
                      {"bbox", bbox_json(b, row)},
                      {"line_count", std::get<std::int64_t>(row[*b.column_index("line_count")])}});
  }
  json boxes = json::array();
  const Relation& x = db.get_table("boxes");
  for (const Row& row : x.rows) {
    boxes.push_back({{"id", std::get<std::int64_t>(row[0])}, {"bbox", bbox_json(x, row)}});
  }
  out["words"] = words;
  out["lines"] = lines;
  out["blocks"] = blocks;
  out["boxes"] = boxes;
  return out;
}

void install_routes(httplib::Server& server, Engine& engine) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  server.Post("/documents", guarded("ingest", [&engine](const httplib::Request& req,
                                                        httplib::Response& res) {
    std::optional<std::string> ocr;
    std::optional<std::string> image;
    std::optional<std::string> format;
    std::optional<std::string> doc_id;
    if (req.is_multipart_form_data()) {
      ocr = form_field(req, "ocr");
      image = form_field(req, "image");
      format = form_field(req, "format");
      doc_id = form_field(req, "doc_id");
    } else {
      const json body = parse_body(req);
      ocr = string_field(body, "ocr");
      if (body.contains("format")) format = string_field(body, "format");
      if (body.contains("doc_id")) doc_id = string_field(body, "doc_id");
    }
    if (!ocr) throw Error(ErrorCode::kMalformedInput, "missing 'ocr' part");
    if (doc_id && doc_id->empty()) doc_id.reset();
    const OcrFormat f = parse_ocr_format(format.value_or("tsv"));
    std::optional<std::string_view> image_view;
    if (image && !image->empty()) image_view = *image;
    send_ok(res, summary_to_json(engine.ingest(doc_id, *ocr, f, image_view)));
  }));

  server.Get("/documents", guarded("documents", [&engine](const httplib::Request&,
                                                           httplib::Response& res) {
    send_ok(res, json{{"documents", engine.document_ids()}});
  }));

  server.Get("/documents/:id/entities",
             guarded("entities", [&engine](const httplib::Request& req, httplib::Response& res) {
               send_ok(res, entities_to_json(engine.document(req.path_params.at("id"))));
             }));

  server.Get("/documents/:id/tables/:name",
             guarded("relation_store", [&engine](const httplib::Request& req,
                                                 httplib::Response& res) {
               const RelationDB db = engine.document(req.path_params.at("id"));
               const std::string& name = req.path_params.at("name");
               if (name == kTempTable || !db.has_table(name)) {
                 send_error(res, 404, "relation_store", "UnknownTable",
                            "unknown table '" + name + "'");
                 return;
               }
               send_ok(res, relation_to_json(db.get_table(name)));
             }));

  server.Get("/documents/:id/template-match",
             guarded("template_registry", [&engine](const httplib::Request& req,
                                                    httplib::Response& res) {
               const TemplateMatch m = engine.match_document(req.path_params.at("id"));
               send_ok(res, json{{"signature_id", m.signature_id}, {"score", m.score}});
             }));

  server.Post("/sessions", guarded("session", [&engine](const httplib::Request& req,
                                                        httplib::Response& res) {
    const json body = parse_body(req);
    const std::string doc_id = string_field(body, "doc_id");
    send_ok(res, json{{"session_id", engine.create_session(doc_id)}, {"doc_id", doc_id}});
  }));

  auto session_query = [&engine](bool nl) {
    return [&engine, nl](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      const std::string text = string_field(body, "text");
      const Response r = nl ? engine.handle_utterance(req.path_params.at("id"), text)
                            : engine.handle_sql(req.path_params.at("id"), text);
      if (r.kind == Response::Kind::kError) {
        send(res, http_status(*r.error_code),
             json{{"ok", false},
                  {"error",
                   {{"stage", r.stage},
                    {"code", std::string(error_code_name(*r.error_code))},
                    {"message", r.message}}},
                  {"data", response_to_json(r)}});
        return;
      }
      send_ok(res, response_to_json(r));
    };
  };
  server.Post("/sessions/:id/utterance", guarded("session", session_query(true)));
  server.Post("/sessions/:id/sql", guarded("session", session_query(false)));

  server.Get("/sessions/:id/recording",
             guarded("session", [&engine](const httplib::Request& req, httplib::Response& res) {
               auto s = engine.session(req.path_params.at("id"));
               std::lock_guard lock(s->mu);
               json steps = json::array();
               for (const WorkflowStep& st : s->recording().steps()) {
                 steps.push_back({{"utterance", st.utterance}, {"sql", st.sql}});
               }
               json temp = s->db().temp() ? relation_to_json(*s->db().temp()) : json(nullptr);
               send_ok(res, json{{"session_id", s->id()},
                                 {"doc_id", s->doc_id()},
                                 {"steps", steps},
                                 {"temp", temp}});
             }));

  server.Post("/workflows", guarded("workflow", [&engine](const httplib::Request& req,
                                                          httplib::Response& res) {
    const json body = parse_body(req);
    const Workflow wf =
        engine.save_workflow(string_field(body, "session_id"), string_field(body, "name"));
    send_ok(res, workflow_to_json(wf));
  }));

  server.Get("/workflows", guarded("workflow", [&engine](const httplib::Request&,
                                                         httplib::Response& res) {
    json list = json::array();
    for (const std::string& name : engine.workflow_names()) {
      list.push_back(workflow_to_json(engine.workflows().get(name)));
    }
    send_ok(res, json{{"workflows", list}});
  }));

  server.Post("/workflows/:name/apply",
              guarded("workflow", [&engine](const httplib::Request& req, httplib::Response& res) {
                const json body = parse_body(req);
                send_ok(res, apply_result_to_json(engine.apply_workflow(
                                 req.path_params.at("name"), string_field(body, "doc_id"))));
              }));

  server.Post("/templates", guarded("template_registry", [&engine](const httplib::Request& req,
                                                                    httplib::Response& res) {
    const json body = parse_body(req);
    const std::string id =
        engine.register_template(string_field(body, "doc_id"), string_field(body, "name"));
    send_ok(res, json{{"signature_id", id}});
  }));

  server.Get("/templates", guarded("template_registry", [&engine](const httplib::Request&,
                                                                   httplib::Response& res) {
    send_ok(res, json{{"templates", engine.templates().names()}});
  }));
}

}  // namespace docrelate
