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

// Command-line front end: ingest documents, query them with SQL or natural
// language, manage workflows and templates, and run the HTTP service.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "docrelate/engine.h"
#include "docrelate/entities.h"
#include "docrelate/service.h"
#include "docrelate/text_util.h"

namespace {

using namespace docrelate;

constexpr int kPipelineError = 1;
constexpr int kUsageError = 2;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Globals {
  std::string data;
  std::string lexicons;
  std::string config;
  bool header = false;
};

EngineConfig load_config(const Globals& g) {
  return g.config.empty() ? EngineConfig{} : config_from_json(read_file(g.config));
}

EngineOptions engine_options(const Globals& g) {
  EngineOptions o;
  o.data_dir = g.data;
  o.config = load_config(g);
  if (!g.lexicons.empty()) o.lexicons = Lexicons::load_dir(g.lexicons);
  return o;
}

// A document argument is either a database directory or an id under
// <data>/db/.
RelationDB resolve_document(const Globals& g, const std::string& doc) {
  const std::filesystem::path direct(doc);
  if (std::filesystem::exists(direct / "meta.json")) return load_db(direct);
  const auto under = std::filesystem::path(g.data) / "db" / doc;
  if (std::filesystem::exists(under / "meta.json")) return load_db(under);
  throw Error(ErrorCode::kUnknownDocument, "no database for '" + doc + "'");
}

void print_response(const Response& r, bool header, std::ostream& out, std::ostream& err) {
  switch (r.kind) {
    case Response::Kind::kResult:
      if (r.applied) {
        for (std::size_t i = 0; i < r.applied->steps.size(); ++i) {
          const StepResult& s = r.applied->steps[i];
          err << "step " << i + 1 << ": " << s.sql
              << (s.error ? "  [" + *s.error + "]" : s.empty ? "  [empty]" : "") << "\n";
        }
      }
      if (r.relation) out << relation_to_tsv(*r.relation, header);
      break;
    case Response::Kind::kAck:
      out << "ok: " << r.message << "\n";
      for (const std::string& n : r.workflow_names) out << n << "\n";
      break;
    case Response::Kind::kError:
      err << "error [" << r.stage << "]: " << r.message << "\n";
      break;
  }
  for (const std::string& w : r.warnings) err << "warning: " << w << "\n";
}

std::shared_ptr<Session> open_session(Engine& engine, const Globals& g, const std::string& doc) {
  RelationDB db = resolve_document(g, doc);
  const std::string id = db.doc_id();
  engine.add_document(std::move(db), false);
  return engine.session(engine.create_session(id));
}

bool is_sql(const std::string& line) { return starts_with_ci(line, "select "); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"docrelate: spatial relations and queries over OCR'd documents"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  const char* env = std::getenv("DOCRELATE_DATA");
  g.data = env != nullptr ? env : ".";
  app.add_option("--data", g.data, "Data directory (default $DOCRELATE_DATA or .)");
  app.add_option("--lexicons", g.lexicons, "Directory with cities.txt, countries.txt, aliases.txt");
  app.add_option("--config", g.config, "JSON file overriding engine settings");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Build a relational database from OCR output");
  std::string ocr_path, image_path, format = "tsv", doc_id, out_dir;
  ingest->add_option("ocr", ocr_path, "OCR file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--image", image_path, "Page raster (PGM or PNG)")->check(CLI::ExistingFile);
  ingest->add_option("--format", format, "OCR format")
      ->check(CLI::IsMember({"tsv", "hocr", "jsonwords", "json"}));
  ingest->add_option("--doc-id", doc_id, "Document id (default: file stem)");
  ingest->add_option("--out", out_dir, "Database root (default <data>/db)");

  // query
  auto* query = app.add_subcommand("query", "Run one SQL or natural-language query");
  std::string query_doc, sql_text, nl_text;
  query->add_option("doc", query_doc, "Database directory or document id")->required();
  auto* sql_opt = query->add_option("--sql", sql_text, "SQL text");
  auto* nl_opt = query->add_option("--nl", nl_text, "Natural-language query");
  sql_opt->excludes(nl_opt);
  query->add_flag("--header", g.header, "Print column names");

  // repl
  auto* repl = app.add_subcommand("repl", "Conversational console reading standard input");
  std::string repl_doc;
  repl->add_option("doc", repl_doc, "Database directory or document id")->required();
  repl->add_flag("--header", g.header, "Print column names");

  // workflow
  auto* workflow = app.add_subcommand("workflow", "Save, apply or list workflows");
  workflow->require_subcommand(1);
  auto* wf_save = workflow->add_subcommand("save", "Run utterances from a file and save them");
  std::string wf_name, wf_doc, wf_file;
  wf_save->add_option("name", wf_name)->required();
  wf_save->add_option("--doc", wf_doc)->required();
  wf_save->add_option("--nl-file", wf_file, "One utterance per line")
      ->required()
      ->check(CLI::ExistingFile);
  auto* wf_apply = workflow->add_subcommand("apply", "Replay a workflow on a document");
  wf_apply->add_option("name", wf_name)->required();
  wf_apply->add_option("--doc", wf_doc)->required();
  wf_apply->add_flag("--header", g.header, "Print column names");
  auto* wf_list = workflow->add_subcommand("list", "List saved workflows");

  // template
  auto* tmpl = app.add_subcommand("template", "Register or match template signatures");
  tmpl->require_subcommand(1);
  auto* t_register = tmpl->add_subcommand("register", "Register a document as a template");
  std::string t_name, t_doc;
  t_register->add_option("name", t_name)->required();
  t_register->add_option("--doc", t_doc)->required();
  auto* t_match = tmpl->add_subcommand("match", "Match a document against the registry");
  t_match->add_option("--doc", t_doc)->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port)->check(CLI::Range(0, 65535));
  serve->add_option("--host", host);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*ingest) {
      const OcrFormat f = parse_ocr_format(format);
      const std::string id =
          doc_id.empty() ? std::filesystem::path(ocr_path).stem().string() : doc_id;
      validate_name(id);
      const std::string payload = read_file(ocr_path);
      std::optional<std::string> image;
      if (!image_path.empty()) image = read_file(image_path);
      const EngineConfig config = load_config(g);
      const Lexicons lex = !g.lexicons.empty() ? Lexicons::load_dir(g.lexicons)
                           : std::filesystem::is_directory(std::filesystem::path(g.data) / "lexicons")
                               ? Lexicons::load_dir(std::filesystem::path(g.data) / "lexicons")
                               : Lexicons{};
      std::optional<std::string_view> image_view;
      if (image) image_view = *image;
      const RelationDB db =
          populate(build_entities(ingest_document(id, payload, f, image_view, config), config, lex));
      const auto root = out_dir.empty() ? std::filesystem::path(g.data) / "db"
                                        : std::filesystem::path(out_dir);
      dump_db(db, root / id);
      const DocumentSummary s = summarize(db);
      std::cout << "doc_id\t" << s.doc_id << "\n";
      for (const auto& [name, n] : s.counts) std::cout << name << "\t" << n << "\n";
      return 0;
    }

    if (*query) {
      if (sql_opt->count() == 0 && nl_opt->count() == 0) {
        std::cerr << "query needs --sql or --nl\n";
        return kUsageError;
      }
      Engine engine(engine_options(g));
      auto s = open_session(engine, g, query_doc);
      const Response r = sql_opt->count() > 0 ? engine.handle_sql(*s, sql_text)
                                              : engine.handle_utterance(*s, nl_text);
      print_response(r, g.header, std::cout, std::cerr);
      return r.kind == Response::Kind::kError ? kPipelineError : 0;
    }

    if (*repl) {
      Engine engine(engine_options(g));
      auto s = open_session(engine, g, repl_doc);
      std::string line;
      while (std::getline(std::cin, line)) {
        if (trim(line).empty()) continue;
        if (trim(line) == "quit" || trim(line) == "exit") break;
        const Response r = is_sql(trim(line)) ? engine.handle_sql(*s, line)
                                              : engine.handle_utterance(*s, line);
        print_response(r, g.header, std::cout, std::cout);
        std::cout.flush();
      }
      return 0;
    }

    if (*workflow) {
      Engine engine(engine_options(g));
      if (*wf_save) {
        auto s = open_session(engine, g, wf_doc);
        std::istringstream lines(read_file(wf_file));
        std::string line;
        while (std::getline(lines, line)) {
          if (trim(line).empty() || trim(line)[0] == '#') continue;
          const Response r = is_sql(trim(line)) ? engine.handle_sql(*s, line)
                                                : engine.handle_utterance(*s, line);
          if (r.kind == Response::Kind::kError) {
            print_response(r, false, std::cout, std::cerr);
            return kPipelineError;
          }
        }
        const Workflow wf = engine.save_workflow(*s, wf_name);
        std::cout << "saved\t" << wf.name << "\t" << wf.steps.size() << " step(s)\ttemplate "
                  << wf.template_id << "\n";
        return 0;
      }
      if (*wf_apply) {
        RelationDB db = resolve_document(g, wf_doc);
        const std::string id = db.doc_id();
        engine.add_document(std::move(db), false);
        const ApplyResult r = engine.apply_workflow(wf_name, id);
        for (std::size_t i = 0; i < r.steps.size(); ++i) {
          const StepResult& st = r.steps[i];
          std::cerr << "step " << i + 1 << ": " << st.sql
                    << (st.error ? "  [" + *st.error + "]" : st.empty ? "  [empty]" : "") << "\n";
        }
        for (const std::string& w : r.warnings) std::cerr << "warning: " << w << "\n";
        if (!r.steps.empty() && r.steps.back().relation) {
          std::cout << relation_to_tsv(*r.steps.back().relation, g.header);
        }
        return 0;
      }
      if (*wf_list) {
        for (const std::string& n : engine.workflow_names()) {
          const Workflow wf = engine.workflows().get(n);
          std::cout << wf.name << "\t" << wf.template_id << "\t" << wf.steps.size() << "\n";
        }
        return 0;
      }
    }

    if (*tmpl) {
      Engine engine(engine_options(g));
      RelationDB db = resolve_document(g, t_doc);
      const std::string id = db.doc_id();
      engine.add_document(std::move(db), false);
      if (*t_register) {
        std::cout << engine.register_template(id, t_name) << "\n";
      } else {
        const TemplateMatch m = engine.match_document(id);
        std::cout << m.signature_id << "\t" << m.score << "\n";
      }
      return 0;
    }

    if (*serve) {
      Engine engine(engine_options(g));
      httplib::Server server;
      install_routes(server, engine);
      std::cerr << "listening on " << host << ":" << port << "\n";
      if (!server.listen(host, port)) {
        std::cerr << "cannot listen on " << host << ":" << port << "\n";
        return kPipelineError;
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return kPipelineError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPipelineError;
  }
  return kUsageError;
}
