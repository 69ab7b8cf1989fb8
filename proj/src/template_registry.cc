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

#include "docrelate/template_registry.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <regex>
#include <sstream>

#include "docrelate/error.h"
#include "docrelate/text_util.h"

namespace docrelate {

namespace {

std::int64_t int_cell(const Relation& r, const Row& row, std::string_view column) {
  return std::get<std::int64_t>(row[*r.column_index(column)]);
}

const std::string& text_cell(const Relation& r, const Row& row, std::string_view column) {
  return std::get<std::string>(row[*r.column_index(column)]);
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void validate_name(std::string_view name) {
  static const std::regex re("^[A-Za-z0-9][A-Za-z0-9_.-]*$");
  if (!std::regex_match(name.begin(), name.end(), re) || name.size() > 128) {
    throw Error(ErrorCode::kMalformedInput, "invalid name '" + std::string(name) + "'");
  }
}

TemplateSignature compute_signature(const RelationDB& db, std::string signature_id) {
  TemplateSignature sig;
  sig.signature_id = std::move(signature_id);
  if (!db.has_table("words")) return sig;
  const Relation& words = db.get_table("words");

  std::map<std::int64_t, std::string> types;
  if (db.has_table("typed_words")) {
    const Relation& typed = db.get_table("typed_words");
    for (const Row& row : typed.rows) {
      types[int_cell(typed, row, "word_id")] = text_cell(typed, row, "data_type");
    }
  }

  const PageSize page = db.page_size();
  const double cw = static_cast<double>(page.width) / kGridSide;
  const double ch = static_cast<double>(page.height) / kGridSide;
  double total = 0.0;
  for (const Row& row : words.rows) {
    const std::int64_t id = int_cell(words, row, "word_id");
    const auto type = types.find(id);
    if (type == types.end() || type->second == "NONE") {
      const std::string term = normalize_term(text_cell(words, row, "text"));
      if (!term.empty()) sig.vocab.insert(term);
    }
    if (page.width <= 0 || page.height <= 0) continue;
    const double x0 = static_cast<double>(int_cell(words, row, "x0"));
    const double y0 = static_cast<double>(int_cell(words, row, "y0"));
    const double x1 = static_cast<double>(int_cell(words, row, "x1"));
    const double y1 = static_cast<double>(int_cell(words, row, "y1"));
    for (int gy = 0; gy < kGridSide; ++gy) {
      const double oy = std::min(y1, (gy + 1) * ch) - std::max(y0, gy * ch);
      if (oy <= 0) continue;
      for (int gx = 0; gx < kGridSide; ++gx) {
        const double ox = std::min(x1, (gx + 1) * cw) - std::max(x0, gx * cw);
        if (ox <= 0) continue;
        sig.grid[gy * kGridSide + gx] += ox * oy;
        total += ox * oy;
      }
    }
  }
  if (total > 0) {
    for (double& v : sig.grid) v /= total;
  }
  return sig;
}

double signature_score(const TemplateSignature& a, const TemplateSignature& b) {
  std::size_t common = 0;
  for (const std::string& t : a.vocab) common += b.vocab.count(t);
  const std::size_t uni = a.vocab.size() + b.vocab.size() - common;
  const double jaccard = uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
  double l1 = 0.0;
  for (std::size_t i = 0; i < a.grid.size(); ++i) l1 += std::abs(a.grid[i] - b.grid[i]);
  const double layout = std::clamp(1.0 - l1 / 2.0, 0.0, 1.0);
  return 0.5 * jaccard + 0.5 * layout;
}

std::string serialize_signature(const TemplateSignature& sig) {
  std::string out = sig.signature_id + "\ngrid";
  for (double v : sig.grid) out += " " + format_double(v);
  out += "\n";
  for (const std::string& t : sig.vocab) out += escape_field(t) + "\n";
  return out;
}

TemplateSignature parse_signature(std::string_view text) {
  std::istringstream in{std::string(text)};
  TemplateSignature sig;
  std::string line;
  if (!std::getline(in, sig.signature_id)) {
    throw Error(ErrorCode::kMalformedInput, "signature file is empty");
  }
  if (!std::getline(in, line)) throw Error(ErrorCode::kMalformedInput, "signature lacks grid");
  const std::vector<std::string> parts = split_whitespace(line);
  if (parts.size() != sig.grid.size() + 1 || parts[0] != "grid") {
    throw Error(ErrorCode::kMalformedInput, "signature grid needs 64 values");
  }
  for (std::size_t i = 0; i < sig.grid.size(); ++i) {
    const std::string& p = parts[i + 1];
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), sig.grid[i]);
    if (ec != std::errc() || ptr != p.data() + p.size() || !(sig.grid[i] >= 0)) {
      throw Error(ErrorCode::kMalformedInput, "bad grid value '" + p + "'");
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty()) sig.vocab.insert(unescape_field(line));
  }
  return sig;
}

TemplateRegistry::TemplateRegistry(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(*dir_, ec);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(*dir_, ec)) {
    if (entry.path().extension() == ".sig") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    TemplateSignature sig = parse_signature(ss.str());
    sig.signature_id = f.stem().string();
    entries_.push_back(std::move(sig));
  }
}

std::string TemplateRegistry::register_template(const std::string& name, TemplateSignature sig) {
  validate_name(name);
  std::unique_lock lock(mu_);
  for (const TemplateSignature& e : entries_) {
    if (e.signature_id == name) {
      throw Error(ErrorCode::kDuplicateName, "template '" + name + "' already exists");
    }
  }
  sig.signature_id = name;
  if (dir_) {
    const auto path = *dir_ / (name + ".sig");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << serialize_signature(sig);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  }
  entries_.push_back(std::move(sig));
  return name;
}

TemplateMatch TemplateRegistry::match(const TemplateSignature& sig, double threshold) const {
  std::shared_lock lock(mu_);
  TemplateMatch best{std::string(kUnknownTemplate), 0.0};
  const TemplateSignature* winner = nullptr;
  for (const TemplateSignature& e : entries_) {
    const double s = signature_score(sig, e);
    if (winner == nullptr || s > best.score) {
      winner = &e;
      best.score = s;
    }
  }
  if (winner != nullptr && best.score >= threshold) best.signature_id = winner->signature_id;
  return best;
}

TemplateSignature TemplateRegistry::get(std::string_view name) const {
  std::shared_lock lock(mu_);
  for (const TemplateSignature& e : entries_) {
    if (e.signature_id == name) return e;
  }
  throw Error(ErrorCode::kUnknownTemplate, "unknown template '" + std::string(name) + "'");
}

std::vector<std::string> TemplateRegistry::names() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const TemplateSignature& e : entries_) out.push_back(e.signature_id);
  return out;
}

std::size_t TemplateRegistry::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

TemplateMatch match_template(const TemplateSignature& sig, const TemplateRegistry& registry,
                             double threshold) {
  return registry.match(sig, threshold);
}

}  // namespace docrelate
