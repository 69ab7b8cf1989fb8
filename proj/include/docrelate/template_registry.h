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

#ifndef DOCRELATE_TEMPLATE_REGISTRY_H_
#define DOCRELATE_TEMPLATE_REGISTRY_H_

#include <array>
#include <filesystem>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "docrelate/relation_store.h"

namespace docrelate {

inline constexpr int kGridSide = 8;
inline constexpr std::string_view kUnknownTemplate = "unknown";

// Layout fingerprint of a document: the static vocabulary (untyped words,
// lowercased and punctuation-stripped) plus an 8x8 histogram of word-box
// area over the page, normalized to sum to 1.
struct TemplateSignature {
  std::string signature_id;
  std::set<std::string> vocab;
  std::array<double, kGridSide * kGridSide> grid{};

  friend bool operator==(const TemplateSignature&, const TemplateSignature&) = default;
};

TemplateSignature compute_signature(const RelationDB& db, std::string signature_id = "");

// 0.5 * Jaccard(vocab) + 0.5 * (1 - L1(grid) / 2). The Jaccard index of two
// empty vocabularies is 0.
double signature_score(const TemplateSignature& a, const TemplateSignature& b);

struct TemplateMatch {
  std::string signature_id;  // kUnknownTemplate below the threshold
  double score = 0.0;
};

// Text form: id line, "grid" followed by 64 values, then one vocab term per
// line.
std::string serialize_signature(const TemplateSignature& sig);
TemplateSignature parse_signature(std::string_view text);

// Signatures in registration order. Optionally mirrored to <dir>/<name>.sig;
// on load, files are registered in name order. Thread-safe.
class TemplateRegistry {
 public:
  TemplateRegistry() = default;
  explicit TemplateRegistry(std::filesystem::path dir);

  // Throws DuplicateName. Returns the signature id (the name).
  std::string register_template(const std::string& name, TemplateSignature sig);
  // Highest score; ties go to the earlier registration.
  TemplateMatch match(const TemplateSignature& sig, double threshold) const;
  // Throws UnknownTemplate.
  TemplateSignature get(std::string_view name) const;
  std::vector<std::string> names() const;
  std::size_t size() const;

 private:
  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mu_;
  std::vector<TemplateSignature> entries_;
};

TemplateMatch match_template(const TemplateSignature& sig, const TemplateRegistry& registry,
                             double threshold = 0.6);

// Workflow and template names: a letter or digit, then letters, digits,
// '_', '-' or '.'. Throws MalformedInput otherwise.
void validate_name(std::string_view name);

}  // namespace docrelate

#endif  // DOCRELATE_TEMPLATE_REGISTRY_H_
