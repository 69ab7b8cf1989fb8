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

#ifndef DOCRELATE_ENTITIES_H_
#define DOCRELATE_ENTITIES_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "docrelate/config.h"
#include "docrelate/geometry.h"
#include "docrelate/ingest.h"
#include "docrelate/lexicon.h"
#include "docrelate/raster_ops.h"

namespace docrelate {

struct Line {
  int line_id = 0;
  std::string text;
  BBox bbox;
  std::vector<int> word_ids;  // ordered by x0
  std::optional<int> block_id;
  std::optional<int> box_id;
};

struct TextBlock {
  int block_id = 0;
  std::vector<int> line_ids;  // ordered by y0
  BBox bbox;
};

enum class Direction { kLeftOf, kRightOf, kAbove, kBelow };
std::string_view direction_table(Direction d);

struct AdjacencyRow {
  Direction relation = Direction::kRightOf;
  int anchor_word_id = 0;
  std::optional<int> neighbor_word_id;
  std::string anchor_text;
  std::string neighbor_text = "null";
};

struct LineBelowRow {
  int word_id = 0;
  std::string word_text;
  std::optional<int> below_line_id;
  std::string below_line_text = "null";
  int block_id = 0;
};

struct KeyValueRow {
  std::string key_text;
  std::string value_text;
  std::string source = "colon";
  int line_id = 0;
};

// Declaration order is the tagging priority.
enum class DataType { kDate, kAmount, kSwiftCode, kPhone, kZip, kCountry, kCity, kNone };
std::string_view data_type_name(DataType t);

struct TypedWordRow {
  int word_id = 0;
  DataType data_type = DataType::kNone;
};

// Two words chain into one line when they overlap vertically by at least
// half the smaller height and the horizontal gap between them lies in
// [-2, line_gap_factor * median word height]. Lines are ordered by (y0, x0).
std::vector<Line> cluster_lines(std::span<const Word> words,
                                const EngineConfig& config);

// Lines are visited in (y0, x0) order. A line extends the open block whose
// last line starts within block_x_tol of it and ends no more than twice its
// own height above it; otherwise it opens a new block. Among several
// candidate blocks the smallest vertical gap wins.
std::vector<TextBlock> cluster_blocks(std::span<const Line> lines,
                                      const EngineConfig& config);

// The pairwise block predicate: may `b` directly follow `a` in one block?
bool block_predicate(const Line& a, const Line& b, double x_tolerance);
double block_x_tolerance(std::span<const Line> lines, const EngineConfig& config);

struct BoxMembership {
  std::vector<std::optional<int>> line_box;  // parallel to lines
  std::vector<std::optional<int>> word_box;  // parallel to words
};

// Smallest-area box holding at least min_fraction of the entity's area;
// equal areas fall back to the lower box_id.
BoxMembership assign_box_membership(std::span<const Line> lines,
                                    std::span<const Word> words,
                                    std::span<const BoxRegion> boxes,
                                    double min_fraction);

// Four rows per word (leftof, rightof, above, below), in word order. Nearest
// candidate wins; ties go to the smaller x0, then the smaller word_id.
std::vector<AdjacencyRow> compute_adjacency(std::span<const Word> words);

std::vector<LineBelowRow> line_below_word(std::span<const TextBlock> blocks,
                                          std::span<const Line> lines,
                                          std::span<const Word> words);

std::vector<KeyValueRow> extract_key_values(std::span<const Line> lines,
                                            const EngineConfig& config);

// Tags every word with exactly one type. Multi-word patterns (for example
// "31 Dec 2019" or "New York") are matched within each line.
std::vector<TypedWordRow> tag_data_types(std::span<const Word> words,
                                         std::span<const Line> lines,
                                         const Lexicons& lexicons);

// Single-token classification, ignoring line context and lexicons.
DataType classify_token(std::string_view token);

struct DocumentEntities {
  std::string doc_id;
  PageSize page_size;
  std::vector<Word> words;
  std::vector<Line> lines;
  std::vector<TextBlock> blocks;
  std::vector<BoxRegion> boxes;
  std::vector<int> word_line;                // parallel to words
  std::vector<std::optional<int>> word_box;  // parallel to words
  std::vector<AdjacencyRow> adjacency;
  std::vector<LineBelowRow> line_below;
  std::vector<KeyValueRow> key_values;
  std::vector<TypedWordRow> typed_words;
};

// Runs every derivation above. Boxes are detected only when a raster is
// present. Word ids must be 0..n-1 in order, as produced by ingest.
DocumentEntities build_entities(const RawDocument& doc,
                                const EngineConfig& config,
                                const Lexicons& lexicons);

}  // namespace docrelate

#endif  // DOCRELATE_ENTITIES_H_
