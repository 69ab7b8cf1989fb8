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

#ifndef DOCRELATE_TESTS_GENERATORS_H_
#define DOCRELATE_TESTS_GENERATORS_H_

#include <random>
#include <string>
#include <vector>

#include "docrelate/geometry.h"
#include "docrelate/ingest.h"
#include "docrelate/raster.h"

namespace docrelate::testing {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi);  // inclusive
bool coin(Rng& rng, double p = 0.5);

// Grayscale page with 1-4 rectangle outlines (1-3 px strokes, at least
// 80x60) and glyph-like strokes scattered around and inside them. Rectangles
// are at least 12 px apart and glyphs stay 5 px clear of every outline.
struct BoxPage {
  Raster raster;
  std::vector<BBox> rects;  // ground truth, half-open
};
BoxPage make_box_page(Rng& rng);

// Random ink mask with blob-like structure.
BinaryRaster random_binary(Rng& rng, int max_w, int max_h);

// Words laid out on text rows with jittered baselines, widths and gaps,
// sorted into ingest order. Roughly `n` words.
std::vector<Word> random_page_words(Rng& rng, int n);

// OCR TSV for a word list (the ingest tsv format).
std::string words_to_tsv(const std::vector<Word>& words);

// Nine synthetic form templates, each rendered as jittered instances. A
// template has fixed labels at fixed places and variable values beside them.
struct FormTemplate {
  std::string name;
  struct Label {
    std::vector<std::string> words;
    int x = 0;
    int y = 0;
    int field_kind = 0;  // which value generator fills the slot to its right
  };
  std::vector<Label> labels;
};
std::vector<FormTemplate> make_form_templates(std::uint64_t seed);
// jitter 0 renders the reference layout; otherwise every word moves by up
// to +-jitter px and every variable value is redrawn.
std::vector<Word> render_form(const FormTemplate& t, Rng& rng, int jitter);

// Measured width of a word: 9 px per character, height 12.
BBox word_box(int x, int y, const std::string& text);

}  // namespace docrelate::testing

#endif  // DOCRELATE_TESTS_GENERATORS_H_
