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

#ifndef DOCRELATE_INGEST_H_
#define DOCRELATE_INGEST_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docrelate/config.h"
#include "docrelate/geometry.h"
#include "docrelate/raster.h"

namespace docrelate {

// One OCR token. word_id is assigned by the parser in reading order.
struct Word {
  int word_id = 0;
  std::string text;
  BBox bbox;
  double confidence = 1.0;

  friend bool operator==(const Word&, const Word&) = default;
};

struct PageSize {
  int width = 0;
  int height = 0;
  friend bool operator==(const PageSize&, const PageSize&) = default;
};

struct RawDocument {
  std::string doc_id;
  std::vector<Word> words;
  std::optional<Raster> raster;
  PageSize page_size;
};

enum class OcrFormat { kTsv, kHocr, kJsonWords };
enum class ImageFormat { kPgm, kPng };

// Throws UnsupportedFormat for anything but "tsv", "hocr" or "jsonwords".
OcrFormat parse_ocr_format(std::string_view name);
std::string_view ocr_format_name(OcrFormat format);
ImageFormat parse_image_format(std::string_view name);
// Sniffs the magic bytes; throws MalformedImage when neither matches.
ImageFormat detect_image_format(std::string_view payload);

// Decodes OCR output into words sorted by (y0, x0) with ids 0..n-1. Tokens
// with empty text, non-positive confidence or non-positive area are dropped.
std::vector<Word> parse_ocr_words(std::string_view payload, OcrFormat format);

// Inverse of the jsonwords reader.
std::string words_to_jsonwords(const std::vector<Word>& words);

Raster load_raster(std::string_view payload, ImageFormat format);
std::string encode_pgm(const Raster& raster);
std::string encode_png(const Raster& raster);

struct Threshold {
  enum class Method { kOtsu, kFixed } method = Method::kOtsu;
  int value = 128;

  static Threshold otsu() { return {Method::kOtsu, 0}; }
  static Threshold fixed(int t) { return {Method::kFixed, t}; }
};

// Returns t maximizing the between-class variance when pixels < t are ink.
// The smallest such t wins ties; a uniform image yields 0 (no ink).
int otsu_threshold(const Raster& raster);

BinaryRaster binarize(const Raster& raster, Threshold threshold);

RawDocument ingest_document(std::string doc_id, std::string_view ocr_payload,
                            OcrFormat format,
                            std::optional<std::string_view> raster_payload,
                            const EngineConfig& config);

}  // namespace docrelate

#endif  // DOCRELATE_INGEST_H_
