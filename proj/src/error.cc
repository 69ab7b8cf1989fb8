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

#include "docrelate/error.h"

#include <utility>

namespace docrelate {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kUnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::kMalformedImage: return "MalformedImage";
    case ErrorCode::kBadKernel: return "BadKernel";
    case ErrorCode::kNoRaster: return "NoRaster";
    case ErrorCode::kLexiconLoadError: return "LexiconLoadError";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kUnknownTable: return "UnknownTable";
    case ErrorCode::kUnknownColumn: return "UnknownColumn";
    case ErrorCode::kTypeMismatch: return "TypeMismatch";
    case ErrorCode::kNonScalarSubquery: return "NonScalarSubquery";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kEmptyUtterance: return "EmptyUtterance";
    case ErrorCode::kUnmappableUtterance: return "UnmappableUtterance";
    case ErrorCode::kUnknownRelationPhrase: return "UnknownRelationPhrase";
    case ErrorCode::kSlotArityMismatch: return "SlotArityMismatch";
    case ErrorCode::kEmptyRecording: return "EmptyRecording";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kUnknownWorkflow: return "UnknownWorkflow";
    case ErrorCode::kUnknownTemplate: return "UnknownTemplate";
    case ErrorCode::kUnknownDocument: return "UnknownDocument";
    case ErrorCode::kUnknownSession: return "UnknownSession";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string format_parse_error(std::size_t token_index, std::size_t offset,
                               const std::vector<std::string>& expected,
                               const std::string& found) {
  std::string msg = "parse error at token " + std::to_string(token_index) +
                    " (offset " + std::to_string(offset) + "): expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
    msg += expected[i];
  }
  msg += ", found " + found;
  return msg;
}

}  // namespace

ParseError::ParseError(std::size_t token_index, std::size_t offset,
                       std::vector<std::string> expected,
                       const std::string& found)
    : Error(ErrorCode::kParseError,
            format_parse_error(token_index, offset, expected, found)),
      token_index_(token_index),
      offset_(offset),
      expected_(std::move(expected)) {}

}  // namespace docrelate
