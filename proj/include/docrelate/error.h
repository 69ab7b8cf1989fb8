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

#ifndef DOCRELATE_ERROR_H_
#define DOCRELATE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace docrelate {

enum class ErrorCode {
  kMalformedInput,
  kUnsupportedFormat,
  kMalformedImage,
  kBadKernel,
  kNoRaster,
  kLexiconLoadError,
  kSchemaViolation,
  kUnknownTable,
  kUnknownColumn,
  kTypeMismatch,
  kNonScalarSubquery,
  kParseError,
  kEmptyUtterance,
  kUnmappableUtterance,
  kUnknownRelationPhrase,
  kSlotArityMismatch,
  kEmptyRecording,
  kDuplicateName,
  kUnknownWorkflow,
  kUnknownTemplate,
  kUnknownDocument,
  kUnknownSession,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

// Base exception for every failure raised by the engine. The code is stable
// and is what the service layer maps onto HTTP status codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the SQL parser. token_index is 1-based; offset is the byte offset
// of the offending token in the query text.
class ParseError : public Error {
 public:
  ParseError(std::size_t token_index, std::size_t offset,
             std::vector<std::string> expected, const std::string& found);

  std::size_t token_index() const { return token_index_; }
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t token_index_;
  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace docrelate

#endif  // DOCRELATE_ERROR_H_
