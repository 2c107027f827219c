// spkfuse/error.h

// Copyright 2026  The spkfuse Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPKFUSE_ERROR_H_
#define SPKFUSE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spkfuse {

enum class ErrorKind {
  kInvalidArgument,  // precondition on a parameter violated
  kParse,            // malformed text or binary payload
  kDuplicate,        // repeated (enroll, test) pair
  kAlignment,        // score sets / trials do not cover the same pairs
  kDimension,        // vector dimensions disagree
  kMissing,          // referenced utterance or label absent
  kNumerical,        // degenerate or non-finite numerics
  kIo,               // file system failure
};

/// All library failures are reported by throwing Error (or a subclass).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure in a line-oriented text format. line() is 1-based; 0 means
/// the error is not tied to a specific line (binary payloads).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : Error(ErrorKind::kParse,
              line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace spkfuse

#endif  // SPKFUSE_ERROR_H_
