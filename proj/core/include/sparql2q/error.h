// Copyright 2026 The sparql2q Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPARQL2Q_ERROR_H_
#define SPARQL2Q_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sparql2q {

// Error classes raised by the library. The CLI prints the class name as the
// machine-parsable prefix of its one-line failure message.
enum class ErrorCode {
  kMalformedInput,
  kDuplicateEntity,
  kMissingInput,
  kConfigConflict,
  kUnknownEntity,
  kSyntaxError,
  kUnsupportedFeature,
  kEvaluationError,
  kNothingToAbstract,
  kNotInstantiable,
  kUnmappedPlaceholder,
  kMissingDescription,
  kTransportError,
  kProtocolError,
  kInvalidArgument,
  kInvariantViolation,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Syntax errors carry the byte offset where parsing stopped.
class SyntaxError : public Error {
 public:
  SyntaxError(size_t position, const std::string &message)
      : Error(ErrorCode::kSyntaxError,
              "at offset " + std::to_string(position) + ": " + message),
        position_(position) {}

  size_t position() const { return position_; }

 private:
  size_t position_;
};

// Raised by the remote generator after all attempts failed.
class TransportError : public Error {
 public:
  TransportError(int attempts, const std::string &message)
      : Error(ErrorCode::kTransportError,
              message + " (after " + std::to_string(attempts) + " attempts)"),
        attempts_(attempts) {}

  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

}  // namespace sparql2q

#endif  // SPARQL2Q_ERROR_H_
