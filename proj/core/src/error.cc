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

#include "sparql2q/error.h"

namespace sparql2q {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedInput: return "MalformedInput";
    case ErrorCode::kDuplicateEntity: return "DuplicateEntity";
    case ErrorCode::kMissingInput: return "MissingInput";
    case ErrorCode::kConfigConflict: return "ConfigConflict";
    case ErrorCode::kUnknownEntity: return "UnknownEntity";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnsupportedFeature: return "UnsupportedFeature";
    case ErrorCode::kEvaluationError: return "EvaluationError";
    case ErrorCode::kNothingToAbstract: return "NothingToAbstract";
    case ErrorCode::kNotInstantiable: return "NotInstantiable";
    case ErrorCode::kUnmappedPlaceholder: return "UnmappedPlaceholder";
    case ErrorCode::kMissingDescription: return "MissingDescription";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

}  // namespace sparql2q
