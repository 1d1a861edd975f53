// Copyright 2026 The deconv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deconv/error.hpp"

namespace deconv {

const char* code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedUW: return "MalformedUW";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::DuplicateEntryNode: return "DuplicateEntryNode";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::NestedScope: return "NestedScope";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::NotInDictionary: return "NotInDictionary";
    case ErrorCode::DuplicateEntry: return "DuplicateEntry";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::StorageError: return "StorageError";
    case ErrorCode::EmptyDictionary: return "EmptyDictionary";
    case ErrorCode::NonConnectedGraph: return "NonConnectedGraph";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::RuleSyntaxError: return "RuleSyntaxError";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::PostconditionFailed: return "PostconditionFailed";
    case ErrorCode::NoMatchingMorphRule: return "NoMatchingMorphRule";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownUtterance: return "UnknownUtterance";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::LuNotCandidate: return "LuNotCandidate";
    case ErrorCode::Conflict: return "Conflict";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

ErrorClass class_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateEntry:
    case ErrorCode::FormatError:
    case ErrorCode::EmptyDictionary:
    case ErrorCode::SchemaError:
    case ErrorCode::RuleSyntaxError:
    case ErrorCode::TypeError:
    case ErrorCode::IterationLimit:
    case ErrorCode::PostconditionFailed:
    case ErrorCode::NoMatchingMorphRule:
      return ErrorClass::Lingware;
    case ErrorCode::StorageError:
      return ErrorClass::Storage;
    case ErrorCode::UnknownNode:
    case ErrorCode::UnknownUtterance:
    case ErrorCode::UnknownSession:
      return ErrorClass::NotFound;
    case ErrorCode::Conflict:
      return ErrorClass::Conflict;
    default:
      return ErrorClass::Input;
  }
}

Error::Error(ErrorCode code, const std::string& message, int line)
    : std::runtime_error(compose(code, message, line, {})),
      code_(code),
      line_(line),
      detail_(message) {}

Error Error::in_phase(std::string_view phase) const {
  Error copy(code_, detail_, line_);
  copy.phase_ = std::string(phase);
  static_cast<std::runtime_error&>(copy) =
      std::runtime_error(compose(code_, detail_, line_, copy.phase_));
  return copy;
}

std::string Error::compose(ErrorCode code, const std::string& message,
                           int line, const std::string& phase) {
  std::string out;
  if (!phase.empty()) out += "[" + phase + "] ";
  out += code_name(code);
  if (line > 0) out += " at line " + std::to_string(line);
  out += ": " + message;
  return out;
}

}  // namespace deconv
