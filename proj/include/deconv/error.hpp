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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace deconv {

enum class ErrorCode {
  MalformedUW,
  ParseError,
  EmptyGraph,
  DuplicateEntryNode,
  UnknownRelation,
  UnknownAttribute,
  NestedScope,
  ValidationFailed,
  NotInDictionary,
  DuplicateEntry,
  FormatError,
  StorageError,
  EmptyDictionary,
  NonConnectedGraph,
  SchemaError,
  RuleSyntaxError,
  TypeError,
  IterationLimit,
  PostconditionFailed,
  NoMatchingMorphRule,
  UnknownNode,
  UnknownUtterance,
  UnknownSession,
  LuNotCandidate,
  Conflict,
  InvalidArgument,
};

// Coarse classes used for exit codes and HTTP statuses. Lingware errors are
// bugs in rule packs or dictionaries, never in the input graph.
enum class ErrorClass { Input, Lingware, Storage, NotFound, Conflict };

const char* code_name(ErrorCode code);
ErrorClass class_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, int line = 0);

  ErrorCode code() const { return code_; }
  ErrorClass error_class() const { return class_of(code_); }
  int line() const { return line_; }
  const std::string& phase() const { return phase_; }
  const std::string& detail() const { return detail_; }

  // Returns a copy annotated with the pipeline phase that raised it.
  Error in_phase(std::string_view phase) const;

 private:
  static std::string compose(ErrorCode code, const std::string& message,
                             int line, const std::string& phase);

  ErrorCode code_;
  int line_;
  std::string detail_;
  std::string phase_;
};

}  // namespace deconv
