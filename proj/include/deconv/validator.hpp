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

#include <string>
#include <vector>

#include "deconv/unl.hpp"

namespace deconv {

enum class Severity { Error, Warning };

struct Issue {
  Severity severity = Severity::Error;
  std::string code;     // CONNECTIVITY, UNKNOWN_RELATION, ...
  std::string locus;    // "node 3", "arc 2", "scope :01", "graph"
  std::string message;
};

struct ValidationReport {
  bool ok = true;  // no error-severity issue
  std::vector<Issue> issues;

  bool has(std::string_view code) const;
  std::string to_text() const;
};

// Accepts or rejects a graph before deconversion. Errors: graph not weakly
// connected (per scope as well), unknown relation or attribute, missing entry,
// dangling or unreferenced scope. Warnings: nodes not forward-reachable from
// the entry, scopes without an explicit @entry.
ValidationReport validate(const UnlGraph& graph, const Inventory& inventory);

const char* severity_name(Severity s);

}  // namespace deconv
