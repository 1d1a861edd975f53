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

// Decorated-tree rewriting. Rule files hold one statement per logical line
// (continuation lines start with whitespace, `**` starts a comment):
//
//   RULE swap PRIORITY 10 : ?p{K=GN}(?a, ?b{FS=EPIT}) ==> ?p(?b, ?a) WHERE ?a.NUM = ?b.NUM
//   ASSERT heads ON LEAVES WHEN {FS=GOV} REQUIRE {LEMMA}
//   MAXITER 500
//
// The full grammar is in docs/rules.ebnf.

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "deconv/schema.hpp"
#include "deconv/tree.hpp"

namespace deconv {

struct CompiledRule;
struct CompiledAssertion;

struct Rule {
  std::string name;
  int priority = 0;
  int line = 0;
  std::size_t order = 0;  // position in the file
  std::shared_ptr<const CompiledRule> impl;
};

struct Assertion {
  std::string name;
  int line = 0;
  std::shared_ptr<const CompiledAssertion> impl;
};

struct Grammar {
  std::string name;
  std::vector<Rule> rules;  // descending priority, file order among equals
  std::vector<Assertion> assertions;
  std::size_t max_iterations = 1000;
};

// Throws RuleSyntaxError on malformed text and TypeError on unknown
// variables, undeclared values, unbound template variables and ill-typed
// assignments, each with its line.
Grammar compile_grammar(std::string_view text, const Schema& schema, std::string name = {});
Grammar load_grammar(const std::filesystem::path& path, const Schema& schema);

struct ApplyStats {
  std::size_t applications = 0;
  std::vector<std::string> fired;  // rule names in application order
};

// Applies the highest-priority rule that matches anywhere, at its shallowest
// then leftmost match, and rescans from the root until no rule matches.
// Throws IterationLimit when a rule still matches after max_iterations
// applications, and PostconditionFailed when an assertion does not hold at
// the fixpoint.
TreeNode apply(const Grammar& grammar, const Schema& schema, TreeNode tree,
               ApplyStats* stats = nullptr);

// Evaluates the grammar's assertions only.
void check_assertions(const Grammar& grammar, const Schema& schema, const TreeNode& tree);

}  // namespace deconv
