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

// Leaf realization: stem + affix rules and graphemic post-rules. A pack is a
// directory holding rules.tsv, affixes.tsv and graphemic.rules; see
// docs/morph.ebnf.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "deconv/schema.hpp"
#include "deconv/tree.hpp"

namespace deconv {

struct MorphOp {
  enum Kind { Strip, Add, Prefix, Subst } kind = Add;
  std::string arg;    // suffix to strip or replace, or affix id
  std::string affix;  // affix id for Subst
};

struct MorphCondition {
  std::string var;
  std::vector<std::string> values;  // empty: variable must be unassigned
};

struct MorphRule {
  std::string name;
  std::vector<MorphCondition> conditions;  // empty: matches everything
  std::string stem;                        // `lemma` or a variable name
  std::vector<MorphOp> ops;
  int line = 0;
};

struct GraphemicRule {
  enum Kind { Elide, Contract } kind = Elide;
  std::string first;
  std::string second;        // Contract only
  std::string char_class;    // empty when unconstrained
  bool negated = false;      // `!@V`
  std::string result;
  int line = 0;
};

class MorphPack {
 public:
  static MorphPack parse(std::string_view rules, std::string_view affixes, std::string_view graphemic);
  static MorphPack load(const std::filesystem::path& dir);

  const std::vector<MorphRule>& rules() const { return rules_; }
  const std::map<std::string, std::string>& affixes() const { return affixes_; }
  const std::vector<GraphemicRule>& graphemic() const { return graphemic_; }
  const std::map<std::string, std::vector<std::string>>& classes() const { return classes_; }

  // First rule whose conditions hold and whose ops apply to the stem.
  // Throws NoMatchingMorphRule.
  std::string realize(const Decoration& leaf) const;
  // True when the first UTF-8 character of `token` belongs to `cls`.
  bool in_class(const std::string& cls, std::string_view token) const;

 private:
  std::vector<MorphRule> rules_;
  std::map<std::string, std::string> affixes_;
  std::vector<GraphemicRule> graphemic_;
  std::map<std::string, std::vector<std::string>> classes_;
};

struct SurfaceToken {
  std::string text;
  int mark = 0;       // umc index i of the realized leaf, 0 for punctuation
  bool glue = false;  // no space before the next token
  bool operator==(const SurfaceToken&) const = default;
};

struct SurfaceText {
  std::vector<SurfaceToken> tokens;
  // Tokens joined by spaces (none after glued tokens); with marks, `&i_` is
  // appended to every marked token.
  std::string render(bool marks) const;
  bool operator==(const SurfaceText&) const = default;
};

// Realizes the leaves of a projective UMC tree left to right. Leaves without
// LEMMA produce no token. Leaves must carry their umc index.
SurfaceText generate(const TreeNode& umc, const MorphPack& pack);

// Removes every `&i_` mark.
std::string strip_marks(std::string_view text);

// Uppercases the first character of a UTF-8 string (ASCII and Latin-1).
std::string capitalize_first(std::string_view s);

}  // namespace deconv
