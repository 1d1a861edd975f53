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

// Variable declarations for decorated trees, in the DV layout:
//
//   -EXC-
//   VSYNT == (PSYNT (CAT (N, V, A), K (PHVB, GN))).
//   -NEX-
//   VNEX == (UATT (entry, pl, def)).
//   -STR-
//   UL, LEMMA.
//   -FMT-
//   NOUN == CAT=N, K=GN
//
// See docs/schema.ebnf.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace deconv {

enum class VarKind { Exclusive, NonExclusive, String };
const char* var_kind_name(VarKind kind);

struct VarDecl {
  std::string name;
  VarKind kind = VarKind::Exclusive;
  std::set<std::string> values;  // empty for string variables
  std::vector<std::string> groups;  // enclosing group names, outermost first
  int line = 0;
};

// Mask of variables. Exclusive and string variables hold one value,
// non-exclusive ones a non-empty set. Unassigned variables are absent.
struct Decoration {
  std::map<std::string, std::string> scalars;
  std::map<std::string, std::set<std::string>> sets;

  bool assigned(const std::string& var) const;
  std::optional<std::string> get(const std::string& var) const;
  // Scalar equality or set membership.
  bool holds(const std::string& var, const std::string& value) const;
  void unset(const std::string& var);
  bool empty() const { return scalars.empty() && sets.empty(); }
  // `CAT=N, UATT=def|pl` with variables sorted by name.
  std::string text() const;
  bool operator==(const Decoration&) const = default;
};

class Schema {
 public:
  static Schema parse(std::string_view text);
  static Schema load(const std::filesystem::path& path);

  const VarDecl* find(std::string_view name) const;
  const VarDecl& require(std::string_view name) const;  // TypeError when unknown
  const std::map<std::string, VarDecl, std::less<>>& variables() const { return vars_; }
  const Decoration* format(std::string_view name) const;
  const std::map<std::string, Decoration, std::less<>>& formats() const { return formats_; }

  // Typed writes; TypeError on unknown variables or out-of-domain values.
  void assign(Decoration& d, const std::string& var, const std::string& value) const;
  void add(Decoration& d, const std::string& var, const std::string& value) const;
  void remove(Decoration& d, const std::string& var, const std::string& value) const;
  void apply_format(Decoration& d, const Decoration& format) const;
  // True when every assignment of `format` is present in `d`.
  bool subsumes(const Decoration& d, const Decoration& format) const;
  void check(const Decoration& d) const;
  void check_value(const VarDecl& v, const std::string& value) const;

 private:
  void declare(VarDecl v);
  std::map<std::string, VarDecl, std::less<>> vars_;
  std::map<std::string, Decoration, std::less<>> formats_;
};

}  // namespace deconv
