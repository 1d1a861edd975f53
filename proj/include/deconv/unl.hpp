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

// UNL data model: Universal Words, hypergraphs and documents, with the
// line-oriented surface syntax described in docs/unl-grammar.ebnf.

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace deconv {

struct Restriction {
  std::string relation;  // [a-z]{2,4}
  char direction = '>';  // '>' or '<'
  std::string target;    // opaque text, nested parentheses kept verbatim

  std::string text() const;
  auto operator<=>(const Restriction&) const = default;
};

struct UW {
  std::string headword;
  std::vector<Restriction> restrictions;  // source order, no duplicates

  std::string text() const;
  bool has_restriction(const Restriction& r) const;
  // Target of the first `icl>` restriction, or the headword when absent.
  std::string semantic_class() const;
  bool operator==(const UW&) const = default;
};

// Throws Error(MalformedUW) on unbalanced parentheses, an empty headword or a
// bad restriction.
UW parse_uw(std::string_view text);

using NodeId = int;  // canonical index n, dense from 1

struct UnlNode {
  NodeId id = 0;
  UW uw;                             // empty headword for hypernodes
  std::string instance;              // `:NN` suffix distinguishing equal UWs
  std::set<std::string> attributes;  // without the leading '@'
  std::set<std::string> defaulted;   // subset of attributes filled by profile
  std::string scope;                 // owning scope id, empty at top level
  std::string hypernode;             // scope id this node stands for

  bool is_hypernode() const { return !hypernode.empty(); }
  bool has(std::string_view attr) const {
    return attributes.count(std::string(attr)) > 0;
  }
  // `uw:NN` for normal nodes, `:SS` for hypernodes.
  std::string key() const;
  bool operator==(const UnlNode&) const = default;
};

struct UnlArc {
  NodeId source = 0;
  NodeId target = 0;
  std::string label;
  std::string scope;  // empty for top-level arcs
  bool operator==(const UnlArc&) const = default;
};

struct UnlGraph {
  std::vector<UnlNode> nodes;  // nodes[i].id == i + 1
  std::vector<UnlArc> arcs;    // source order
  std::map<std::string, std::vector<NodeId>> scopes;  // scope id -> members
  NodeId entry = 0;            // 0 when no top-level node carries @entry

  const UnlNode& node(NodeId id) const;
  UnlNode& node(NodeId id);
  bool contains(NodeId id) const {
    return id >= 1 && id <= static_cast<NodeId>(nodes.size());
  }
  // Arcs belonging to a scope ("" for the top level).
  std::vector<UnlArc> arcs_in(std::string_view scope) const;
  // Node ids living at a scope ("" for the top level).
  std::vector<NodeId> members_of(std::string_view scope) const;
  // Entry of a scope: its @entry node, else its lowest-id member.
  NodeId scope_entry(std::string_view scope) const;
  // Hypernode standing for a scope, 0 when the scope is never referenced.
  NodeId hypernode_of(std::string_view scope) const;

  bool operator==(const UnlGraph&) const = default;
};

struct Utterance {
  UnlGraph graph;
  std::string comments;                           // joined by '\n'
  std::map<std::string, std::string> renderings;  // language tag -> text
  bool operator==(const Utterance&) const = default;
};

struct UnlDocument {
  std::vector<Utterance> utterances;
  bool operator==(const UnlDocument&) const = default;
};

// Declared relation and attribute names, plus attribute classes
// (number, determination, tense, ...) used by cultural localization.
struct Inventory {
  std::set<std::string> relations;
  std::set<std::string> attributes;
  std::map<std::string, std::vector<std::string>> classes;

  static Inventory parse(std::string_view text);
  static Inventory load(const std::filesystem::path& path);

  // Class name an attribute belongs to, if any.
  std::optional<std::string> class_of(std::string_view attribute) const;
};

struct ParseOptions {
  // When set together with `strict`, unknown relations and attributes are
  // rejected at parse time instead of being left to the validator.
  const Inventory* inventory = nullptr;
  bool strict = false;
};

UnlDocument parse_document(std::string_view text, const ParseOptions& options = {});
// Parses a single `[unl]` block body (arc lines only, no tags).
UnlGraph parse_graph(std::string_view arc_lines, const ParseOptions& options = {});

struct SerializeOptions {
  bool include_defaulted = true;
};

std::string serialize_graph(const UnlGraph& graph, const SerializeOptions& options = {});
std::string serialize_document(const UnlDocument& doc, const SerializeOptions& options = {});

}  // namespace deconv
