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

#include <map>
#include <string>
#include <vector>

#include "deconv/unl.hpp"

namespace deconv {

struct GTNode {
  int id = 0;             // creation index; the root is 0
  NodeId source = 0;      // graph node this tree node stands for
  std::string label;      // incoming relation, "entry" for (scope) roots
  bool inverse = false;   // arc consumed target-first (l^-1)
  int parent = -1;
  std::vector<int> children;
  bool operator==(const GTNode&) const = default;

  std::string label_text() const { return inverse ? label + "^-1" : label; }
};

using Association = std::map<NodeId, std::vector<int>>;  // graph node -> tree copies

struct GTResult {
  std::vector<GTNode> nodes;  // indexed by GTNode::id
  Association association;
  int reversed_count = 0;
  bool operator==(const GTResult&) const = default;
};

// Converts a hypergraph into a tree by consuming arcs one at a time: an arc
// whose source already has a tree copy is consumed forward (new child labeled
// l), otherwise an arc whose target has a copy is consumed reversed (new child
// labeled l^-1), otherwise the graph is not connected. Nodes reached by k arcs
// get k copies. Arcs are scanned in (source, label, target) order. Each
// hypernode copy receives its scope converted the same way, rooted at the
// scope entry, as first child.
//
// Throws Error(NonConnectedGraph, "non connected graph").
GTResult graph_to_tree(const UnlGraph& graph);

// Earliest-created tree copy of `node`.
int choose_attachment(NodeId node, const Association& association);

// `[label n "uw" child...]`, see docs/tree-format.md.
std::string to_bracketed(const GTResult& tree, const UnlGraph& graph);
// One node per line, two spaces of indentation per level.
std::string to_indented(const GTResult& tree, const UnlGraph& graph);

}  // namespace deconv
