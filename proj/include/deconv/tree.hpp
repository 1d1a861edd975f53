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

#include "deconv/schema.hpp"

namespace deconv {

// Ordered decorated tree. The tactical fields are owned by the engine: rules
// read them through the trace API only and can neither assign nor drop them.
struct TreeNode {
  Decoration deco;
  std::vector<TreeNode> children;
  int unl = 0;   // UNL node index n
  int tid = -1;  // transfer-tree node id
  int umc = 0;   // canonical index i, numbered in preorder after GS2

  bool leaf() const { return children.empty(); }
  bool operator==(const TreeNode&) const = default;
};

std::vector<const TreeNode*> preorder(const TreeNode& root);
std::vector<const TreeNode*> leaves(const TreeNode& root);
std::size_t tree_size(const TreeNode& root);

// Numbers every node 1..N in preorder into `umc`.
void number_preorder(TreeNode& root);

// `(CAT=N, K=GN #n/tid ...children)`, one node per parenthesis.
std::string to_bracketed(const TreeNode& root);
// Indented dump, one node per line.
std::string to_indented(const TreeNode& root);

struct ProjectivityViolation {
  int node = 0;  // umc index of the offending node
  std::string message;
};

// Leaves are numbered by their position in `surface`, a sequence of umc
// indices (the left-to-right traversal when empty). A node is projective when
// its leaves occupy a contiguous interval. Nodes bearing LEMMA must be leaves,
// since only leaves are realized.
std::vector<ProjectivityViolation> check_projectivity(const TreeNode& root,
                                                      const std::vector<int>& surface = {});

}  // namespace deconv
