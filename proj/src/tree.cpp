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

#include "deconv/tree.hpp"

#include <algorithm>
#include <map>

namespace deconv {

namespace {

void walk(const TreeNode& n, std::vector<const TreeNode*>& out, bool only_leaves) {
  if (!only_leaves || n.leaf()) out.push_back(&n);
  for (const auto& c : n.children) walk(c, out, only_leaves);
}

void number(TreeNode& n, int& next) {
  n.umc = next++;
  for (auto& c : n.children) number(c, next);
}

std::string head(const TreeNode& n) {
  std::string out = n.deco.text();
  out += (out.empty() ? "#" : " #") + std::to_string(n.unl) + "/" + std::to_string(n.tid);
  if (n.umc) out += "/" + std::to_string(n.umc);
  return out;
}

void bracket(const TreeNode& n, std::string& out) {
  out += "(" + head(n);
  for (const auto& c : n.children) {
    out += " ";
    bracket(c, out);
  }
  out += ")";
}

void indent(const TreeNode& n, int depth, std::string& out) {
  out += std::string(static_cast<std::size_t>(depth) * 2, ' ') + head(n) + "\n";
  for (const auto& c : n.children) indent(c, depth + 1, out);
}

// Returns the leaf positions below `n`, recording violations on the way.
std::vector<int> spans(const TreeNode& n, const std::map<int, int>& position,
                       std::vector<ProjectivityViolation>& out) {
  if (n.leaf()) {
    auto it = position.find(n.umc);
    if (it == position.end()) {
      out.push_back({n.umc, "leaf missing from the surface order"});
      return {};
    }
    return {it->second};
  }
  if (n.deco.assigned("LEMMA")) out.push_back({n.umc, "internal node bears LEMMA"});
  std::vector<int> all;
  for (const auto& c : n.children) {
    auto s = spans(c, position, out);
    all.insert(all.end(), s.begin(), s.end());
  }
  if (!all.empty()) {
    const auto [lo, hi] = std::minmax_element(all.begin(), all.end());
    if (static_cast<std::size_t>(*hi - *lo + 1) != all.size())
      out.push_back({n.umc, "leaf span is not contiguous"});
  }
  return all;
}

}  // namespace

std::vector<const TreeNode*> preorder(const TreeNode& root) {
  std::vector<const TreeNode*> out;
  walk(root, out, false);
  return out;
}

std::vector<const TreeNode*> leaves(const TreeNode& root) {
  std::vector<const TreeNode*> out;
  walk(root, out, true);
  return out;
}

std::size_t tree_size(const TreeNode& root) {
  std::size_t n = 1;
  for (const auto& c : root.children) n += tree_size(c);
  return n;
}

void number_preorder(TreeNode& root) {
  int next = 1;
  number(root, next);
}

std::string to_bracketed(const TreeNode& root) {
  std::string out;
  bracket(root, out);
  return out;
}

std::string to_indented(const TreeNode& root) {
  std::string out;
  indent(root, 0, out);
  return out;
}

std::vector<ProjectivityViolation> check_projectivity(const TreeNode& root,
                                                      const std::vector<int>& surface) {
  std::map<int, int> position;
  if (surface.empty()) {
    int k = 0;
    for (const TreeNode* l : leaves(root)) position[l->umc] = k++;
  } else {
    for (std::size_t k = 0; k < surface.size(); ++k) position[surface[k]] = static_cast<int>(k);
  }
  std::vector<ProjectivityViolation> out;
  spans(root, position, out);
  return out;
}

}  // namespace deconv
