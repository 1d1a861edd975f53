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

#include "deconv/graph2tree.hpp"

#include <algorithm>
#include <list>
#include <tuple>

#include "deconv/error.hpp"

namespace deconv {

int choose_attachment(NodeId node, const Association& association) {
  auto it = association.find(node);
  if (it == association.end() || it->second.empty())
    throw Error(ErrorCode::UnknownNode, "node " + std::to_string(node) + " has no tree copy");
  return *std::min_element(it->second.begin(), it->second.end());
}

namespace {

class Converter {
 public:
  explicit Converter(GTResult& out) : out_(out) {}

  int new_node(NodeId source, std::string label, bool inverse, int parent) {
    GTNode n;
    n.id = static_cast<int>(out_.nodes.size());
    n.source = source;
    n.label = std::move(label);
    n.inverse = inverse;
    n.parent = parent;
    out_.nodes.push_back(n);
    if (parent >= 0) out_.nodes[static_cast<std::size_t>(parent)].children.push_back(n.id);
    return n.id;
  }

  // Runs the consumption loop over `arcs` starting from an existing tree
  // node `root` standing for `entry`. Association is local to this scope.
  void convert(std::vector<UnlArc> arcs, NodeId entry, int root) {
    std::sort(arcs.begin(), arcs.end(), [](const UnlArc& a, const UnlArc& b) {
      return std::tie(a.source, a.label, a.target) < std::tie(b.source, b.label, b.target);
    });
    std::list<UnlArc> remaining(arcs.begin(), arcs.end());
    Association local;
    local[entry].push_back(root);
    out_.association[entry].push_back(root);

    while (!remaining.empty()) {
      auto it = std::find_if(remaining.begin(), remaining.end(),
                             [&](const UnlArc& a) { return local.count(a.source) > 0; });
      if (it != remaining.end()) {
        const UnlArc arc = *it;
        remaining.erase(it);
        const int parent = choose_attachment(arc.source, local);
        const int child = new_node(arc.target, arc.label, false, parent);
        local[arc.target].push_back(child);
        out_.association[arc.target].push_back(child);
        continue;
      }
      it = std::find_if(remaining.begin(), remaining.end(),
                        [&](const UnlArc& a) { return local.count(a.target) > 0; });
      if (it != remaining.end()) {
        const UnlArc arc = *it;
        remaining.erase(it);
        const int parent = choose_attachment(arc.target, local);
        const int child = new_node(arc.source, arc.label, true, parent);
        local[arc.source].push_back(child);
        out_.association[arc.source].push_back(child);
        ++out_.reversed_count;
        continue;
      }
      throw Error(ErrorCode::NonConnectedGraph, "non connected graph");
    }
  }

 private:
  GTResult& out_;
};

}  // namespace

GTResult graph_to_tree(const UnlGraph& graph) {
  if (!graph.contains(graph.entry))
    throw Error(ErrorCode::NonConnectedGraph, "non connected graph");
  GTResult out;
  Converter conv(out);
  const int root = conv.new_node(graph.entry, "entry", false, -1);
  conv.convert(graph.arcs_in(""), graph.entry, root);

  // Nodes standing outside every arc of their level are unreachable.
  for (NodeId m : graph.members_of("")) {
    if (!out.association.count(m)) throw Error(ErrorCode::NonConnectedGraph, "non connected graph");
  }

  // Expand hypernode copies in creation order; scopes do not nest.
  const std::size_t top_count = out.nodes.size();
  for (std::size_t i = 0; i < top_count; ++i) {
    const UnlNode& gn = graph.node(out.nodes[i].source);
    if (!gn.is_hypernode()) continue;
    const NodeId scope_entry = graph.scope_entry(gn.hypernode);
    if (!graph.contains(scope_entry)) throw Error(ErrorCode::NonConnectedGraph, "non connected graph");
    const int sroot = conv.new_node(scope_entry, "entry", false, static_cast<int>(i));
    // The scope subtree goes first among the hypernode's children.
    auto& kids = out.nodes[i].children;
    std::rotate(kids.begin(), kids.end() - 1, kids.end());
    const std::size_t before = out.nodes.size();
    conv.convert(graph.arcs_in(gn.hypernode), scope_entry, sroot);
    (void)before;
    for (NodeId m : graph.members_of(gn.hypernode)) {
      if (!out.association.count(m)) throw Error(ErrorCode::NonConnectedGraph, "non connected graph");
    }
  }
  return out;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string node_text(const UnlGraph& g, NodeId n) {
  const UnlNode& node = g.node(n);
  return node.is_hypernode() ? ":" + node.hypernode : node.key();
}

void bracket(const GTResult& t, const UnlGraph& g, int id, std::string& out) {
  const GTNode& n = t.nodes[static_cast<std::size_t>(id)];
  out += "[" + n.label_text() + " " + std::to_string(n.source) + " " + quoted(node_text(g, n.source));
  for (int c : n.children) {
    out += " ";
    bracket(t, g, c, out);
  }
  out += "]";
}

void indent(const GTResult& t, const UnlGraph& g, int id, int depth, std::string& out) {
  const GTNode& n = t.nodes[static_cast<std::size_t>(id)];
  out += std::string(static_cast<std::size_t>(depth) * 2, ' ') + n.label_text() + " #" +
         std::to_string(n.source) + " " + node_text(g, n.source) + "\n";
  for (int c : n.children) indent(t, g, c, depth + 1, out);
}

}  // namespace

std::string to_bracketed(const GTResult& tree, const UnlGraph& graph) {
  std::string out;
  if (!tree.nodes.empty()) bracket(tree, graph, 0, out);
  return out;
}

std::string to_indented(const GTResult& tree, const UnlGraph& graph) {
  std::string out;
  if (!tree.nodes.empty()) indent(tree, graph, 0, 0, out);
  return out;
}

}  // namespace deconv
