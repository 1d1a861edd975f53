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

#include "deconv/validator.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>

namespace deconv {

const char* severity_name(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(issues.begin(), issues.end(), [&](const Issue& i) { return i.code == code; });
}

std::string ValidationReport::to_text() const {
  std::string out = ok ? "ok" : "rejected";
  out += " (" + std::to_string(issues.size()) + " issue" + (issues.size() == 1 ? "" : "s") + ")\n";
  for (const auto& i : issues) {
    out += std::string("  ") + severity_name(i.severity) + " " + i.code + " [" + i.locus + "] " +
           i.message + "\n";
  }
  return out;
}

namespace {

// Weakly connected components over `members`, using `arcs` undirected.
std::size_t component_count(const std::vector<NodeId>& members, const std::vector<UnlArc>& arcs) {
  if (members.empty()) return 0;
  std::map<NodeId, NodeId> parent;
  for (NodeId m : members) parent[m] = m;
  std::function<NodeId(NodeId)> find = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& a : arcs) {
    if (!parent.count(a.source) || !parent.count(a.target)) continue;
    parent[find(a.source)] = find(a.target);
  }
  std::size_t roots = 0;
  for (NodeId m : members)
    if (find(m) == m) ++roots;
  return roots;
}

}  // namespace

ValidationReport validate(const UnlGraph& g, const Inventory& inv) {
  ValidationReport report;
  auto error = [&](std::string code, std::string locus, std::string msg) {
    report.issues.push_back({Severity::Error, std::move(code), std::move(locus), std::move(msg)});
  };
  auto warning = [&](std::string code, std::string locus, std::string msg) {
    report.issues.push_back({Severity::Warning, std::move(code), std::move(locus), std::move(msg)});
  };

  if (!g.contains(g.entry)) error("MISSING_ENTRY", "graph", "no top-level node carries @entry");

  for (std::size_t i = 0; i < g.arcs.size(); ++i) {
    const UnlArc& a = g.arcs[i];
    const std::string locus = "arc " + std::to_string(i + 1);
    if (!inv.relations.count(a.label))
      error("UNKNOWN_RELATION", locus, "relation '" + a.label + "' is not declared");
    if (!g.contains(a.source) || !g.contains(a.target))
      error("DANGLING_ARC", locus, "arc endpoint refers to no node");
    else if (a.source == a.target)
      error("SELF_LOOP", locus, "arc '" + a.label + "' loops on node " + std::to_string(a.source));
  }

  for (const auto& n : g.nodes) {
    for (const auto& attr : n.attributes) {
      if (!inv.attributes.count(attr))
        error("UNKNOWN_ATTRIBUTE", "node " + std::to_string(n.id),
              "attribute '@" + attr + "' is not declared");
    }
    if (n.is_hypernode()) {
      auto it = g.scopes.find(n.hypernode);
      if (it == g.scopes.end() || it->second.empty())
        error("DANGLING_SCOPE", "node " + std::to_string(n.id),
              "hypernode :" + n.hypernode + " has no member arcs");
    }
  }

  for (const auto& [scope, members] : g.scopes) {
    const std::string locus = "scope :" + scope;
    if (g.hypernode_of(scope) == 0)
      error("UNREFERENCED_SCOPE", locus, "scope :" + scope + " is never referenced by a hypernode");
    if (component_count(members, g.arcs_in(scope)) > 1)
      error("CONNECTIVITY", locus, "scope :" + scope + " is not connected");
    const bool explicit_entry = std::any_of(members.begin(), members.end(),
                                            [&](NodeId m) { return g.node(m).has("entry"); });
    if (!explicit_entry)
      warning("SCOPE_ENTRY_DEFAULTED", locus,
              "no @entry in scope; node " + std::to_string(g.scope_entry(scope)) + " is used");
  }

  const std::vector<NodeId> top = g.members_of("");
  const std::vector<UnlArc> top_arcs = g.arcs_in("");
  if (component_count(top, top_arcs) > 1)
    error("CONNECTIVITY", "graph", "graph is not connected");

  if (g.contains(g.entry)) {
    std::map<NodeId, std::vector<NodeId>> out;
    for (const auto& a : top_arcs) out[a.source].push_back(a.target);
    std::set<NodeId> seen{g.entry};
    std::queue<NodeId> q;
    q.push(g.entry);
    while (!q.empty()) {
      const NodeId x = q.front();
      q.pop();
      for (NodeId y : out[x])
        if (seen.insert(y).second) q.push(y);
    }
    for (NodeId m : top) {
      if (!seen.count(m))
        warning("UNREACHABLE_FROM_ENTRY", "node " + std::to_string(m),
                "not reachable from the entry by forward arcs; some arcs will be reversed");
    }
  }

  report.ok = std::none_of(report.issues.begin(), report.issues.end(),
                           [](const Issue& i) { return i.severity == Severity::Error; });
  return report;
}

}  // namespace deconv
