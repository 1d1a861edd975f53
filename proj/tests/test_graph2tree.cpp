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

#include <doctest.h>

#include <map>
#include <queue>

#include "deconv/error.hpp"
#include "deconv/graph2tree.hpp"
#include "deconv/validator.hpp"
#include "support.hpp"

using namespace deconv;

namespace {

const Inventory& inventory() {
  static const Inventory inv = Inventory::parse(
      "[relations]\nagt obj gol ben mod man plc and\n[attributes]\nentry def pl\n");
  return inv;
}

std::string g2t_error(const UnlGraph& g) {
  try {
    graph_to_tree(g);
  } catch (const Error& e) {
    return e.detail();
  }
  return "";
}

// Independent weak-connectivity check by BFS over undirected arcs.
bool weakly_connected(const UnlGraph& g) {
  if (g.nodes.empty()) return false;
  std::map<int, std::vector<int>> adj;
  for (const auto& a : g.arcs) {
    adj[a.source].push_back(a.target);
    adj[a.target].push_back(a.source);
  }
  std::set<int> seen{g.entry};
  std::queue<int> q;
  q.push(g.entry);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (seen.insert(w).second) q.push(w);
  }
  return seen.size() == g.nodes.size();
}

}  // namespace

TEST_CASE("validator: accepts a well-formed graph") {
  const auto g = parse_graph("agt(eat.@entry, cat.@def)\nobj(eat, fish)\n");
  const auto r = validate(g, inventory());
  CHECK(r.ok);
  CHECK(r.issues.empty());
}

TEST_CASE("validator: rejects disconnected graphs, unknown names and a missing entry") {
  CHECK(validate(parse_graph("agt(a.@entry, b)\nobj(c, d)\n"), inventory()).has("CONNECTIVITY"));
  CHECK_FALSE(validate(parse_graph("agt(a.@entry, b)\nobj(c, d)\n"), inventory()).ok);
  CHECK(validate(parse_graph("xyz(a.@entry, b)\n"), inventory()).has("UNKNOWN_RELATION"));
  CHECK(validate(parse_graph("agt(a.@entry.@zz, b)\n"), inventory()).has("UNKNOWN_ATTRIBUTE"));
  CHECK(validate(parse_graph("agt(a, b)\n"), inventory()).has("MISSING_ENTRY"));
}

TEST_CASE("validator: nodes unreachable forward only warn") {
  const auto r = validate(parse_graph("agt(a.@entry, b)\nobj(c, a)\n"), inventory());
  CHECK(r.ok);
  CHECK(r.has("UNREACHABLE_FROM_ENTRY"));
}

TEST_CASE("validator: scopes") {
  CHECK(validate(parse_graph("agt(a.@entry, :01)\nobj:01(b.@entry, c)\n"), inventory()).ok);
  CHECK_FALSE(validate(parse_graph("agt(a.@entry, b)\nobj:01(c.@entry, d)\n"), inventory()).ok);
}

TEST_CASE("g2t: split fixture duplicates the shared node") {
  UnlGraph g;
  for (const char* h : {"e", "a", "x"}) {
    UnlNode n;
    n.id = static_cast<int>(g.nodes.size()) + 1;
    n.uw.headword = h;
    g.nodes.push_back(n);
  }
  g.entry = 1;
  g.arcs = {{1, 2, "agt", ""}, {1, 3, "obj", ""}, {2, 3, "obj", ""}};
  const GTResult t = graph_to_tree(g);
  REQUIRE(t.nodes.size() == 4);
  CHECK(t.reversed_count == 0);
  CHECK(t.association.at(3).size() == 2);
  CHECK(to_bracketed(t, g) == R"([entry 1 "e" [agt 2 "a" [obj 3 "x"]] [obj 3 "x"]])");
}

TEST_CASE("g2t: a reversed arc is labeled with the inverse") {
  const auto g = parse_graph("agt(a.@entry, b)\nobj(c, b)\n");
  const GTResult t = graph_to_tree(g);
  CHECK(t.reversed_count == 1);
  CHECK(to_bracketed(t, g) == R"([entry 1 "a" [agt 2 "b" [obj^-1 3 "c"]]])");
}

TEST_CASE("g2t: hypernode copies carry their scope first") {
  const auto g = parse_graph("agt(think.@entry, Mary)\nobj(think, :01)\nagt:01(sleep.@entry, cat)\n");
  const GTResult t = graph_to_tree(g);
  CHECK(to_bracketed(t, g) ==
        R"([entry 1 "think" [agt 2 "Mary"] [obj 3 ":01" [entry 4 "sleep" [agt 5 "cat"]]]])");
  CHECK(to_indented(t, g).find("    entry #4 sleep\n") != std::string::npos);
}

TEST_CASE("g2t: disconnected input raises exactly 'non connected graph'") {
  CHECK(g2t_error(parse_graph("agt(a.@entry, b)\nobj(c, d)\n")) == "non connected graph");
  CHECK(g2t_error(parse_graph("agt(a, b)\n")) == "non connected graph");
}

TEST_CASE("g2t: earliest copy wins the attachment") {
  Association a{{3, {4, 2, 7}}};
  CHECK(choose_attachment(3, a) == 2);
  CHECK_THROWS_AS(choose_attachment(9, a), Error);
}

TEST_CASE("g2t: property, size and label conservation on random graphs") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 300; ++k) {
    const int arcs = 1 + static_cast<int>(rng() % 50);
    const UnlGraph g = testing::random_connected(rng, arcs, rng() % 2 == 0);
    const GTResult t = graph_to_tree(g);
    REQUIRE(t.nodes.size() == g.arcs.size() + 1);
    std::multiset<std::string> in, out;
    for (const auto& a : g.arcs) in.insert(a.label);
    for (const auto& n : t.nodes)
      if (n.id != 0) out.insert(n.label);
    CHECK(in == out);
    // Parent links agree with child lists; every node has one parent.
    for (const auto& n : t.nodes)
      for (int c : n.children) CHECK(t.nodes[static_cast<std::size_t>(c)].parent == n.id);
  }
}

TEST_CASE("g2t: property, totality agrees with an independent connectivity check") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 300; ++k) {
    const int arcs = 2 + static_cast<int>(rng() % 40);
    const UnlGraph g = k % 2 ? testing::random_connected(rng, arcs, false) : testing::random_disconnected(rng, arcs);
    const bool connected = weakly_connected(g);
    CHECK(connected == (k % 2 == 1));
    CHECK((g2t_error(g) == "non connected graph") == !connected);
  }
}

TEST_CASE("g2t: property, forward-reachable graphs never reverse") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 300; ++k) {
    const UnlGraph g = testing::random_connected(rng, 1 + static_cast<int>(rng() % 50), true);
    CHECK(graph_to_tree(g).reversed_count == 0);
  }
}
