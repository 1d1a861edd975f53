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

// Shared fixtures: paths to the demo pack and corpus, random graph builders.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "deconv/pipeline.hpp"
#include "deconv/unl.hpp"

#ifndef DECONV_SOURCE_DIR
#define DECONV_SOURCE_DIR "."
#endif

namespace testing {

inline std::filesystem::path source_dir() { return DECONV_SOURCE_DIR; }
inline std::filesystem::path lingware_dir() { return source_dir() / "data" / "lingware" / "fr"; }
inline std::filesystem::path corpus_dir() { return source_dir() / "data" / "corpus"; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const deconv::Lingware& french() {
  static const deconv::Lingware lw = deconv::Lingware::load(deconv::LingwarePaths::from_dir(lingware_dir()));
  return lw;
}

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("deconv-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

inline const std::vector<std::string>& labels() {
  static const std::vector<std::string> l{"agt", "obj", "gol", "ben", "mod", "man", "plc"};
  return l;
}

inline deconv::UnlNode plain_node(int id) {
  deconv::UnlNode n;
  n.id = id;
  n.uw.headword = "n" + std::to_string(id);
  return n;
}

// Random simple graph (no self loops, no duplicate (source, label, target))
// with `arcs` arcs over at most arcs + 1 nodes. When `forward` is set, every
// node is reachable from the entry following arcs forward; otherwise the
// graph is only weakly connected.
inline deconv::UnlGraph random_connected(std::mt19937_64& rng, int arcs, bool forward) {
  deconv::UnlGraph g;
  int min_nodes = 2;  // enough distinct (source, label, target) triples
  while (min_nodes * (min_nodes - 1) * static_cast<int>(labels().size()) < arcs) ++min_nodes;
  std::uniform_int_distribution<int> nodes_dist(min_nodes, arcs + 1);
  const int n = nodes_dist(rng);
  for (int i = 1; i <= n; ++i) g.nodes.push_back(plain_node(i));
  std::uniform_int_distribution<int> entry_dist(1, n);
  g.entry = entry_dist(rng);
  g.node(g.entry).attributes.insert("entry");

  std::set<std::tuple<int, std::string, int>> seen;
  auto add = [&](int s, int t) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      const std::string& l = labels()[rng() % labels().size()];
      if (seen.insert({s, l, t}).second) {
        g.arcs.push_back({s, t, l, ""});
        return true;
      }
    }
    return false;
  };

  // Spanning tree in a random order rooted at the entry.
  std::vector<int> order;
  for (int i = 1; i <= n; ++i)
    if (i != g.entry) order.push_back(i);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> placed{g.entry};
  for (int v : order) {
    const int u = placed[rng() % placed.size()];
    if (forward || rng() % 2 == 0) add(u, v);
    else add(v, u);
    placed.push_back(v);
  }
  while (static_cast<int>(g.arcs.size()) < arcs) {
    const int s = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    const int t = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    if (s == t) continue;
    add(s, t);
  }
  std::shuffle(g.arcs.begin(), g.arcs.end(), rng);
  return g;
}

// Two disjoint connected components, each with at least one arc.
inline deconv::UnlGraph random_disconnected(std::mt19937_64& rng, int arcs) {
  const int a_arcs = std::max(1, arcs / 2);
  const int b_arcs = std::max(1, arcs - a_arcs);
  deconv::UnlGraph a = random_connected(rng, a_arcs, rng() % 2 == 0);
  const deconv::UnlGraph b = random_connected(rng, b_arcs, rng() % 2 == 0);
  const int offset = static_cast<int>(a.nodes.size());
  for (deconv::UnlNode n : b.nodes) {
    n.id += offset;
    n.uw.headword = "n" + std::to_string(n.id);
    n.attributes.erase("entry");
    a.nodes.push_back(n);
  }
  for (deconv::UnlArc arc : b.arcs) {
    arc.source += offset;
    arc.target += offset;
    a.arcs.push_back(arc);
  }
  std::shuffle(a.arcs.begin(), a.arcs.end(), rng);
  return a;
}

}  // namespace testing
