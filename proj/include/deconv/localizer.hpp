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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "deconv/lexicon.hpp"
#include "deconv/unl.hpp"

namespace deconv {

// Costs of the pseudo-distance between a graph UW and a dictionary UW.
struct PseudoDistance {
  double headword_mismatch = 10;
  double restriction_asymmetry = 1;  // per restriction present on one side only
  double context_conflict = 2;       // per candidate restriction the graph contradicts
  // Extra distance above the minimum admitted when widening the search.
  double widen_radius = 2;

  static PseudoDistance from_profile(const Profile& profile);
};

// Class pairs a relation cannot relate, e.g. (agt, human, thing): a
// candidate restricted `agt>human` conflicts with an actual agt arc whose
// target is of class `thing`. Symmetric in the two classes.
class IncompatibilityTable {
 public:
  static IncompatibilityTable parse(std::string_view content);
  static IncompatibilityTable load(const std::filesystem::path& path);

  void add(std::string relation, std::string a, std::string b);
  bool conflicts(const std::string& relation, const std::string& a, const std::string& b) const;

 private:
  std::set<std::tuple<std::string, std::string, std::string>> rows_;
};

// d(w, x, G) for the node `node` of `graph` currently bearing w. The context
// term only counts restrictions of x that w lacks, so d(w, w) = 0. Pass a
// null graph for the context-free distance.
double distance(const UW& w, const UW& x, const UnlGraph* graph, NodeId node,
                const PseudoDistance& params, const IncompatibilityTable* table);

enum class ChoiceMode { Automatic, Interactive, Override };
const char* choice_mode_name(ChoiceMode mode);

struct UwCandidate {
  UW uw;
  double distance = 0;
  bool operator==(const UwCandidate&) const = default;
};

struct LocalizationChoice {
  NodeId node = 0;
  UW original;
  std::vector<UwCandidate> candidates;  // ascending distance, then text
  UW chosen;
  ChoiceMode mode = ChoiceMode::Automatic;
  bool operator==(const LocalizationChoice&) const = default;
};

// Returns the index of the chosen candidate.
using UwChooser = std::function<std::size_t(const LocalizationChoice&)>;

struct LocalizationResult {
  UnlGraph graph;
  std::vector<LocalizationChoice> choices;
};

// All UWs of D ranked by distance to the node's current UW.
std::vector<UwCandidate> rank_candidates(const UnlGraph& graph, NodeId node,
                                         const std::vector<UW>& dictionary,
                                         const PseudoDistance& params,
                                         const IncompatibilityTable& table);

struct LocalizeOptions {
  std::uint64_t seed = 0;
  const UwChooser* chooser = nullptr;  // interactive mode when set
  // Forced target UW text per node (posteditor choices).
  const std::map<NodeId, std::string>* overrides = nullptr;
};

// Replaces every UW not in D by a minimizer of the pseudo-distance over D.
// Exact members of D are left untouched. Ties between minimizers are broken
// by a seeded uniform draw keyed on (seed, node).
LocalizationResult localize_lexically(const UnlGraph& graph, const std::vector<UW>& dictionary,
                                      const PseudoDistance& params,
                                      const IncompatibilityTable& table,
                                      const LocalizeOptions& options = {});

// Fills attributes of profile-covered classes that a node lacks with the
// profile default for its category, marking them as defaulted.
UnlGraph localize_culturally(const UnlGraph& graph, const Profile& profile,
                             const Inventory& inventory,
                             const std::function<std::optional<std::string>(const UnlNode&)>& category_of);

// Seeded index in [0, n) drawn from a stream keyed on (seed, stream, key).
std::size_t seeded_pick(std::uint64_t seed, std::uint32_t stream, std::int64_t key, std::size_t n);

}  // namespace deconv
