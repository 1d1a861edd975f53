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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "deconv/lexicon.hpp"
#include "deconv/localizer.hpp"
#include "deconv/unl.hpp"

namespace deconv {

// Restriction -> transfer variable mapping, e.g. `icl>do  PREDIC=ACTION`.
class TransferVarTable {
 public:
  static TransferVarTable parse(std::string_view content);
  static TransferVarTable load(const std::filesystem::path& path);

  // Variables implied by the restrictions of a UW, in table order.
  std::map<std::string, std::string> vars_for(const UW& uw) const;

 private:
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> rows_;
};

struct TransferredNode {
  NodeId node = 0;
  std::string lu;
  std::string uw_text;  // localized UW the LU was chosen for
  std::map<std::string, std::string> vars;  // CAT plus restriction-derived flags
  std::set<std::string> attributes;
  std::set<std::string> defaulted;
  std::optional<LexEntry> entry;  // absent for forced or untranslated LUs
  bool untranslated = false;      // UW missing from the lexicon, headword kept
  bool operator==(const TransferredNode&) const = default;
};

struct TransferredGraph {
  UnlGraph graph;
  std::map<NodeId, TransferredNode> nodes;  // one per non-hypernode
  bool operator==(const TransferredGraph&) const = default;
};

struct LuCandidate {
  std::string lu;
  double score = 0;
  bool operator==(const LuCandidate&) const = default;
};

struct TransferChoice {
  NodeId node = 0;
  std::string uw;
  std::vector<LuCandidate> alternatives;  // descending score
  std::string chosen;
  ChoiceMode mode = ChoiceMode::Automatic;
  bool operator==(const TransferChoice&) const = default;
};

using LuChooser = std::function<std::size_t(const TransferChoice&)>;

struct TransferOptions {
  std::uint64_t seed = 0;
  const LuChooser* chooser = nullptr;  // interactive mode when set
  const std::map<NodeId, std::string>* overrides = nullptr;  // forced LUs
};

struct TransferResult {
  TransferredGraph graph;
  std::vector<TransferChoice> choices;
};

// Maps every graph node to exactly one LU before any tree exists. Automatic
// mode takes the top-scored entry and breaks exact ties with a seeded draw
// keyed on (seed, node). UWs unknown to the lexicon become untranslated
// nodes carrying their headword.
TransferResult transfer_lexically(const UnlGraph& localized, const Lexicon& lexicon,
                                  const Profile& profile, const CountStore& counts,
                                  const TransferVarTable& vars, const TransferOptions& options = {});

}  // namespace deconv
