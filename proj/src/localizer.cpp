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

#include "deconv/localizer.hpp"

#include <algorithm>
#include <random>

#include "deconv/error.hpp"
#include "text_util.hpp"

namespace deconv {

PseudoDistance PseudoDistance::from_profile(const Profile& p) {
  PseudoDistance d;
  d.headword_mismatch = p.setting_number("distance.headword", d.headword_mismatch);
  d.restriction_asymmetry = p.setting_number("distance.restriction", d.restriction_asymmetry);
  d.context_conflict = p.setting_number("distance.context", d.context_conflict);
  d.widen_radius = p.setting_number("distance.widen", d.widen_radius);
  if (d.headword_mismatch < 0 || d.restriction_asymmetry < 0 || d.context_conflict < 0 ||
      d.widen_radius < 0)
    throw Error(ErrorCode::FormatError, "pseudo-distance costs must be non-negative");
  return d;
}

IncompatibilityTable IncompatibilityTable::parse(std::string_view content) {
  IncompatibilityTable t;
  int no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != 3)
      throw Error(ErrorCode::FormatError, "expected relation<TAB>class<TAB>class", no);
    t.add(std::string(text::trim(cols[0])), std::string(text::trim(cols[1])),
          std::string(text::trim(cols[2])));
  }
  return t;
}

IncompatibilityTable IncompatibilityTable::load(const std::filesystem::path& path) {
  return parse(text::read_file(path.string()));
}

void IncompatibilityTable::add(std::string relation, std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  rows_.emplace(std::move(relation), std::move(a), std::move(b));
}

bool IncompatibilityTable::conflicts(const std::string& relation, const std::string& a,
                                     const std::string& b) const {
  return a < b ? rows_.count({relation, a, b}) > 0 : rows_.count({relation, b, a}) > 0;
}

double distance(const UW& w, const UW& x, const UnlGraph* graph, NodeId node,
                const PseudoDistance& params, const IncompatibilityTable* table) {
  double d = w.headword == x.headword ? 0.0 : params.headword_mismatch;
  std::size_t asymmetric = 0;
  for (const auto& r : w.restrictions)
    if (!x.has_restriction(r)) ++asymmetric;
  for (const auto& r : x.restrictions)
    if (!w.has_restriction(r)) ++asymmetric;
  d += params.restriction_asymmetry * static_cast<double>(asymmetric);

  if (graph && table && graph->contains(node)) {
    std::size_t conflicts = 0;
    for (const auto& r : x.restrictions) {
      if (r.direction != '>' || w.has_restriction(r)) continue;
      for (const auto& arc : graph->arcs) {
        if (arc.source != node || arc.label != r.relation) continue;
        const UnlNode& t = graph->node(arc.target);
        if (t.is_hypernode()) continue;
        if (table->conflicts(r.relation, r.target, t.uw.semantic_class())) {
          ++conflicts;
          break;
        }
      }
    }
    d += params.context_conflict * static_cast<double>(conflicts);
  }
  return d;
}

const char* choice_mode_name(ChoiceMode mode) {
  switch (mode) {
    case ChoiceMode::Automatic: return "automatic";
    case ChoiceMode::Interactive: return "interactive";
    case ChoiceMode::Override: return "override";
  }
  return "automatic";
}

std::size_t seeded_pick(std::uint64_t seed, std::uint32_t stream, std::int64_t key, std::size_t n) {
  if (n <= 1) return 0;
  const auto k = static_cast<std::uint64_t>(key);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream, static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  std::mt19937_64 gen(seq);
  return static_cast<std::size_t>(gen() % n);
}

std::vector<UwCandidate> rank_candidates(const UnlGraph& graph, NodeId node,
                                         const std::vector<UW>& dictionary,
                                         const PseudoDistance& params,
                                         const IncompatibilityTable& table) {
  const UW& w = graph.node(node).uw;
  std::vector<std::pair<UwCandidate, std::string>> scored;
  scored.reserve(dictionary.size());
  for (const UW& x : dictionary)
    scored.push_back({UwCandidate{x, distance(w, x, &graph, node, params, &table)}, x.text()});
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first.distance != b.first.distance) return a.first.distance < b.first.distance;
    return a.second < b.second;
  });
  std::vector<UwCandidate> out;
  out.reserve(scored.size());
  for (auto& s : scored) out.push_back(std::move(s.first));
  return out;
}

LocalizationResult localize_lexically(const UnlGraph& graph, const std::vector<UW>& dictionary,
                                      const PseudoDistance& params,
                                      const IncompatibilityTable& table,
                                      const LocalizeOptions& options) {
  if (dictionary.empty()) throw Error(ErrorCode::EmptyDictionary, "target UW dictionary is empty");
  std::set<std::string> in_dict;
  for (const UW& x : dictionary) in_dict.insert(x.text());

  LocalizationResult result{graph, {}};
  for (const UnlNode& original : graph.nodes) {
    if (original.is_hypernode()) continue;
    const NodeId n = original.id;
    const std::string text = original.uw.text();

    if (options.overrides) {
      if (auto it = options.overrides->find(n); it != options.overrides->end()) {
        if (!in_dict.count(it->second))
          throw Error(ErrorCode::NotInDictionary, "override UW '" + it->second + "' is not in D");
        LocalizationChoice c;
        c.node = n;
        c.original = original.uw;
        c.candidates = rank_candidates(graph, n, dictionary, params, table);
        c.chosen = parse_uw(it->second);
        c.mode = ChoiceMode::Override;
        result.graph.node(n).uw = c.chosen;
        result.choices.push_back(std::move(c));
        continue;
      }
    }
    if (in_dict.count(text)) continue;

    LocalizationChoice c;
    c.node = n;
    c.original = original.uw;
    c.candidates = rank_candidates(graph, n, dictionary, params, table);
    std::size_t pick;
    if (options.chooser) {
      pick = (*options.chooser)(c);
      if (pick >= c.candidates.size())
        throw Error(ErrorCode::InvalidArgument, "chooser returned an out-of-range candidate");
      c.mode = ChoiceMode::Interactive;
    } else {
      const double best = c.candidates.front().distance;
      std::size_t ties = 0;
      while (ties < c.candidates.size() && c.candidates[ties].distance <= best + 1e-9) ++ties;
      pick = seeded_pick(options.seed, 1, n, ties);
    }
    c.chosen = c.candidates[pick].uw;
    result.graph.node(n).uw = c.chosen;
    result.choices.push_back(std::move(c));
  }
  return result;
}

UnlGraph localize_culturally(
    const UnlGraph& graph, const Profile& profile, const Inventory& inventory,
    const std::function<std::optional<std::string>(const UnlNode&)>& category_of) {
  UnlGraph out = graph;
  for (UnlNode& node : out.nodes) {
    if (node.is_hypernode()) continue;
    const auto category = category_of(node);
    if (!category) continue;
    for (const auto& [cls, members] : inventory.classes) {
      const bool present = std::any_of(members.begin(), members.end(),
                                       [&](const std::string& m) { return node.has(m); });
      if (present) continue;
      auto it = profile.attribute_defaults.find({*category, cls});
      if (it == profile.attribute_defaults.end())
        it = profile.attribute_defaults.find({"*", cls});
      if (it == profile.attribute_defaults.end()) continue;
      if (std::find(members.begin(), members.end(), it->second) == members.end())
        throw Error(ErrorCode::FormatError, "profile default '" + it->second +
                                                "' is not an attribute of class " + cls);
      node.attributes.insert(it->second);
      node.defaulted.insert(it->second);
    }
  }
  return out;
}

}  // namespace deconv
