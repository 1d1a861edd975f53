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

#include "deconv/error.hpp"
#include "deconv/localizer.hpp"
#include "deconv/transfer.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace deconv;
using testing::oracle_distance;
using testing::random_uw;

namespace {

const char* kIncompat = "agt\tthing\tplace\nagt\tperson\tbuilding\n";

}  // namespace

TEST_CASE("distance: worked examples") {
  const PseudoDistance p;
  const UW a = parse_uw("chair(icl>furniture)");
  CHECK(distance(a, a, nullptr, 0, p, nullptr) == 0);
  CHECK(distance(a, parse_uw("chair(icl>seat)"), nullptr, 0, p, nullptr) == doctest::Approx(2));
  CHECK(distance(a, parse_uw("seat(icl>furniture)"), nullptr, 0, p, nullptr) == doctest::Approx(10));
}

TEST_CASE("distance: context conflicts come from actual arcs") {
  const auto t = IncompatibilityTable::parse(kIncompat);
  CHECK(t.conflicts("agt", "place", "thing"));  // symmetric in the classes
  const UnlGraph g = parse_graph("agt(run.@entry, garden(icl>place))\n");
  const PseudoDistance p;
  const UW w = g.node(1).uw;
  const UW x = parse_uw("run(agt>thing)");
  CHECK(distance(w, x, &g, 1, p, &t) == doctest::Approx(1 + 2));
  CHECK(distance(w, x, nullptr, 1, p, &t) == doctest::Approx(1));
}

TEST_CASE("localizer: exact members stay, others move to the nearest") {
  const auto t = IncompatibilityTable::parse(kIncompat);
  const std::vector<UW> dict{parse_uw("chair(icl>furniture)"), parse_uw("armchair(icl>seat)")};
  const UnlGraph g = parse_graph("agt(sit.@entry, cat)\nplc(sit, armchair(icl>furniture))\n");
  std::vector<UW> d2 = dict;
  d2.push_back(parse_uw("sit"));
  d2.push_back(parse_uw("cat"));
  const auto r = localize_lexically(g, d2, PseudoDistance{}, t);
  CHECK(r.graph.node(1).uw.text() == "sit");
  CHECK(r.graph.node(3).uw.text() == "armchair(icl>seat)");
  REQUIRE(r.choices.size() == 1);
  CHECK(r.choices[0].node == 3);
  CHECK(r.choices[0].original.text() == "armchair(icl>furniture)");

  // Idempotence: a localized graph is a fixpoint.
  const auto again = localize_lexically(r.graph, d2, PseudoDistance{}, t);
  CHECK(again.graph == r.graph);
  CHECK(again.choices.empty());
}

TEST_CASE("localizer: empty dictionary") {
  try {
    localize_lexically(parse_graph("agt(a.@entry, b)\n"), {}, PseudoDistance{}, IncompatibilityTable{});
    FAIL("expected EmptyDictionary");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyDictionary);
  }
}

TEST_CASE("localizer: overrides and the interactive chooser") {
  const std::vector<UW> dict{parse_uw("chair(icl>furniture)"), parse_uw("chair(icl>seat)"), parse_uw("a")};
  const UnlGraph g = parse_graph("mod(a.@entry, chair)\n");
  UwChooser pick_last = [](const LocalizationChoice& c) { return c.candidates.size() - 1; };
  LocalizeOptions o;
  o.chooser = &pick_last;
  auto r = localize_lexically(g, dict, PseudoDistance{}, IncompatibilityTable{}, o);
  CHECK(r.choices[0].mode == ChoiceMode::Interactive);
  CHECK(r.graph.node(2).uw == r.choices[0].candidates.back().uw);

  std::map<NodeId, std::string> ov{{2, "chair(icl>seat)"}};
  LocalizeOptions o2;
  o2.overrides = &ov;
  r = localize_lexically(g, dict, PseudoDistance{}, IncompatibilityTable{}, o2);
  CHECK(r.graph.node(2).uw.text() == "chair(icl>seat)");
  CHECK(r.choices[0].mode == ChoiceMode::Override);
}

TEST_CASE("localizer: property, minimizer agrees with the exhaustive oracle") {
  std::mt19937_64 rng(21);
  const auto table = IncompatibilityTable::parse(kIncompat);
  for (int k = 0; k < 100; ++k) {
    std::vector<UW> dict;
    std::set<std::string> seen;
    const std::size_t n = 1 + rng() % 100;
    while (dict.size() < n && seen.size() < 400) {
      UW w = random_uw(rng);
      if (seen.insert(w.text()).second) dict.push_back(w);
      else if (seen.size() > 300) break;
    }
    UnlGraph g = parse_graph("agt(x.@entry, garden(icl>place))\nobj(x, tree(icl>thing))\n");
    g.node(1).uw = random_uw(rng);
    dict.push_back(g.node(2).uw);
    dict.push_back(g.node(3).uw);
    const std::uint64_t seed = rng();
    LocalizeOptions o;
    o.seed = seed;
    const auto r = localize_lexically(g, dict, PseudoDistance{}, table, o);
    double best = 1e9;
    for (const auto& x : dict) best = std::min(best, oracle_distance(g.node(1).uw, x, g, 1, table));
    const UW& chosen = r.graph.node(1).uw;
    CHECK(oracle_distance(g.node(1).uw, chosen, g, 1, table) == doctest::Approx(best));
    // Same seed, same choice.
    CHECK(localize_lexically(g, dict, PseudoDistance{}, table, o).graph == r.graph);
  }
}

TEST_CASE("localizer: equal-distance ties depend only on the seed") {
  const std::vector<UW> dict{parse_uw("chair(icl>a)"), parse_uw("chair(icl>b)"), parse_uw("chair(icl>c)"),
                             parse_uw("x")};
  const UnlGraph g = parse_graph("mod(x.@entry, chair(icl>z))\n");
  std::set<std::string> picked;
  for (std::uint64_t seed = 0; seed < 32; ++seed) {
    LocalizeOptions o;
    o.seed = seed;
    const auto a = localize_lexically(g, dict, PseudoDistance{}, IncompatibilityTable{}, o);
    const auto b = localize_lexically(g, dict, PseudoDistance{}, IncompatibilityTable{}, o);
    CHECK(a.graph == b.graph);
    picked.insert(a.graph.node(2).uw.text());
  }
  CHECK(picked.size() > 1);
}

TEST_CASE("cultural localization: defaults are added and flagged, explicit values kept") {
  const auto& lw = testing::french();
  const UnlGraph g = parse_graph("agt(eat(icl>do,agt>thing,obj>thing).@entry, cat(icl>animal).@pl)\n");
  const UnlGraph out = localize_culturally(g, lw.profile, lw.inventory, [&](const UnlNode& n) {
    return lw.lexicon.category_of(n.uw.text(), lw.profile);
  });
  CHECK(out.node(1).has("present"));
  CHECK(out.node(1).defaulted.count("present") == 1);
  CHECK(out.node(2).has("pl"));
  CHECK_FALSE(out.node(2).has("sg"));
  CHECK(out.node(2).has("def"));
  CHECK(out.node(2).defaulted.count("def") == 1);
  CHECK(out.node(2).defaulted.count("pl") == 0);
}

TEST_CASE("transfer: one LU per node, CAT and restriction variables") {
  const auto& lw = testing::french();
  CountStore counts;
  const UnlGraph g = parse_graph("agt(eat(icl>do,agt>thing,obj>thing).@entry, cat(icl>animal))\n");
  const auto r = transfer_lexically(g, lw.lexicon, lw.profile, counts, lw.tvars);
  REQUIRE(r.graph.nodes.size() == 2);
  CHECK(r.graph.nodes.at(1).lu == "manger");
  CHECK(r.graph.nodes.at(1).vars.at("CAT") == "V");
  CHECK(r.graph.nodes.at(1).vars.at("PREDIC") == "ACTION");
  CHECK(r.graph.nodes.at(2).lu == "chat");
}

TEST_CASE("transfer: unknown UWs keep their headword") {
  const auto& lw = testing::french();
  CountStore counts;
  const auto r = transfer_lexically(parse_graph("agt(eat(icl>do,agt>thing,obj>thing).@entry, zorglub)\n"),
                                    lw.lexicon, lw.profile, counts, lw.tvars);
  CHECK(r.graph.nodes.at(2).untranslated);
  CHECK(r.graph.nodes.at(2).lu == "zorglub");
}

TEST_CASE("transfer: equal-score ties are seeded, counts break them") {
  const auto& lw = testing::french();
  const UnlGraph g = parse_graph("obj(look(icl>do,agt>thing,obj>thing).@entry, chair(icl>furniture))\n");
  std::set<std::string> picked;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    CountStore counts;
    TransferOptions o;
    o.seed = seed;
    picked.insert(transfer_lexically(g, lw.lexicon, lw.profile, counts, lw.tvars, o).graph.nodes.at(2).lu);
  }
  CHECK(picked == std::set<std::string>{"chaise", "fauteuil"});
  CountStore counts;
  counts.increment(PairKind::UwToLu, "chair(icl>furniture)", "chaise");
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    TransferOptions o;
    o.seed = seed;
    CHECK(transfer_lexically(g, lw.lexicon, lw.profile, counts, lw.tvars, o).graph.nodes.at(2).lu == "chaise");
  }
}
