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

#include <thread>

#include "deconv/error.hpp"
#include "deconv/morph.hpp"
#include "deconv/session.hpp"
#include "support.hpp"

using namespace deconv;

namespace {

UnlDocument golden() { return parse_document(testing::slurp(testing::corpus_dir() / "golden.unl")); }

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

Utterance one(const std::string& arcs) {
  return parse_document("[unl]\n" + arcs + "[/unl]\n").utterances.at(0);
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

Edit choose(NodeId n, std::string lu, std::string uw = {}) {
  Edit e;
  e.kind = Edit::ChooseLu;
  e.node = n;
  e.lu = std::move(lu);
  e.uw = std::move(uw);
  return e;
}

Edit attribute(NodeId n, std::string name, std::string value, AttributeLevel level) {
  Edit e;
  e.kind = Edit::SetAttribute;
  e.node = n;
  e.name = std::move(name);
  e.value = std::move(value);
  e.level = level;
  return e;
}

const char* kChairs = "obj(look(icl>do,agt>thing,obj>thing).@entry.@present, chair(icl>furniture).@def)\n"
                      "agt(look(icl>do,agt>thing,obj>thing), child(icl>person).@def)\n";

}  // namespace

TEST_CASE("pipeline: golden corpus matches the frozen renderings") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  const auto doc = golden();
  const auto plain = lines_of(testing::slurp(testing::corpus_dir() / "golden.txt"));
  const auto marked = lines_of(testing::slurp(testing::corpus_dir() / "golden.marked.txt"));
  REQUIRE(plain.size() == doc.utterances.size());
  REQUIRE(marked.size() == doc.utterances.size());
  for (std::size_t i = 0; i < doc.utterances.size(); ++i) {
    const UtteranceState s = dc.deconvert(doc.utterances[i], 0);
    CHECK(s.rendering(false) == plain[i]);
    CHECK(s.rendering(true) == marked[i]);
  }
}

TEST_CASE("pipeline: validation failure stops before localization") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  const UtteranceState s = dc.deconvert(one("agt(eat(icl>do,agt>thing,obj>thing).@entry, cat(icl>animal))\n"
                                            "obj(fish(icl>animal), apple(icl>fruit))\n"),
                                        0);
  CHECK(s.validated_run);
  CHECK_FALSE(s.report.ok);
  CHECK_FALSE(s.localized.has_value());
  CHECK_FALSE(s.complete());
}

TEST_CASE("pipeline: every stage is cached and rerun is a no-op") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  UtteranceState s = dc.deconvert(golden().utterances[0], 0);
  for (int k = 0; k < kStageCount; ++k) CHECK(s.has(static_cast<Stage>(k)));
  const std::string before = state_to_json(s);
  dc.run(s);
  CHECK(state_to_json(s) == before);
}

TEST_CASE("pipeline: stage errors name their stage") {
  CountStore counts;
  Lingware lw = testing::french();
  lw.gs2 = compile_grammar("MAXITER 3\nRULE a PRIORITY 1 : ?x{CAT=N} ==> ?x{CAT=V}\n"
                           "RULE b PRIORITY 1 : ?x{CAT=V} ==> ?x{CAT=N}\n",
                           lw.schema, "loop");
  Deconverter dc(lw, counts);
  try {
    dc.deconvert(golden().utterances[0], 0);
    FAIL("expected IterationLimit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IterationLimit);
    CHECK(e.phase() == "umc");
  }
}

TEST_CASE("pipeline: trace chains resolve every content token") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  const UtteranceState s = dc.deconvert(golden().utterances[7], 0);  // Marie donne une pomme rouge à l'enfant.
  const auto& tokens = s.surface->tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto chain = dc.resolve_trace(s, i);
    if (tokens[i].mark == 0) {
      CHECK(chain.empty());
      continue;
    }
    REQUIRE(chain.size() == 5);
    CHECK(chain.front().stage == "umc");
    CHECK(chain.front().node == tokens[i].mark);
    CHECK(chain.back().stage == "unl");
    CHECK(s.source.graph.contains(chain.back().node));
  }
  // "rouge" comes from red(icl>color).
  const auto it = std::find_if(tokens.begin(), tokens.end(), [](const SurfaceToken& t) { return t.text == "rouge"; });
  REQUIRE(it != tokens.end());
  const auto chain = dc.resolve_trace(s, static_cast<std::size_t>(it - tokens.begin()));
  CHECK(s.source.graph.node(chain.back().node).uw.headword == "red");
  CHECK(code_of([&] { dc.resolve_trace(s, tokens.size()); }) == ErrorCode::UnknownNode);
}

TEST_CASE("edits: choose-lu keeps earlier stages and counts the choice") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  UtteranceState s = dc.deconvert(one(kChairs), 0);
  const std::string chosen = s.transferred->nodes.at(2).lu;
  const std::string other = chosen == "chaise" ? "fauteuil" : "chaise";
  const std::string localized = stage_json(s, Stage::Localized);
  dc.apply_edit(s, choose(2, other));
  CHECK(s.dirty_from == Stage::Transferred);
  CHECK_FALSE(s.transferred.has_value());
  dc.run(s);
  CHECK(stage_json(s, Stage::Localized) == localized);
  CHECK(s.transferred->nodes.at(2).lu == other);
  CHECK(counts.count(PairKind::UwToLu, "chair(icl>furniture)", other) == 1);
  CHECK(s.rendering(false) == (other == "chaise" ? "L'enfant regarde la chaise." : "L'enfant regarde le fauteuil."));
}

TEST_CASE("edits: choose-lu errors") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  UtteranceState s = dc.deconvert(one(kChairs), 0);
  CHECK(code_of([&] { dc.apply_edit(s, choose(2, "banane")); }) == ErrorCode::LuNotCandidate);
  CHECK(code_of([&] { dc.apply_edit(s, choose(2, "chaise", "nothing(icl>here)")); }) == ErrorCode::NotInDictionary);
  CHECK(code_of([&] { dc.apply_edit(s, choose(42, "chaise")); }) == ErrorCode::UnknownNode);
}

TEST_CASE("edits: choose-lu through another UW relocalizes and counts the UW pair") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  UtteranceState s = dc.deconvert(golden().utterances[11], 0);  // armchair(icl>furniture)
  REQUIRE(s.localized->node(3).uw.text() == "armchair(icl>seat)");
  dc.apply_edit(s, choose(3, "chaise"));
  CHECK(s.dirty_from == Stage::Localized);
  dc.run(s);
  CHECK(s.localized->node(3).uw.text() == "chair(icl>furniture)");
  CHECK(s.rendering(false) == "L'enfant regarde la chaise.");
  CHECK(counts.count(PairKind::UwToUw, "armchair(icl>furniture)", "chair(icl>furniture)") == 1);
}

TEST_CASE("edits: candidates and widening") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  UtteranceState s = dc.deconvert(golden().utterances[11], 0);
  const auto narrow = dc.candidates(s, 3, false);
  const auto wide = dc.candidates(s, 3, true);
  REQUIRE(narrow.size() == 1);
  CHECK(narrow[0].lu == "fauteuil");
  CHECK(wide.size() > narrow.size());
  for (const auto& c : narrow)
    CHECK(std::any_of(wide.begin(), wide.end(), [&](const CandidateLu& w) { return w.lu == c.lu && w.uw == c.uw; }));
}

TEST_CASE("edits: interlingual attributes invalidate from localization") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  UtteranceState s = dc.deconvert(golden().utterances[0], 0);
  const std::string validated = stage_json(s, Stage::Validated);
  dc.apply_edit(s, attribute(2, "pl", "on", AttributeLevel::Interlingual));
  CHECK(s.dirty_from == Stage::Localized);
  CHECK(s.has(Stage::Validated));
  for (int k = static_cast<int>(Stage::Localized); k < kStageCount; ++k) CHECK_FALSE(s.has(static_cast<Stage>(k)));
  dc.run(s);
  CHECK(stage_json(s, Stage::Validated) == validated);
  CHECK(s.rendering(false) == "Les chats mangent le poisson.");
  CHECK(code_of([&] { dc.apply_edit(s, attribute(2, "bogus", "on", AttributeLevel::Interlingual)); }) ==
        ErrorCode::UnknownAttribute);
  CHECK(code_of([&] { dc.apply_edit(s, attribute(2, "entry", "on", AttributeLevel::Interlingual)); }) ==
        ErrorCode::UnknownAttribute);
}

TEST_CASE("edits: a style variable reaches the generator only") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  UtteranceState s = dc.deconvert(golden().utterances[5], 0);  // L'ouvrier a construit la maison.
  const std::string tt = stage_json(s, Stage::TransferTree);
  dc.apply_edit(s, attribute(1, "STYLE", "NOMINAL", AttributeLevel::Style));
  CHECK(s.dirty_from == Stage::Gma);
  dc.run(s);
  CHECK(stage_json(s, Stage::TransferTree) == tt);
  CHECK(s.rendering(false) == "La construction de la maison par l'ouvrier.");
  CHECK(code_of([&] { dc.apply_edit(s, attribute(1, "STYLE", "FANCY", AttributeLevel::Style)); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { dc.apply_edit(s, attribute(1, "NOPE", "X", AttributeLevel::Style)); }) ==
        ErrorCode::UnknownAttribute);
}

TEST_CASE("export: the enriched source carries the added attributes only") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  UtteranceState s = dc.deconvert(golden().utterances[0], 0);
  dc.apply_edit(s, attribute(2, "pl", "on", AttributeLevel::Interlingual));
  dc.apply_edit(s, attribute(3, "indef", "on", AttributeLevel::Interlingual));
  const Utterance e = dc.enriched(s);
  CHECK(e.graph.node(2).has("pl"));
  CHECK(e.graph.node(3).has("indef"));
  CHECK_FALSE(e.graph.node(3).has("def"));  // same class, replaced
  CHECK(e.comments.find("proposed revision") != std::string::npos);
  CHECK(e.graph.arcs == s.source.graph.arcs);
}

TEST_CASE("global replace: changes every hit where the target is offered") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  std::vector<UtteranceState> states;
  states.push_back(dc.deconvert(one(kChairs), 0));
  states.push_back(dc.deconvert(golden().utterances[0], 0));
  states.push_back(dc.deconvert(one(kChairs), 1));
  const std::string first = states[0].transferred->nodes.at(2).lu;
  const std::string other = first == "chaise" ? "fauteuil" : "chaise";
  const ReplaceResult r = global_replace(dc, states, first, other);
  for (std::size_t u : r.changed) CHECK(states[u].transferred->nodes.at(2).lu == other);
  CHECK(std::find(r.changed.begin(), r.changed.end(), 0u) != r.changed.end());
  CHECK(std::find(r.changed.begin(), r.changed.end(), 1u) == r.changed.end());
  CHECK(states[0].complete());
}

TEST_CASE("state: JSON round trip and record files") {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  UtteranceState s = dc.deconvert(golden().utterances[9], 3);
  dc.apply_edit(s, attribute(2, "indef", "on", AttributeLevel::Interlingual));
  const std::string j = state_to_json(s);
  CHECK(state_to_json(state_from_json(j)) == j);
  CHECK(code_of([] { state_from_json("{not json"); }) == ErrorCode::StorageError);

  testing::TempDir dir;
  write_records(dir / "r", {"a", "", "multi\nline"});
  CHECK(read_records(dir / "r") == std::vector<std::string>{"a", "", "multi\nline"});
  {
    std::ofstream out(dir / "bad");
    out << "12\nshort\n";
  }
  CHECK(code_of([&] { read_records(dir / "bad"); }) == ErrorCode::StorageError);
}

TEST_CASE("lingware: load errors are attributed to lingware") {
  LingwarePaths p = LingwarePaths::from_dir(testing::lingware_dir());
  p.gs1 = testing::lingware_dir() / "missing.rules";
  try {
    Lingware::load(p);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.error_class() == ErrorClass::Lingware);
    CHECK(e.phase() == "lingware");
  }
  p = LingwarePaths::from_dir(testing::lingware_dir());
  p.profile_name = "nope";
  CHECK_THROWS_AS(Lingware::load(p), Error);
  p.profile_name = "fr-finance";
  CHECK(Lingware::load(p).profile.name == "fr-finance");
}

TEST_CASE("session: policies decide when edits re-deconvert") {
  Session s(testing::french(), "");
  s.add(golden(), 0);
  s.run_all();
  const auto pl = attribute(2, "pl", "on", AttributeLevel::Interlingual);

  s.set_policy(Policy::OnDemand, 1);
  s.edit(0, pl);
  CHECK_FALSE(s.snapshot(0).complete());
  CHECK(s.redeconvert() == std::vector<std::size_t>{0});
  CHECK(s.snapshot(0).rendering(false) == "Les chats mangent le poisson.");

  s.set_policy(Policy::EveryK, 2);
  s.edit(1, attribute(2, "sg", "on", AttributeLevel::Interlingual));
  CHECK_FALSE(s.snapshot(1).complete());
  s.edit(1, attribute(3, "sg", "on", AttributeLevel::Interlingual));
  CHECK(s.snapshot(1).complete());
  CHECK(s.snapshot(1).rendering(false) == "Le chat mange le poisson.");

  s.set_policy(Policy::Always, 1);
  s.edit(2, attribute(2, "pl", "on", AttributeLevel::Interlingual));
  CHECK(s.snapshot(2).rendering(false) == "Les enfants mangent une pomme.");
  CHECK_THROWS_AS(s.set_policy(Policy::EveryK, 0), Error);
}

TEST_CASE("session: stale versions conflict") {
  Session s(testing::french(), "");
  s.add(golden(), 0);
  s.run_all();
  const auto v = s.snapshot(0).version;
  s.edit(0, attribute(2, "pl", "on", AttributeLevel::Interlingual), v);
  CHECK(code_of([&] { s.edit(0, attribute(2, "sg", "on", AttributeLevel::Interlingual), v); }) ==
        ErrorCode::Conflict);
  CHECK(code_of([&] { s.snapshot(99); }) == ErrorCode::UnknownUtterance);
}

TEST_CASE("session: concurrent edits on different utterances") {
  Session s(testing::french(), "");
  s.add(golden(), 0);
  s.run_all();
  std::vector<std::thread> threads;
  for (std::size_t u = 0; u < 4; ++u)
    threads.emplace_back([&, u] { s.edit(u, attribute(2, "pl", "on", AttributeLevel::Interlingual)); });
  for (auto& t : threads) t.join();
  for (std::size_t u = 0; u < 4; ++u) CHECK(s.snapshot(u).edits.attributes.at(2).at("pl"));
  CHECK(s.snapshot(0).rendering(false) == "Les chats mangent le poisson.");
}

TEST_CASE("session: save and load restore states and policy") {
  testing::TempDir dir;
  Session a(testing::french(), dir / "counts.tsv");
  a.add(golden(), 5);
  a.run_all();
  a.set_policy(Policy::EveryK, 3);
  a.edit(0, attribute(2, "pl", "on", AttributeLevel::Interlingual));
  a.save(dir / "a.session");

  Session b(testing::french(), dir / "counts.tsv");
  b.load(dir / "a.session");
  CHECK(b.size() == a.size());
  CHECK(b.policy() == Policy::EveryK);
  CHECK(b.every_k() == 3);
  for (std::size_t u = 0; u < a.size(); ++u) CHECK(state_to_json(b.snapshot(u)) == state_to_json(a.snapshot(u)));
  {
    std::ofstream out(dir / "bad.session");
    out << "2\n{}\n";
  }
  CHECK(code_of([&] { b.load(dir / "bad.session"); }) == ErrorCode::StorageError);
}
