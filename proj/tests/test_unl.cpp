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
#include "deconv/unl.hpp"
#include "support.hpp"

using namespace deconv;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("uw: headword and restrictions") {
  const UW w = parse_uw("eat(icl>do,agt>thing, obj>thing)");
  CHECK(w.headword == "eat");
  REQUIRE(w.restrictions.size() == 3);
  CHECK(w.restrictions[0].relation == "icl");
  CHECK(w.restrictions[0].target == "do");
  CHECK(w.text() == "eat(icl>do, agt>thing, obj>thing)");
  CHECK(w.semantic_class() == "do");
  CHECK(parse_uw("Mary").semantic_class() == "Mary");
}

TEST_CASE("uw: nested targets are kept verbatim") {
  const UW w = parse_uw("bank(icl>institution(icl>organization))");
  REQUIRE(w.restrictions.size() == 1);
  CHECK(w.restrictions[0].target == "institution(icl>organization)");
}

TEST_CASE("uw: duplicate restrictions collapse") {
  CHECK(parse_uw("a(icl>b, icl>b)").restrictions.size() == 1);
}

TEST_CASE("uw: malformed text") {
  CHECK(code_of([] { parse_uw("eat(icl>do"); }) == ErrorCode::MalformedUW);
  CHECK(code_of([] { parse_uw("(icl>do)"); }) == ErrorCode::MalformedUW);
  CHECK(code_of([] { parse_uw("eat(icl)"); }) == ErrorCode::MalformedUW);
}

TEST_CASE("graph: canonical node numbering and attributes") {
  const UnlGraph g = parse_graph(
      "agt(eat(icl>do).@entry.@present, cat(icl>animal).@def)\n"
      "obj(eat(icl>do), fish(icl>animal))\n");
  REQUIRE(g.nodes.size() == 3);
  CHECK(g.entry == 1);
  CHECK(g.node(1).has("present"));
  CHECK(g.node(1).has("entry"));
  CHECK(g.node(2).uw.headword == "cat");
  CHECK(g.node(3).uw.headword == "fish");
  REQUIRE(g.arcs.size() == 2);
  CHECK(g.arcs[1].source == 1);
  CHECK(g.arcs[1].target == 3);
}

TEST_CASE("graph: instance suffixes distinguish equal UWs") {
  const UnlGraph g = parse_graph("and(cat:01.@entry, cat:02)\n");
  REQUIRE(g.nodes.size() == 2);
  CHECK(g.node(1).instance != g.node(2).instance);
}

TEST_CASE("graph: scopes and hypernodes") {
  const UnlGraph g = parse_graph(
      "agt(think.@entry, Mary)\n"
      "obj(think, :01)\n"
      "agt:01(sleep.@entry, cat)\n");
  CHECK(g.scopes.count("01") == 1);
  const NodeId h = g.hypernode_of("01");
  REQUIRE(h != 0);
  CHECK(g.node(h).is_hypernode());
  CHECK(g.members_of("01").size() == 2);
  CHECK(g.node(g.scope_entry("01")).uw.headword == "sleep");
  CHECK(g.arcs_in("01").size() == 1);
}

TEST_CASE("graph: parse errors") {
  CHECK(code_of([] { parse_graph("agt(a.@entry)\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_graph("agt(a.@entry, b.@entry)\n"); }) == ErrorCode::DuplicateEntryNode);
  CHECK(code_of([] { parse_graph("agt(a.@entry, :01)\nobj:01(b.@entry, :02)\nmod:02(c, d)\n"); }) ==
        ErrorCode::NestedScope);
  CHECK(code_of([] { parse_document("[unl]\nagt(a.@entry, b)\n"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_document("[unl]\n[/unl]\n"); }) == ErrorCode::EmptyGraph);
}

TEST_CASE("graph: strict parsing against an inventory") {
  const Inventory inv = Inventory::parse("[relations]\nagt\n[attributes]\nentry\n");
  ParseOptions o{&inv, true};
  CHECK(code_of([&] { parse_graph("xyz(a.@entry, b)\n", o); }) == ErrorCode::UnknownRelation);
  CHECK(code_of([&] { parse_graph("agt(a.@entry.@past, b)\n", o); }) == ErrorCode::UnknownAttribute);
  CHECK_NOTHROW(parse_graph("agt(a.@entry, b)\n", o));
}

TEST_CASE("document: comments and renderings precede their block") {
  const UnlDocument d = parse_document(
      "; first\n;@fr A b.\n[unl]\nagt(a.@entry, b)\n[/unl]\n\n[unl]\nobj(c.@entry, d)\n[/unl]\n");
  REQUIRE(d.utterances.size() == 2);
  CHECK(d.utterances[0].comments == "first");
  CHECK(d.utterances[0].renderings.at("fr") == "A b.");
}

TEST_CASE("document: serialization round-trips the golden corpus") {
  const UnlDocument d = parse_document(testing::slurp(testing::corpus_dir() / "golden.unl"));
  REQUIRE(d.utterances.size() >= 10);
  const std::string once = serialize_document(d);
  const UnlDocument again = parse_document(once);
  CHECK(again == d);
  CHECK(serialize_document(again) == once);
}

TEST_CASE("document: property, random graphs round-trip") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    UnlDocument d;
    Utterance u;
    u.graph = testing::random_connected(rng, 1 + static_cast<int>(rng() % 30), rng() % 2 == 0);
    d.utterances.push_back(u);
    const UnlDocument back = parse_document(serialize_document(d));
    REQUIRE(back.utterances.size() == 1);
    CHECK(back.utterances[0].graph.nodes.size() == u.graph.nodes.size());
    CHECK(back.utterances[0].graph.arcs.size() == u.graph.arcs.size());
    CHECK(serialize_document(back) == serialize_document(parse_document(serialize_document(back))));
  }
}

TEST_CASE("inventory: classes") {
  const Inventory inv = Inventory::parse(
      "[relations]\nagt obj\n[attributes]\nentry sg pl def\n[classes]\nnumber = sg pl\n");
  CHECK(inv.relations.count("obj") == 1);
  CHECK(inv.class_of("pl") == std::optional<std::string>("number"));
  CHECK_FALSE(inv.class_of("def").has_value());
  CHECK(code_of([] { Inventory::parse("[classes]\nnumber = zz\n"); }) == ErrorCode::FormatError);
}
