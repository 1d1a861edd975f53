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
#include "deconv/morph.hpp"
#include "support.hpp"

using namespace deconv;

namespace {

const Schema& schema() { return testing::french().schema; }
const MorphPack& pack() { return testing::french().morph; }

Decoration deco(std::initializer_list<std::pair<const char*, const char*>> kv) {
  Decoration d;
  for (const auto& [k, v] : kv) schema().assign(d, k, v);
  return d;
}

TreeNode word(int umc, std::initializer_list<std::pair<const char*, const char*>> kv) {
  TreeNode t;
  t.deco = deco(kv);
  t.umc = umc;
  return t;
}

}  // namespace

TEST_CASE("morph: paradigm rules") {
  CHECK(pack().realize(deco({{"LEMMA", "manger"}, {"PARADIGM", "er1"}, {"TNS", "PRES"}})) == "mange");
  CHECK(pack().realize(deco({{"LEMMA", "manger"}, {"PARADIGM", "er1"}, {"TNS", "PRES"}, {"NUM", "PLU"}})) ==
        "mangent");
  CHECK(pack().realize(deco({{"LEMMA", "manger"}, {"PARADIGM", "er1"}, {"TNS", "PPART"}})) == "mangé");
  CHECK(pack().realize(deco({{"LEMMA", "manger"}, {"PARADIGM", "er1"}, {"TNS", "FUT"}})) == "mangera");
  CHECK(pack().realize(deco({{"LEMMA", "construire"}, {"PARADIGM", "ir_uire"}, {"TNS", "PPART"}})) ==
        "construit");
  CHECK(pack().realize(deco({{"LEMMA", "le"}, {"PARADIGM", "det_le"}, {"GNR", "FEM"}})) == "la");
  CHECK(pack().realize(deco({{"LEMMA", "un"}, {"PARADIGM", "det_un"}, {"NUM", "PLU"}})) == "des");
  CHECK(pack().realize(deco({{"LEMMA", "noir"}, {"PARADIGM", "a_reg"}, {"NUM", "PLU"}, {"GNR", "FEM"}})) ==
        "noires");
  CHECK(pack().realize(deco({{"LEMMA", "Marie"}, {"PARADIGM", "inv"}})) == "Marie");
}

TEST_CASE("morph: no matching rule") {
  // The fallback cannot strip a suffix the lemma lacks.
  const MorphPack p = MorphPack::parse("only\tPARADIGM=x\tlemma\nfallback\t*\tlemma\tstrip:zz\n", "", "");
  CHECK_THROWS_AS(p.realize(deco({{"LEMMA", "a"}, {"PARADIGM", "y"}})), Error);
  try {
    p.realize(deco({{"LEMMA", "a"}, {"PARADIGM", "y"}}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoMatchingMorphRule);
  }
}

TEST_CASE("morph: malformed packs") {
  CHECK_THROWS_AS(MorphPack::parse("r\t*\tlemma\tadd:missing\n", "", ""), Error);
  CHECK_THROWS_AS(MorphPack::parse("r\tPARADIGM=x\tlemma\n", "", ""), Error);  // no fallback
  CHECK_THROWS_AS(MorphPack::parse("", "", "elide le @Q => l'\n"), Error);
  CHECK_THROWS_AS(MorphPack::parse("", "", "frobnicate a b\n"), Error);
}

TEST_CASE("morph: vowel class covers accented letters") {
  CHECK(pack().in_class("V", "enfant"));
  CHECK(pack().in_class("V", "été"));
  CHECK_FALSE(pack().in_class("V", "chat"));
}

TEST_CASE("generation: elision, contraction and marks") {
  TreeNode root;
  root.umc = 1;
  root.children = {word(2, {{"LEMMA", "le"}, {"PARADIGM", "det_le"}}),
                   word(3, {{"LEMMA", "enfant"}, {"PARADIGM", "n_s"}}),
                   word(4, {{"LEMMA", "à"}, {"PARADIGM", "inv"}}),
                   word(5, {{"LEMMA", "le"}, {"PARADIGM", "det_le"}}),
                   word(6, {{"LEMMA", "chat"}, {"PARADIGM", "n_s"}})};
  const SurfaceText s = generate(root, pack());
  CHECK(s.render(false) == "L'enfant au chat.");
  CHECK(s.render(true) == "L'&2_enfant&3_ au&4_ chat&6_.");
  CHECK(strip_marks(s.render(true)) == s.render(false));
  REQUIRE_FALSE(s.tokens.empty());
  CHECK(s.tokens.back().mark == 0);
}

TEST_CASE("generation: contraction is blocked before a vowel") {
  TreeNode root;
  root.umc = 1;
  root.children = {word(2, {{"LEMMA", "à"}, {"PARADIGM", "inv"}}),
                   word(3, {{"LEMMA", "le"}, {"PARADIGM", "det_le"}}),
                   word(4, {{"LEMMA", "enfant"}, {"PARADIGM", "n_s"}})};
  CHECK(generate(root, pack()).render(false) == "À l'enfant.");
}

TEST_CASE("generation: capitalization handles Latin-1 letters") {
  CHECK(capitalize_first("été") == "Été");
  CHECK(capitalize_first("chat") == "Chat");
  CHECK(capitalize_first("") == "");
}
