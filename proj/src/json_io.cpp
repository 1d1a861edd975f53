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

#include "json_io.hpp"

#include "deconv/error.hpp"

namespace deconv {

namespace {

ChoiceMode mode_from(const std::string& s) {
  if (s == "interactive") return ChoiceMode::Interactive;
  if (s == "override") return ChoiceMode::Override;
  return ChoiceMode::Automatic;
}

// Integer-keyed maps travel as objects with decimal keys.
template <typename V>
json int_map(const std::map<int, V>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

template <typename V>
std::map<int, V> int_map_from(const json& j) {
  std::map<int, V> out;
  for (const auto& [k, v] : j.items()) out.emplace(std::stoi(k), v.template get<V>());
  return out;
}

}  // namespace

void to_json(json& j, const UW& uw) { j = uw.text(); }
void from_json(const json& j, UW& uw) { uw = parse_uw(j.get<std::string>()); }

void to_json(json& j, const UnlNode& n) {
  j = json{{"id", n.id},           {"uw", n.is_hypernode() ? json("") : json(n.uw)},
           {"instance", n.instance}, {"attributes", n.attributes},
           {"defaulted", n.defaulted}, {"scope", n.scope},
           {"hypernode", n.hypernode}};
}

void from_json(const json& j, UnlNode& n) {
  n.id = j.at("id");
  n.hypernode = j.at("hypernode");
  if (!n.is_hypernode()) n.uw = j.at("uw").get<UW>();
  n.instance = j.at("instance");
  n.attributes = j.at("attributes").get<std::set<std::string>>();
  n.defaulted = j.at("defaulted").get<std::set<std::string>>();
  n.scope = j.at("scope");
}

void to_json(json& j, const UnlArc& a) {
  j = json{{"source", a.source}, {"target", a.target}, {"label", a.label}, {"scope", a.scope}};
}

void from_json(const json& j, UnlArc& a) {
  a.source = j.at("source");
  a.target = j.at("target");
  a.label = j.at("label");
  a.scope = j.at("scope");
}

void to_json(json& j, const UnlGraph& g) {
  j = json{{"nodes", g.nodes}, {"arcs", g.arcs}, {"scopes", g.scopes}, {"entry", g.entry}};
}

void from_json(const json& j, UnlGraph& g) {
  g.nodes = j.at("nodes").get<std::vector<UnlNode>>();
  g.arcs = j.at("arcs").get<std::vector<UnlArc>>();
  g.scopes = j.at("scopes").get<std::map<std::string, std::vector<NodeId>>>();
  g.entry = j.at("entry");
}

void to_json(json& j, const Utterance& u) {
  j = json{{"graph", u.graph}, {"comments", u.comments}, {"renderings", u.renderings}};
}

void from_json(const json& j, Utterance& u) {
  u.graph = j.at("graph");
  u.comments = j.at("comments");
  u.renderings = j.at("renderings").get<std::map<std::string, std::string>>();
}

void to_json(json& j, const Issue& i) {
  j = json{{"severity", severity_name(i.severity)}, {"code", i.code}, {"locus", i.locus},
           {"message", i.message}};
}

void from_json(const json& j, Issue& i) {
  i.severity = j.at("severity") == "warning" ? Severity::Warning : Severity::Error;
  i.code = j.at("code");
  i.locus = j.at("locus");
  i.message = j.at("message");
}

void to_json(json& j, const ValidationReport& r) { j = json{{"ok", r.ok}, {"issues", r.issues}}; }

void from_json(const json& j, ValidationReport& r) {
  r.ok = j.at("ok");
  r.issues = j.at("issues").get<std::vector<Issue>>();
}

void to_json(json& j, const UwCandidate& c) { j = json{{"uw", c.uw}, {"distance", c.distance}}; }

void from_json(const json& j, UwCandidate& c) {
  c.uw = j.at("uw");
  c.distance = j.at("distance");
}

void to_json(json& j, const LocalizationChoice& c) {
  j = json{{"node", c.node},     {"original", c.original},          {"candidates", c.candidates},
           {"chosen", c.chosen}, {"mode", choice_mode_name(c.mode)}};
}

void from_json(const json& j, LocalizationChoice& c) {
  c.node = j.at("node");
  c.original = j.at("original");
  c.candidates = j.at("candidates").get<std::vector<UwCandidate>>();
  c.chosen = j.at("chosen");
  c.mode = mode_from(j.at("mode"));
}

void to_json(json& j, const LuCandidate& c) { j = json{{"lu", c.lu}, {"score", c.score}}; }

void from_json(const json& j, LuCandidate& c) {
  c.lu = j.at("lu");
  c.score = j.at("score");
}

void to_json(json& j, const TransferChoice& c) {
  j = json{{"node", c.node},     {"uw", c.uw},                      {"alternatives", c.alternatives},
           {"chosen", c.chosen}, {"mode", choice_mode_name(c.mode)}};
}

void from_json(const json& j, TransferChoice& c) {
  c.node = j.at("node");
  c.uw = j.at("uw");
  c.alternatives = j.at("alternatives").get<std::vector<LuCandidate>>();
  c.chosen = j.at("chosen");
  c.mode = mode_from(j.at("mode"));
}

void to_json(json& j, const LexEntry& e) {
  j = json{{"uw", e.uw_text}, {"lu", e.lu},         {"pos", e.pos},
           {"domain", e.domain}, {"weight", e.weight}, {"dictionary", e.dictionary},
           {"line", e.line}};
}

void from_json(const json& j, LexEntry& e) {
  e.uw_text = j.at("uw");
  e.uw = parse_uw(e.uw_text);
  e.lu = j.at("lu");
  e.pos = j.at("pos");
  e.domain = j.at("domain");
  e.weight = j.at("weight");
  e.dictionary = j.at("dictionary");
  e.line = j.at("line");
}

void to_json(json& j, const TransferredNode& n) {
  j = json{{"node", n.node},
           {"lu", n.lu},
           {"uw", n.uw_text},
           {"vars", n.vars},
           {"attributes", n.attributes},
           {"defaulted", n.defaulted},
           {"entry", n.entry ? json(*n.entry) : json(nullptr)},
           {"untranslated", n.untranslated}};
}

void from_json(const json& j, TransferredNode& n) {
  n.node = j.at("node");
  n.lu = j.at("lu");
  n.uw_text = j.at("uw");
  n.vars = j.at("vars").get<std::map<std::string, std::string>>();
  n.attributes = j.at("attributes").get<std::set<std::string>>();
  n.defaulted = j.at("defaulted").get<std::set<std::string>>();
  if (!j.at("entry").is_null()) n.entry = j.at("entry").get<LexEntry>();
  n.untranslated = j.at("untranslated");
}

void to_json(json& j, const TransferredGraph& g) {
  j = json{{"graph", g.graph}, {"nodes", int_map(g.nodes)}};
}

void from_json(const json& j, TransferredGraph& g) {
  g.graph = j.at("graph");
  g.nodes = int_map_from<TransferredNode>(j.at("nodes"));
}

void to_json(json& j, const GTNode& n) {
  j = json{{"id", n.id},           {"source", n.source}, {"label", n.label},
           {"inverse", n.inverse}, {"parent", n.parent}, {"children", n.children}};
}

void from_json(const json& j, GTNode& n) {
  n.id = j.at("id");
  n.source = j.at("source");
  n.label = j.at("label");
  n.inverse = j.at("inverse");
  n.parent = j.at("parent");
  n.children = j.at("children").get<std::vector<int>>();
}

void to_json(json& j, const GTResult& r) {
  j = json{{"nodes", r.nodes}, {"association", int_map(r.association)},
           {"reversed", r.reversed_count}};
}

void from_json(const json& j, GTResult& r) {
  r.nodes = j.at("nodes").get<std::vector<GTNode>>();
  r.association = int_map_from<std::vector<int>>(j.at("association"));
  r.reversed_count = j.at("reversed");
}

void to_json(json& j, const Decoration& d) { j = json{{"scalars", d.scalars}, {"sets", d.sets}}; }

void from_json(const json& j, Decoration& d) {
  d.scalars = j.at("scalars").get<std::map<std::string, std::string>>();
  d.sets = j.at("sets").get<std::map<std::string, std::set<std::string>>>();
}

void to_json(json& j, const TreeNode& n) {
  j = json{{"deco", n.deco}, {"unl", n.unl}, {"tid", n.tid}, {"umc", n.umc}, {"children", n.children}};
}

void from_json(const json& j, TreeNode& n) {
  n.deco = j.at("deco");
  n.unl = j.at("unl");
  n.tid = j.at("tid");
  n.umc = j.at("umc");
  n.children = j.at("children").get<std::vector<TreeNode>>();
}

void to_json(json& j, const SurfaceToken& t) {
  j = json{{"text", t.text}, {"mark", t.mark}, {"glue", t.glue}};
}

void from_json(const json& j, SurfaceToken& t) {
  t.text = j.at("text");
  t.mark = j.at("mark");
  t.glue = j.at("glue");
}

void to_json(json& j, const SurfaceText& s) { j = json{{"tokens", s.tokens}}; }
void from_json(const json& j, SurfaceText& s) { s.tokens = j.at("tokens").get<std::vector<SurfaceToken>>(); }

void to_json(json& j, const Edits& e) {
  j = json{{"uw_overrides", int_map(e.uw_overrides)},
           {"lu_overrides", int_map(e.lu_overrides)},
           {"attributes", int_map(e.attributes)},
           {"style", int_map(e.style)}};
}

void from_json(const json& j, Edits& e) {
  e.uw_overrides = int_map_from<std::string>(j.at("uw_overrides"));
  e.lu_overrides = int_map_from<std::string>(j.at("lu_overrides"));
  e.attributes = int_map_from<std::map<std::string, bool>>(j.at("attributes"));
  e.style = int_map_from<std::map<std::string, std::string>>(j.at("style"));
}

void to_json(json& j, const TraceLink& l) { j = json{{"stage", l.stage}, {"node", l.node}}; }

void to_json(json& j, const CandidateLu& c) {
  j = json{{"uw", c.uw}, {"lu", c.lu}, {"score", c.score}, {"distance", c.distance}};
}

json stage_value(const UtteranceState& s, Stage stage) {
  switch (stage) {
    case Stage::Validated:
      return s.validated ? json{{"graph", *s.validated}, {"report", s.report}} : json();
    case Stage::Localized:
      return s.localized ? json{{"graph", *s.localized}, {"choices", s.localization_choices}} : json();
    case Stage::Transferred:
      return s.transferred ? json{{"graph", *s.transferred}, {"choices", s.transfer_choices}} : json();
    case Stage::TransferTree:
      return s.transfer_tree ? json{{"gt", *s.gt}, {"tree", *s.transfer_tree}} : json();
    case Stage::Gma: return s.gma ? json(*s.gma) : json();
    case Stage::Uma: return s.uma ? json(*s.uma) : json();
    case Stage::Umc: return s.umc ? json(*s.umc) : json();
    case Stage::Surface: return s.surface ? json(*s.surface) : json();
  }
  return json();
}

std::string stage_json(const UtteranceState& state, Stage stage) {
  const json v = stage_value(state, stage);
  return v.is_null() ? std::string() : v.dump();
}

std::string state_to_json(const UtteranceState& s) {
  json stages = json::object();
  for (int k = 0; k < kStageCount; ++k) {
    const Stage st = static_cast<Stage>(k);
    json v = stage_value(s, st);
    if (!v.is_null()) stages[stage_name(st)] = std::move(v);
  }
  json j{{"id", s.id},
         {"source", s.source},
         {"seed", s.seed},
         {"report", s.report},
         {"validated_run", s.validated_run},
         {"stages", stages},
         {"edits", s.edits},
         {"dirty_from", s.dirty_from ? json(stage_name(*s.dirty_from)) : json(nullptr)},
         {"pending_edits", s.pending_edits},
         {"version", s.version}};
  return j.dump();
}

UtteranceState state_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    UtteranceState s;
    s.id = j.at("id");
    s.source = j.at("source");
    s.seed = j.at("seed");
    s.report = j.at("report");
    s.validated_run = j.at("validated_run");
    s.edits = j.at("edits");
    if (!j.at("dirty_from").is_null()) s.dirty_from = parse_stage(j.at("dirty_from").get<std::string>());
    s.pending_edits = j.at("pending_edits");
    s.version = j.at("version");
    const json& st = j.at("stages");
    auto get = [&](Stage k) -> const json* {
      auto it = st.find(stage_name(k));
      return it == st.end() ? nullptr : &*it;
    };
    if (const json* v = get(Stage::Validated)) s.validated = v->at("graph").get<UnlGraph>();
    if (const json* v = get(Stage::Localized)) {
      s.localized = v->at("graph").get<UnlGraph>();
      s.localization_choices = v->at("choices").get<std::vector<LocalizationChoice>>();
    }
    if (const json* v = get(Stage::Transferred)) {
      s.transferred = v->at("graph").get<TransferredGraph>();
      s.transfer_choices = v->at("choices").get<std::vector<TransferChoice>>();
    }
    if (const json* v = get(Stage::TransferTree)) {
      s.gt = v->at("gt").get<GTResult>();
      s.transfer_tree = v->at("tree").get<TreeNode>();
    }
    if (const json* v = get(Stage::Gma)) s.gma = v->get<TreeNode>();
    if (const json* v = get(Stage::Uma)) s.uma = v->get<TreeNode>();
    if (const json* v = get(Stage::Umc)) s.umc = v->get<TreeNode>();
    if (const json* v = get(Stage::Surface)) s.surface = v->get<SurfaceText>();
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::StorageError, std::string("corrupt utterance record: ") + e.what());
  }
}

}  // namespace deconv
