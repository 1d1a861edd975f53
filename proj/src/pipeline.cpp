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

#include "deconv/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "deconv/error.hpp"
#include "text_util.hpp"

namespace deconv {

namespace fs = std::filesystem;

namespace {

constexpr const char* kStageNames[kStageCount] = {
    "validated", "localized", "transferred", "transfer-tree", "gma", "uma", "umc", "surface"};

// Variables the tree builder and the expansion step write.
constexpr const char* kRequiredVars[] = {"REL", "INV", "K", "UL", "UATT", "LEMMA", "CAT", "PARADIGM", "DRV"};

template <typename F>
auto lingware_file(const fs::path& path, F&& load) -> decltype(load()) {
  try {
    return load();
  } catch (const Error& e) {
    const ErrorCode code = e.code() == ErrorCode::InvalidArgument ? ErrorCode::FormatError : e.code();
    throw Error(code, path.string() + ": " + e.detail(), e.line()).in_phase("lingware");
  }
}

template <typename F>
auto in_stage(Stage stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (!e.phase().empty()) throw;
    throw e.in_phase(stage_name(stage));
  }
}

bool parse_flag(const std::string& v) {
  const std::string s = text::lower(v);
  if (s.empty() || s == "on" || s == "true" || s == "yes" || s == "1") return true;
  if (s == "off" || s == "false" || s == "no" || s == "0") return false;
  throw Error(ErrorCode::InvalidArgument, "attribute value must be on or off, got '" + v + "'");
}

// Adds or removes `attr`; adding drops the other members of its class.
void set_attribute(UnlNode& n, const Inventory& inv, const std::string& attr, bool on) {
  if (on) {
    if (auto cls = inv.class_of(attr)) {
      for (const auto& other : inv.classes.at(*cls))
        if (other != attr) {
          n.attributes.erase(other);
          n.defaulted.erase(other);
        }
    }
    n.attributes.insert(attr);
    n.defaulted.erase(attr);
  } else {
    n.attributes.erase(attr);
    n.defaulted.erase(attr);
  }
}

void apply_attribute_edits(UnlGraph& g, const Edits& edits, const Inventory& inv) {
  for (const auto& [id, attrs] : edits.attributes) {
    if (!g.contains(id)) continue;
    for (const auto& [a, on] : attrs) set_attribute(g.node(id), inv, a, on);
  }
}

void set_var(const Schema& schema, Decoration& d, const std::string& var, const std::string& value) {
  const VarDecl& decl = schema.require(var);
  if (value.empty()) {
    d.unset(var);
  } else if (decl.kind == VarKind::NonExclusive) {
    schema.add(d, var, value);
  } else {
    schema.assign(d, var, value);
  }
}

void apply_style(TreeNode& t, const Schema& schema, const Edits& edits) {
  auto it = edits.style.find(t.unl);
  if (it != edits.style.end() && t.deco.assigned("UL"))
    for (const auto& [var, value] : it->second) set_var(schema, t.deco, var, value);
  for (auto& c : t.children) apply_style(c, schema, edits);
}

const TreeNode* find_umc(const TreeNode& root, int umc) {
  for (const TreeNode* n : preorder(root))
    if (n->umc == umc) return n;
  return nullptr;
}

int preorder_position_of_tid(const TreeNode& root, int tid) {
  int k = 0;
  for (const TreeNode* n : preorder(root)) {
    ++k;
    if (n->tid == tid) return k;
  }
  return 0;
}

void require_node(const UtteranceState& s, NodeId node) {
  if (!s.validated || !s.validated->contains(node))
    throw Error(ErrorCode::UnknownNode, "no node " + std::to_string(node) + " in " + s.id);
}

void require_lexical_node(const UtteranceState& s, NodeId node) {
  require_node(s, node);
  if (s.validated->node(node).is_hypernode())
    throw Error(ErrorCode::UnknownNode, "node " + std::to_string(node) + " is a scope node");
}

}  // namespace

// ---------------------------------------------------------------------------

LingwarePaths LingwarePaths::from_dir(const fs::path& dir) {
  LingwarePaths p;
  p.dict = dir / "dict.tsv";
  p.lus = dir / "lus.tsv";
  p.schema = dir / "schema.dv";
  p.ts = dir / "ts.rules";
  p.gs1 = dir / "gs1.rules";
  p.gs2 = dir / "gs2.rules";
  p.morph = dir / "morph";
  p.profile = dir / "profile.cfg";
  p.inventory = dir / "inventory.cfg";
  p.incompat = dir / "incompat.tsv";
  p.tvars = dir / "tvars.tsv";
  return p;
}

void LingwarePaths::fill_defaults() {
  const fs::path dir = dict.parent_path();
  if (inventory.empty()) inventory = dir / "inventory.cfg";
  if (incompat.empty() && fs::exists(dir / "incompat.tsv")) incompat = dir / "incompat.tsv";
  if (tvars.empty() && fs::exists(dir / "tvars.tsv")) tvars = dir / "tvars.tsv";
}

Lingware Lingware::load(const LingwarePaths& p) {
  Lingware lw;
  lw.inventory = lingware_file(p.inventory, [&] { return Inventory::load(p.inventory); });
  lw.lexicon.add_dictionary(lingware_file(p.dict, [&] { return Dictionary::load(p.dict); }));
  lw.lexicon.set_units(lingware_file(p.lus, [&] { return LuTable::load(p.lus); }));
  lw.schema = lingware_file(p.schema, [&] { return Schema::load(p.schema); });
  lw.ts = lingware_file(p.ts, [&] { return load_grammar(p.ts, lw.schema); });
  lw.gs1 = lingware_file(p.gs1, [&] { return load_grammar(p.gs1, lw.schema); });
  lw.gs2 = lingware_file(p.gs2, [&] { return load_grammar(p.gs2, lw.schema); });
  lw.morph = lingware_file(p.morph, [&] { return MorphPack::load(p.morph); });

  const auto profiles = lingware_file(p.profile, [&] { return load_profiles(p.profile); });
  auto it = std::find_if(profiles.begin(), profiles.end(), [&](const Profile& pr) {
    return p.profile_name.empty() || pr.name == p.profile_name;
  });
  if (it == profiles.end())
    throw Error(ErrorCode::FormatError,
                p.profile.string() + ": no profile '" + p.profile_name + "'")
        .in_phase("lingware");
  lw.profile = *it;
  lw.distance = lingware_file(p.profile, [&] { return PseudoDistance::from_profile(lw.profile); });
  if (!p.incompat.empty())
    lw.incompat = lingware_file(p.incompat, [&] { return IncompatibilityTable::load(p.incompat); });
  if (!p.tvars.empty()) lw.tvars = lingware_file(p.tvars, [&] { return TransferVarTable::load(p.tvars); });

  // Cross-file consistency: the tree builder must be able to decorate.
  for (const char* v : kRequiredVars)
    if (!lw.schema.find(v))
      throw Error(ErrorCode::SchemaError, p.schema.string() + ": missing variable " + v)
          .in_phase("lingware");
  const VarDecl& uatt = *lw.schema.find("UATT");
  for (const auto& a : lw.inventory.attributes) {
    if (a == "entry") continue;
    if (std::find(uatt.values.begin(), uatt.values.end(), a) == uatt.values.end())
      throw Error(ErrorCode::SchemaError,
                  p.schema.string() + ": inventory attribute '" + a + "' is not a UATT value")
          .in_phase("lingware");
  }
  return lw;
}

const char* stage_name(Stage stage) { return kStageNames[static_cast<int>(stage)]; }

std::optional<Stage> parse_stage(std::string_view name) {
  for (int k = 0; k < kStageCount; ++k)
    if (name == kStageNames[k]) return static_cast<Stage>(k);
  return std::nullopt;
}

const char* policy_name(Policy policy) {
  switch (policy) {
    case Policy::Always: return "always";
    case Policy::EveryK: return "every-k";
    case Policy::OnDemand: return "on-demand";
  }
  return "?";
}

std::optional<Policy> parse_policy(std::string_view name) {
  if (name == "always") return Policy::Always;
  if (name == "every-k") return Policy::EveryK;
  if (name == "on-demand") return Policy::OnDemand;
  return std::nullopt;
}

bool Edits::empty() const {
  return uw_overrides.empty() && lu_overrides.empty() && attributes.empty() && style.empty();
}

bool UtteranceState::has(Stage stage) const {
  switch (stage) {
    case Stage::Validated: return validated.has_value();
    case Stage::Localized: return localized.has_value();
    case Stage::Transferred: return transferred.has_value();
    case Stage::TransferTree: return transfer_tree.has_value();
    case Stage::Gma: return gma.has_value();
    case Stage::Uma: return uma.has_value();
    case Stage::Umc: return umc.has_value();
    case Stage::Surface: return surface.has_value();
  }
  return false;
}

void UtteranceState::invalidate(Stage stage) {
  const int from = static_cast<int>(stage);
  auto drop = [&](Stage s) { return static_cast<int>(s) >= from; };
  if (drop(Stage::Validated)) {
    validated.reset();
    validated_run = false;
    report = {};
  }
  if (drop(Stage::Localized)) {
    localized.reset();
    localization_choices.clear();
  }
  if (drop(Stage::Transferred)) {
    transferred.reset();
    transfer_choices.clear();
  }
  if (drop(Stage::TransferTree)) {
    gt.reset();
    transfer_tree.reset();
  }
  if (drop(Stage::Gma)) gma.reset();
  if (drop(Stage::Uma)) uma.reset();
  if (drop(Stage::Umc)) umc.reset();
  if (drop(Stage::Surface)) surface.reset();
  if (!dirty_from || static_cast<int>(*dirty_from) > from) dirty_from = stage;
}

std::string UtteranceState::rendering(bool marks) const {
  return surface ? surface->render(marks) : std::string();
}

// ---------------------------------------------------------------------------

UtteranceState Deconverter::start(const Utterance& utterance, std::string id, std::uint64_t seed) const {
  UtteranceState s;
  s.id = std::move(id);
  s.source = utterance;
  s.seed = seed;
  s.dirty_from = Stage::Validated;
  return s;
}

UtteranceState Deconverter::deconvert(const Utterance& utterance, std::uint64_t seed,
                                      const RunOptions& options) const {
  UtteranceState s = start(utterance, "u1", seed);
  run(s, options);
  return s;
}

void Deconverter::run(UtteranceState& s, const RunOptions& o) const {
  if (!s.validated_run) compute(s, Stage::Validated, o);
  if (!s.report.ok) return;
  for (int k = static_cast<int>(Stage::Localized); k < kStageCount; ++k) {
    const Stage st = static_cast<Stage>(k);
    if (!s.has(st)) compute(s, st, o);
    if (o.until && *o.until == st) return;
  }
  s.dirty_from.reset();
  s.pending_edits = 0;
}

void Deconverter::compute(UtteranceState& s, Stage stage, const RunOptions& o) const {
  in_stage(stage, [&] {
    switch (stage) {
      case Stage::Validated:
        s.report = validate(s.source.graph, lw_.inventory);
        s.validated_run = true;
        if (s.report.ok) s.validated = s.source.graph;
        else s.validated.reset();
        break;

      case Stage::Localized: {
        LocalizeOptions lo{s.seed, o.uw_chooser, &s.edits.uw_overrides};
        auto r = localize_lexically(*s.validated, lw_.lexicon.uw_set(), lw_.distance, lw_.incompat, lo);
        // Interactive answers become overrides so later reruns reproduce them.
        for (const auto& c : r.choices)
          if (c.mode == ChoiceMode::Interactive) s.edits.uw_overrides[c.node] = c.chosen.text();
        apply_attribute_edits(r.graph, s.edits, lw_.inventory);
        s.localized = localize_culturally(r.graph, lw_.profile, lw_.inventory, [&](const UnlNode& n) {
          return lw_.lexicon.category_of(n.uw.text(), lw_.profile);
        });
        s.localization_choices = std::move(r.choices);
        break;
      }

      case Stage::Transferred: {
        TransferOptions to{s.seed, o.lu_chooser, &s.edits.lu_overrides};
        auto r = transfer_lexically(*s.localized, lw_.lexicon, lw_.profile, counts_, lw_.tvars, to);
        for (const auto& c : r.choices)
          if (c.mode == ChoiceMode::Interactive) s.edits.lu_overrides[c.node] = c.chosen;
        s.transferred = std::move(r.graph);
        s.transfer_choices = std::move(r.choices);
        break;
      }

      case Stage::TransferTree:
        s.gt = graph_to_tree(s.transferred->graph);
        s.transfer_tree = build_tree(*s.gt, *s.transferred);
        break;

      case Stage::Gma: {
        TreeNode t = apply(lw_.ts, lw_.schema, *s.transfer_tree);
        apply_style(t, lw_.schema, s.edits);
        lw_.schema.check(t.deco);
        s.gma = std::move(t);
        break;
      }

      case Stage::Uma:
        s.uma = apply(lw_.gs1, lw_.schema, *s.gma);
        break;

      case Stage::Umc: {
        TreeNode t = *s.uma;
        expand(t);
        t = apply(lw_.gs2, lw_.schema, std::move(t));
        number_preorder(t);
        const auto violations = check_projectivity(t);
        if (!violations.empty())
          throw Error(ErrorCode::PostconditionFailed,
                      "UMC tree not projective at node " + std::to_string(violations.front().node) +
                          ": " + violations.front().message);
        s.umc = std::move(t);
        break;
      }

      case Stage::Surface:
        s.surface = generate(*s.umc, lw_.morph);
        break;
    }
  });
}

TreeNode Deconverter::build_tree(const GTResult& gt, const TransferredGraph& g) const {
  const Schema& schema = lw_.schema;
  std::function<TreeNode(int)> make = [&](int id) {
    const GTNode& gn = gt.nodes.at(static_cast<std::size_t>(id));
    TreeNode t;
    t.tid = gn.id;
    t.unl = gn.source;
    schema.assign(t.deco, "REL", gn.label);
    if (gn.inverse) schema.assign(t.deco, "INV", "YES");
    const UnlNode& un = g.graph.node(gn.source);
    if (un.is_hypernode()) {
      schema.assign(t.deco, "K", "SCOPE");
    } else {
      const TransferredNode& tn = g.nodes.at(gn.source);
      schema.assign(t.deco, "UL", tn.lu);
      for (const auto& [var, value] : tn.vars) set_var(schema, t.deco, var, value);
      for (const auto& a : tn.attributes)
        if (a != "entry") schema.add(t.deco, "UATT", a);
    }
    for (int c : gn.children) t.children.push_back(make(c));
    return t;
  };
  return make(0);
}

void Deconverter::expand(TreeNode& t) const {
  const Schema& schema = lw_.schema;
  const auto ul = t.deco.get("UL");
  const auto drv = t.deco.get("DRV");
  // Phrase nodes keep UL; only leaves are lexical.
  if (ul && drv && t.children.empty()) {
    const LexicalUnit* unit = lw_.lexicon.units().find(*ul);
    if (unit && !unit->derivations.empty()) {
      const Derivation* d = unit->find(*drv);
      if (!d) d = &unit->derivations.front();
      schema.assign(t.deco, "LEMMA", d->lemma);
      schema.assign(t.deco, "CAT", d->category);
      schema.assign(t.deco, "PARADIGM", d->paradigm);
      for (const auto& [var, value] : d->vars) set_var(schema, t.deco, var, value);
    } else {
      schema.assign(t.deco, "LEMMA", *ul);
      schema.assign(t.deco, "PARADIGM", "inv");
    }
  }
  for (auto& c : t.children) expand(c);
}

std::vector<TraceLink> Deconverter::resolve_trace(const UtteranceState& s, std::size_t token) const {
  if (!s.complete()) throw Error(ErrorCode::InvalidArgument, s.id + " is not deconverted");
  const auto& tokens = s.surface->tokens;
  if (token >= tokens.size())
    throw Error(ErrorCode::UnknownNode, "no token " + std::to_string(token) + " in " + s.id);
  const int mark = tokens[token].mark;
  if (mark == 0) return {};
  const TreeNode* n = find_umc(*s.umc, mark);
  if (!n) throw Error(ErrorCode::UnknownNode, "no UMC node " + std::to_string(mark));
  std::vector<TraceLink> chain{{"umc", mark}};
  chain.push_back({"uma", preorder_position_of_tid(*s.uma, n->tid)});
  chain.push_back({"gma", preorder_position_of_tid(*s.gma, n->tid)});
  chain.push_back({"transfer", n->tid});
  chain.push_back({"unl", n->unl});
  return chain;
}

// Edits queue up under lazy policies, so the localized graph they resolve
// nodes against may have been dropped by an earlier edit. It is deterministic
// and cheap to recompute.
void Deconverter::ensure_localized(UtteranceState& s) const {
  if (!s.validated_run) compute(s, Stage::Validated, {});
  if (!s.report.ok) throw Error(ErrorCode::ValidationFailed, s.id + " was rejected by the validator");
  if (!s.localized) compute(s, Stage::Localized, {});
}

void Deconverter::apply_edit(UtteranceState& s, const Edit& e) const {
  ensure_localized(s);
  if (e.kind == Edit::ChooseLu) {
    require_lexical_node(s, e.node);
    if (e.lu.empty()) throw Error(ErrorCode::InvalidArgument, "choose-lu needs an LU");
    const std::string original = s.validated->node(e.node).uw.text();
    const std::string current = s.localized->node(e.node).uw.text();
    auto offers = [&](const std::string& uw, const std::string& lu) {
      if (!lw_.lexicon.contains(uw)) return false;
      const auto lus = lw_.lexicon.lookup_lus(uw, lw_.profile, counts_);
      return std::any_of(lus.begin(), lus.end(), [&](const ScoredEntry& x) { return x.entry->lu == lu; });
    };
    std::string uw;
    if (!e.uw.empty()) {
      uw = parse_uw(e.uw).text();
      if (!lw_.lexicon.contains(uw)) throw Error(ErrorCode::NotInDictionary, "'" + uw + "' is not in D");
      if (!offers(uw, e.lu))
        throw Error(ErrorCode::LuNotCandidate, "'" + e.lu + "' is not an LU of " + uw);
    } else if (offers(current, e.lu)) {
      uw = current;
    } else {
      for (const auto& c : candidates(s, e.node, true))
        if (c.lu == e.lu) {
          uw = c.uw;
          break;
        }
      if (uw.empty())
        throw Error(ErrorCode::LuNotCandidate,
                    "'" + e.lu + "' is not a candidate for node " + std::to_string(e.node));
    }
    s.edits.lu_overrides[e.node] = e.lu;
    if (uw != current) {
      s.edits.uw_overrides[e.node] = uw;
      counts_.increment(PairKind::UwToUw, original, uw);
      s.invalidate(Stage::Localized);
    } else {
      s.invalidate(Stage::Transferred);
    }
    counts_.increment(PairKind::UwToLu, uw, e.lu);
  } else if (e.level == AttributeLevel::Interlingual) {
    require_lexical_node(s, e.node);
    if (!lw_.inventory.attributes.count(e.name) || e.name == "entry")
      throw Error(ErrorCode::UnknownAttribute, "unknown attribute '" + e.name + "'");
    s.edits.attributes[e.node][e.name] = parse_flag(e.value);
    s.invalidate(Stage::Localized);
  } else {
    require_lexical_node(s, e.node);
    const VarDecl* v = lw_.schema.find(e.name);
    if (!v) throw Error(ErrorCode::UnknownAttribute, "unknown style variable '" + e.name + "'");
    if (!e.value.empty()) {
      try {
        lw_.schema.check_value(*v, e.value);
      } catch (const Error& err) {
        throw Error(ErrorCode::InvalidArgument, err.detail());
      }
    }
    s.edits.style[e.node][e.name] = e.value;
    s.invalidate(Stage::Gma);
  }
  ++s.pending_edits;
  ++s.version;
}

void Deconverter::edit_and_redeconvert(UtteranceState& s, const Edit& e, Policy policy,
                                       std::size_t every_k) const {
  apply_edit(s, e);
  switch (policy) {
    case Policy::Always: run(s); break;
    case Policy::EveryK:
      if (s.pending_edits >= std::max<std::size_t>(every_k, 1)) run(s);
      break;
    case Policy::OnDemand: break;
  }
}

std::vector<CandidateLu> Deconverter::candidates(const UtteranceState& s, NodeId node, bool widen) const {
  if (!s.localized) {
    UtteranceState copy = s;
    ensure_localized(copy);
    return candidates(copy, node, widen);
  }
  require_lexical_node(s, node);
  const UnlGraph& original = *s.validated;
  const UW& w = original.node(node).uw;

  std::vector<CandidateLu> out;
  auto add_uw = [&](const UW& x) {
    const std::string uw = x.text();
    if (!lw_.lexicon.contains(uw)) return;
    const double d = distance(w, x, &original, node, lw_.distance, &lw_.incompat);
    for (const auto& se : lw_.lexicon.lookup_lus(uw, lw_.profile, counts_)) {
      const bool seen = std::any_of(out.begin(), out.end(), [&](const CandidateLu& c) {
        return c.uw == uw && c.lu == se.entry->lu;
      });
      if (!seen) out.push_back({uw, se.entry->lu, se.score, d});
    }
  };
  add_uw(s.localized->node(node).uw);
  if (widen) {
    const auto ranked = rank_candidates(original, node, lw_.lexicon.uw_set(), lw_.distance, lw_.incompat);
    if (!ranked.empty()) {
      const double limit = ranked.front().distance + lw_.distance.widen_radius + 1e-9;
      for (const auto& c : ranked)
        if (c.distance <= limit) add_uw(c.uw);
    }
  }
  return out;
}

Utterance Deconverter::enriched(const UtteranceState& s) const {
  Utterance u = s.source;
  std::vector<std::string> changes;
  for (const auto& [id, attrs] : s.edits.attributes) {
    if (!u.graph.contains(id)) continue;
    for (const auto& [a, on] : attrs) {
      set_attribute(u.graph.node(id), lw_.inventory, a, on);
      changes.push_back(std::string(on ? "+@" : "-@") + a + " on node " + std::to_string(id));
    }
  }
  if (!changes.empty()) {
    std::string line = "proposed revision:";
    for (std::size_t k = 0; k < changes.size(); ++k) line += (k ? ", " : " ") + changes[k];
    if (!u.comments.empty()) u.comments += '\n';
    u.comments += line;
  }
  return u;
}

ReplaceResult global_replace(const Deconverter& dc, std::vector<UtteranceState>& states,
                             const std::string& from, const std::string& to) {
  ReplaceResult result;
  const Lingware& lw = dc.lingware();
  for (std::size_t u = 0; u < states.size(); ++u) {
    UtteranceState& s = states[u];
    if (!s.transferred) continue;
    std::vector<std::pair<NodeId, std::string>> hits;
    for (const auto& [id, tn] : s.transferred->nodes)
      if (tn.lu == from) hits.emplace_back(id, tn.uw_text);
    bool changed = false;
    for (const auto& [id, uw] : hits) {
      bool offered = false;
      if (lw.lexicon.contains(uw))
        for (const auto& se : lw.lexicon.lookup_lus(uw, lw.profile, dc.counts()))
          offered = offered || se.entry->lu == to;
      if (!offered) {
        result.skipped.emplace_back(u, id);
        continue;
      }
      Edit e;
      e.kind = Edit::ChooseLu;
      e.node = id;
      e.lu = to;
      e.uw = uw;
      dc.apply_edit(s, e);
      changed = true;
    }
    if (changed) {
      dc.run(s);
      result.changed.push_back(u);
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

void write_records(const fs::path& path, const std::vector<std::string>& records) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::StorageError, "cannot write " + tmp.string());
    for (const auto& r : records) out << r.size() << '\n' << r << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::StorageError, "short write on " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::StorageError, "cannot replace " + path.string() + ": " + ec.message());
}

std::vector<std::string> read_records(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::StorageError, "cannot read " + path.string());
  std::vector<std::string> out;
  std::string header;
  while (std::getline(in, header)) {
    if (header.empty()) continue;
    std::size_t n = 0;
    try {
      std::size_t used = 0;
      n = std::stoul(header, &used);
      if (used != header.size()) throw std::invalid_argument(header);
    } catch (const std::exception&) {
      throw Error(ErrorCode::StorageError, path.string() + ": bad record header '" + header + "'");
    }
    std::string payload(n, '\0');
    in.read(payload.data(), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n || in.get() != '\n')
      throw Error(ErrorCode::StorageError, path.string() + ": truncated record");
    out.push_back(std::move(payload));
  }
  return out;
}

}  // namespace deconv
