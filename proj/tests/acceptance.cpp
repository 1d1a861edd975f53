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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 when
// any primary criterion fails.

#include <httplib.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <queue>
#include <regex>
#include <thread>

#include "deconv/error.hpp"
#include "deconv/graph2tree.hpp"
#include "deconv/morph.hpp"
#include "deconv/service.hpp"
#include "deconv/tree.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace deconv;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failure, keeps counting.
struct Check {
  Outcome out;
  int failures = 0;
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) out.detail = what;
    out.pass = false;
  }
  Outcome done(const std::string& summary) {
    if (out.pass) out.detail = summary;
    else if (failures > 1) out.detail += " (+" + std::to_string(failures - 1) + " more)";
    return out;
  }
};

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

UnlDocument golden() { return parse_document(testing::slurp(testing::corpus_dir() / "golden.unl")); }

std::set<int> reach(const UnlGraph& g, bool undirected) {
  std::map<int, std::vector<int>> adj;
  for (const auto& a : g.arcs) {
    adj[a.source].push_back(a.target);
    if (undirected) adj[a.target].push_back(a.source);
  }
  std::set<int> seen{g.entry};
  std::queue<int> q;
  q.push(g.entry);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (seen.insert(w).second) q.push(w);
  }
  return seen;
}

std::optional<Error> g2t_error(const UnlGraph& g) {
  try {
    graph_to_tree(g);
  } catch (const Error& e) {
    return e;
  }
  return std::nullopt;
}

Outcome g2t_conservation() {
  Check c;
  std::mt19937_64 rng(1001);
  std::vector<UnlGraph> graphs;
  for (int k = 0; k < 1000; ++k)
    graphs.push_back(testing::random_connected(rng, 1 + static_cast<int>(rng() % 50), rng() % 2 == 0));
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& g : graphs) {
    const GTResult t = graph_to_tree(g);
    c.expect(t.nodes.size() == g.arcs.size() + 1, "size " + std::to_string(t.nodes.size()) + " for " +
                                                       std::to_string(g.arcs.size()) + " arcs");
    std::multiset<std::string> in, out;
    for (const auto& a : g.arcs) in.insert(a.label);
    for (const auto& n : t.nodes)
      if (n.id != 0) out.insert(n.label);
    c.expect(in == out, "label multiset differs");
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  c.expect(ms < 5000, "took " + std::to_string(ms) + " ms");
  return c.done("1000 graphs, 1-50 arcs, " + std::to_string(static_cast<int>(ms)) + " ms");
}

Outcome g2t_totality() {
  Check c;
  std::mt19937_64 rng(1002);
  for (int k = 0; k < 1000; ++k) {
    const UnlGraph g = testing::random_disconnected(rng, 2 + static_cast<int>(rng() % 48));
    c.expect(reach(g, true).size() < g.nodes.size(), "generator produced a connected graph");
    const auto e = g2t_error(g);
    c.expect(e && e->code() == ErrorCode::NonConnectedGraph && e->detail() == "non connected graph",
             "disconnected graph: " + (e ? std::string(e->what()) : "no error"));
  }
  for (int k = 0; k < 1000; ++k) {
    const UnlGraph g = testing::random_connected(rng, 1 + static_cast<int>(rng() % 50), false);
    const auto e = g2t_error(g);
    c.expect(!e, "connected graph raised " + (e ? std::string(e->what()) : ""));
  }
  return c.done("1000 disconnected raise 'non connected graph', 1000 connected do not");
}

Outcome zero_reversal() {
  Check c;
  std::mt19937_64 rng(1003);
  for (int k = 0; k < 500; ++k) {
    const UnlGraph g = testing::random_connected(rng, 1 + static_cast<int>(rng() % 50), true);
    c.expect(reach(g, false).size() == g.nodes.size(), "generator produced an unreachable node");
    const int r = graph_to_tree(g).reversed_count;
    c.expect(r == 0, "reversed_count " + std::to_string(r));
  }
  return c.done("500 forward-reachable graphs, reversed_count = 0");
}

Outcome split_fixture() {
  Check c;
  UnlGraph g;
  for (const char* h : {"e", "a", "x"}) {
    UnlNode n;
    n.id = static_cast<int>(g.nodes.size()) + 1;
    n.uw.headword = h;
    g.nodes.push_back(n);
  }
  g.entry = 1;
  g.arcs = {{1, 2, "agt", ""}, {1, 3, "obj", ""}, {2, 3, "obj", ""}};
  const GTResult t = graph_to_tree(g);
  const std::string b = to_bracketed(t, g);
  c.expect(t.nodes.size() == 4, "tree has " + std::to_string(t.nodes.size()) + " nodes");
  c.expect(t.association.count(3) && t.association.at(3).size() == 2, "x is not duplicated");
  c.expect(b == R"([entry 1 "e" [agt 2 "a" [obj 3 "x"]] [obj 3 "x"]])", "tree " + b);
  return c.done(b);
}

Outcome localization_minimizer() {
  Check c;
  std::mt19937_64 rng(1005);
  const auto table = IncompatibilityTable::parse("agt\tthing\tplace\nagt\tperson\tbuilding\n");
  int ties = 0;
  for (int k = 0; k < 200; ++k) {
    std::vector<UW> dict;
    std::set<std::string> seen;
    const std::size_t n = 1 + rng() % 98;  // plus the two context nodes: at most 100
    for (int attempt = 0; dict.size() < n && attempt < 2000; ++attempt) {
      UW w = testing::random_uw(rng);
      if (seen.insert(w.text()).second) dict.push_back(w);
    }
    UnlGraph g = parse_graph("agt(x.@entry, garden(icl>place))\nobj(x, tree(icl>thing))\n");
    g.node(1).uw = testing::random_uw(rng);
    dict.push_back(g.node(2).uw);
    dict.push_back(g.node(3).uw);
    LocalizeOptions o;
    o.seed = rng();
    const auto r = localize_lexically(g, dict, PseudoDistance{}, table, o);
    double best = 1e18;
    for (const auto& x : dict) best = std::min(best, testing::oracle_distance(g.node(1).uw, x, g, 1, table));
    std::set<std::string> tie_set;
    for (const auto& x : dict)
      if (testing::oracle_distance(g.node(1).uw, x, g, 1, table) == best) tie_set.insert(x.text());
    if (tie_set.size() > 1) ++ties;
    const std::string chosen = r.graph.node(1).uw.text();
    c.expect(tie_set.count(chosen) == 1, "instance " + std::to_string(k) + ": chose " + chosen +
                                             " outside the oracle tie set");
    c.expect(dict.size() <= 100, "dictionary too large");
  }
  return c.done("200 instances agree with the exhaustive scan, " + std::to_string(ties) + " with ties");
}

std::string corpus_output(const UnlDocument& doc) {
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  std::string out;
  for (const auto& u : doc.utterances) {
    const UtteranceState s = dc.deconvert(u, 0);
    out += s.rendering(true) + "\n" + s.rendering(false) + "\n" + state_to_json(s) + "\n";
  }
  return out;
}

Outcome determinism() {
  Check c;
  const UnlDocument doc = golden();
  const std::string first = corpus_output(doc);
  for (int k = 1; k < 20; ++k) c.expect(corpus_output(doc) == first, "repeat " + std::to_string(k) + " differs");
  return c.done("20 runs, seed 0, byte-identical renderings, marks and stage caches");
}

Outcome golden_corpus() {
  Check c;
  const UnlDocument doc = golden();
  const auto plain = lines_of(testing::slurp(testing::corpus_dir() / "golden.txt"));
  const auto marked = lines_of(testing::slurp(testing::corpus_dir() / "golden.marked.txt"));
  c.expect(plain.size() == doc.utterances.size() && marked.size() == doc.utterances.size(),
           "frozen files do not match the corpus size");
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  for (std::size_t i = 0; i < doc.utterances.size() && i < plain.size() && i < marked.size(); ++i) {
    const UtteranceState s = dc.deconvert(doc.utterances[i], 0);
    c.expect(s.rendering(false) == plain[i], "utterance " + std::to_string(i + 1) + ": " + s.rendering(false));
    c.expect(s.rendering(true) == marked[i], "utterance " + std::to_string(i + 1) + " marks differ");
  }
  const std::regex elision(R"((^|\s)[LlDdNnQq]u?'[a-zA-Z])");
  const std::regex negation(R"(\b(ne|n')\s*\S+.*\bpas\b)", std::regex::icase);
  // Plural determiner, plural noun, plural verb.
  const std::regex plural(R"(\b[Ll]es \w+s( \w+s)? \w+ent\b)");
  bool e = false, n = false, p = false;
  for (const auto& l : plain) {
    e = e || std::regex_search(l, elision);
    n = n || std::regex_search(l, negation);
    p = p || std::regex_search(l, plural);
  }
  c.expect(e, "no elision in the corpus");
  c.expect(n, "no ne...pas in the corpus");
  c.expect(p, "no plural agreement in the corpus");
  return c.done(std::to_string(plain.size()) + " frozen renderings, elision, ne...pas and plural agreement present");
}

Outcome trace_totality() {
  Check c;
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  std::size_t content = 0;
  for (const auto& u : golden().utterances) {
    const UtteranceState s = dc.deconvert(u, 0);
    c.expect(strip_marks(s.rendering(true)) == s.rendering(false), "stripped marks differ for " + s.rendering(false));
    const auto& tokens = s.surface->tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const bool word = std::any_of(tokens[i].text.begin(), tokens[i].text.end(),
                                    [](char ch) { return std::isalpha(static_cast<unsigned char>(ch)) || ch < 0; });
      if (!word) continue;
      ++content;
      c.expect(tokens[i].mark != 0, "unmarked token '" + tokens[i].text + "'");
      const auto chain = dc.resolve_trace(s, i);
      std::size_t unl = 0;
      for (const auto& l : chain)
        if (l.stage == "unl") ++unl;
      c.expect(unl == 1 && chain.back().stage == "unl" && s.source.graph.contains(chain.back().node),
               "token '" + tokens[i].text + "' does not resolve to one UNL node");
    }
  }
  return c.done(std::to_string(content) + " content tokens resolve to one UNL node each");
}

const char* kChairs = "[unl]\n"
                      "obj(look(icl>do,agt>thing,obj>thing).@entry.@present, chair(icl>furniture).@def)\n"
                      "agt(look(icl>do,agt>thing,obj>thing), child(icl>person).@def)\n"
                      "[/unl]\n";

Edit choose(NodeId n, const std::string& lu) {
  Edit e;
  e.kind = Edit::ChooseLu;
  e.node = n;
  e.lu = lu;
  return e;
}

Edit attribute(NodeId n, const std::string& name, const std::string& value, AttributeLevel level) {
  Edit e;
  e.kind = Edit::SetAttribute;
  e.node = n;
  e.name = name;
  e.value = value;
  e.level = level;
  return e;
}

Outcome learning() {
  Check c;
  testing::TempDir dir;
  const auto path = dir / "counts.tsv";
  const Utterance u = parse_document(kChairs).utterances.at(0);
  std::string other;
  {
    CountStore counts(path);
    Deconverter dc(testing::french(), counts);
    UtteranceState s = dc.deconvert(u, 0);
    const auto cands = dc.candidates(s, 2, false);
    c.expect(cands.size() == 2 && cands[0].score == cands[1].score, "chair does not have two equal candidates");
    const std::string before = s.transferred->nodes.at(2).lu;
    other = before == "chaise" ? "fauteuil" : "chaise";
    dc.apply_edit(s, choose(2, other));
    dc.run(s);
    const UtteranceState fresh = dc.deconvert(u, 0);
    c.expect(fresh.transferred->nodes.at(2).lu == other, "argmax did not flip after one choice");
    counts.save();
  }
  CountStore reloaded(path);
  c.expect(reloaded.count(PairKind::UwToLu, "chair(icl>furniture)", other) == 1, "count lost on reload");
  Deconverter dc(testing::french(), reloaded);
  c.expect(dc.deconvert(u, 0).transferred->nodes.at(2).lu == other, "argmax not kept after reload");
  return c.done("one choose-lu flips chair to " + other + ", kept after save/load");
}

Outcome edit_locality() {
  Check c;
  CountStore counts;
  Deconverter dc(testing::french(), counts);
  auto snapshot = [](const UtteranceState& s) {
    std::vector<std::string> v;
    for (int k = 0; k < kStageCount; ++k) v.push_back(stage_json(s, static_cast<Stage>(k)));
    return v;
  };
  // choose-lu: stages before transfer untouched.
  {
    UtteranceState s = dc.deconvert(parse_document(kChairs).utterances.at(0), 0);
    const auto before = snapshot(s);
    const std::string other = s.transferred->nodes.at(2).lu == "chaise" ? "fauteuil" : "chaise";
    dc.apply_edit(s, choose(2, other));
    c.expect(s.dirty_from == Stage::Transferred, "choose-lu invalidated the wrong stage");
    dc.run(s);
    const auto after = snapshot(s);
    for (int k = 0; k < static_cast<int>(Stage::Transferred); ++k)
      c.expect(after[k] == before[k], std::string("choose-lu changed ") + stage_name(static_cast<Stage>(k)));
    c.expect(after[static_cast<int>(Stage::Transferred)] != before[static_cast<int>(Stage::Transferred)],
             "choose-lu did not change the transfer");
  }
  // Attribute edits: the edit's stage and everything after it is recomputed,
  // nothing before it changes.
  auto attr = [&](const Utterance& u, const Edit& e, Stage from) {
    UtteranceState s = dc.deconvert(u, 0);
    const auto before = snapshot(s);
    dc.apply_edit(s, e);
    for (int k = 0; k < kStageCount; ++k) {
      const bool later = k >= static_cast<int>(from);
      c.expect(s.has(static_cast<Stage>(k)) != later,
               std::string(stage_name(static_cast<Stage>(k))) + (later ? " not invalidated" : " dropped"));
    }
    dc.run(s);
    const auto after = snapshot(s);
    for (int k = 0; k < static_cast<int>(from); ++k)
      c.expect(after[k] == before[k], std::string("attribute edit changed ") + stage_name(static_cast<Stage>(k)));
    c.expect(after.back() != before.back(), "attribute edit did not change the surface");
  };
  const UnlDocument doc = golden();
  attr(doc.utterances[0], attribute(2, "pl", "on", AttributeLevel::Interlingual), Stage::Localized);
  attr(doc.utterances[5], attribute(1, "STYLE", "NOMINAL", AttributeLevel::Style), Stage::Gma);
  return c.done("choose-lu keeps validated/localized; @pl regenerates from localized, STYLE from gma");
}

Outcome rewrite_safety() {
  Check c;
  const Lingware& lw = testing::french();
  const Grammar loop = compile_grammar("MAXITER 25\nRULE a PRIORITY 1 : ?x{CAT=N} ==> ?x{CAT=V}\n"
                                       "RULE b PRIORITY 1 : ?x{CAT=V} ==> ?x{CAT=N}\n",
                                       lw.schema, "loop");
  TreeNode leaf;
  lw.schema.assign(leaf.deco, "CAT", "N");
  ApplyStats stats;
  bool limited = false;
  try {
    apply(loop, lw.schema, leaf, &stats);
  } catch (const Error& e) {
    limited = e.code() == ErrorCode::IterationLimit;
  }
  c.expect(limited, "looping pack did not raise IterationLimit");
  c.expect(stats.applications == 25, "stopped after " + std::to_string(stats.applications) + " applications");

  CountStore counts;
  Deconverter dc(lw, counts);
  std::size_t n = 0;
  for (const auto& u : golden().utterances) {
    const UtteranceState s = dc.deconvert(u, 0);
    const auto v = check_projectivity(*s.umc);
    c.expect(v.empty(), "utterance " + s.id + " is not projective");
    ++n;
  }
  return c.done("IterationLimit after 25 applications; " + std::to_string(n) + " GS2 outputs projective");
}

// The postedition loop over HTTP.
Outcome ui_loop() {
  Check c;
  testing::TempDir dir;
  ServiceOptions o;
  o.session_dir = dir.path;
  Service service(testing::french(), o);
  const int port = service.bind_any_port("127.0.0.1");
  std::thread t([&] { service.listen_after_bind(); });
  service.wait_until_ready();
  httplib::Client cl("127.0.0.1", port);
  auto call = [&](const std::string& method, const std::string& path, const json& body = json::object()) {
    httplib::Result r = method == "GET" ? cl.Get(path) : cl.Post(path, body.dump(), "application/json");
    if (!r) return std::pair<int, std::string>{0, ""};
    return std::pair<int, std::string>{r->status, r->body};
  };
  try {
    const std::string doc = std::string(kChairs) + kChairs;
    auto [st, created] = call("POST", "/sessions", {{"document", doc}, {"seed", 0}});
    c.expect(st == 201, "create returned " + std::to_string(st));
    const std::string id = json::parse(created)["session"];
    const std::string base = "/sessions/" + id;
    call("POST", base + "/deconvert");
    const UnlDocument input = parse_document(doc);

    // Select the token "chaise"/"fauteuil": trace it down to its UNL node.
    const auto view = json::parse(call("GET", base + "/utterances/1").second);
    const std::string text = view["text"];
    const bool had_chaise = text.find("chaise") != std::string::npos;
    const std::string current = had_chaise ? "chaise" : "fauteuil";
    const std::string other = had_chaise ? "fauteuil" : "chaise";
    std::size_t token = 0;
    for (std::size_t i = 0; i < view["tokens"].size(); ++i)
      if (view["tokens"][i]["text"] == current) token = i;
    const auto chain = json::parse(call("GET", base + "/utterances/1/tokens/" + std::to_string(token) + "/trace").second)["chain"];
    c.expect(!chain.empty() && chain.back()["stage"] == "unl", "token does not trace to a UNL node");
    const std::string node = std::to_string(chain.back()["node"].get<int>());

    const auto narrow = json::parse(call("GET", base + "/utterances/1/nodes/" + node + "/candidates").second)["candidates"];
    const auto wide =
        json::parse(call("GET", base + "/utterances/1/nodes/" + node + "/candidates?widen=true").second)["candidates"];
    bool offered = false;
    for (const auto& x : narrow) {
      offered = offered || x["lu"] == other;
      bool in = false;
      for (const auto& w : wide) in = in || (w["lu"] == x["lu"] && w["uw"] == x["uw"]);
      c.expect(in, "widened candidates miss " + x["lu"].get<std::string>());
    }
    c.expect(offered, "candidates do not offer " + other);
    const auto chosen = json::parse(call("POST", base + "/utterances/1/nodes/" + node + "/choose", {{"lu", other}}).second);
    c.expect(chosen["text"].get<std::string>().find(other) != std::string::npos, "choose did not re-render");
    c.expect(chosen["marked"].get<std::string>().find(other + "&") != std::string::npos, "new word carries no mark");

    // Utterance 2 still has the old word; the global replace must regenerate it.
    const auto replaced = json::parse(call("POST", base + "/replace", {{"from_lu", current}, {"to_lu", other}}).second);
    c.expect(replaced["changed"] == json::array({2}), "global replace changed " + replaced["changed"].dump());
    for (const auto& u : replaced["utterances"])
      c.expect(u["text"].get<std::string>().find(other) != std::string::npos, "global replace missed an utterance");

    call("POST", base + "/utterances/2/nodes/" + node + "/attributes", {{"name", "pl"}, {"level", "interlingual"}});
    auto exported = cl.Get(base + "/export");
    c.expect(exported && exported->has_header("Content-Disposition"), "export is not a download");
    const UnlDocument out = parse_document(exported ? exported->body : "");
    // Diff against the input: exactly +@pl on utterance 2, LU choices are not interlingual.
    UnlDocument expected = input;
    expected.utterances[1].graph.node(std::stoi(node)).attributes.insert("pl");
    bool same = out.utterances.size() == expected.utterances.size();
    for (std::size_t i = 0; same && i < out.utterances.size(); ++i)
      same = out.utterances[i].graph == expected.utterances[i].graph;
    c.expect(same, "export diff is not exactly +@pl on utterance 2");
  } catch (const std::exception& e) {
    c.expect(false, e.what());
  }
  service.stop();
  t.join();
  return c.done("token trace, candidates, choose, widen superset, global replace, export diff vs input");
}

}  // namespace

int main() {
  struct Criterion {
    const char* tag;
    const char* name;
    std::function<Outcome()> run;
    bool primary;
  };
  const std::vector<Criterion> criteria{
      {"A1", "g2t conservation", g2t_conservation, true},
      {"A2", "g2t totality", g2t_totality, true},
      {"A3", "zero reversal", zero_reversal, true},
      {"A4", "split fixture", split_fixture, true},
      {"A5", "localization minimizer", localization_minimizer, true},
      {"A6", "determinism", determinism, true},
      {"A7", "golden corpus", golden_corpus, true},
      {"A8", "trace totality", trace_totality, true},
      {"A9", "learning", learning, true},
      {"A10", "edit locality", edit_locality, true},
      {"A11", "rewrite safety", rewrite_safety, true},
      {"S1", "postedition loop (secondary)", ui_loop, false},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Outcome o;
    try {
      o = cr.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << cr.tag << " " << cr.name << ": " << o.detail << std::endl;
    if (!o.pass && cr.primary) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
