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

#include "deconv/unl.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "deconv/error.hpp"
#include "text_util.hpp"

namespace deconv {

namespace text {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace text

namespace {

bool is_relation_name(std::string_view s) {
  if (s.size() < 2 || s.size() > 4) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

bool balanced(std::string_view s) {
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) return false;
  }
  return depth == 0;
}

}  // namespace

std::string Restriction::text() const {
  return relation + direction + target;
}

std::string UW::text() const {
  if (restrictions.empty()) return headword;
  std::string out = headword + "(";
  for (std::size_t i = 0; i < restrictions.size(); ++i) {
    if (i) out += ", ";
    out += restrictions[i].text();
  }
  return out + ")";
}

bool UW::has_restriction(const Restriction& r) const {
  return std::find(restrictions.begin(), restrictions.end(), r) != restrictions.end();
}

std::string UW::semantic_class() const {
  for (const auto& r : restrictions) {
    if (r.relation == "icl" && r.direction == '>') return r.target;
  }
  return headword;
}

UW parse_uw(std::string_view raw) {
  const std::string_view t = text::trim(raw);
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::MalformedUW, why + " in '" + std::string(t) + "'");
  };
  if (t.empty()) throw fail("empty UW");

  UW uw;
  const std::size_t open = t.find('(');
  if (open == std::string_view::npos) {
    if (t.find(')') != std::string_view::npos) throw fail("unbalanced parentheses");
    if (t.find(',') != std::string_view::npos) throw fail("comma in headword");
    uw.headword = text::squeeze(t);
    return uw;
  }
  uw.headword = text::squeeze(t.substr(0, open));
  if (uw.headword.empty()) throw fail("empty headword");
  if (uw.headword.find(',') != std::string::npos || uw.headword.find(')') != std::string::npos)
    throw fail("bad headword");

  int depth = 0;
  std::size_t close = std::string_view::npos;
  for (std::size_t i = open; i < t.size(); ++i) {
    if (t[i] == '(') ++depth;
    if (t[i] == ')' && --depth == 0) {
      close = i;
      break;
    }
  }
  if (close == std::string_view::npos) throw fail("unbalanced parentheses");
  if (close + 1 != t.size()) throw fail("text after restriction list");

  const std::string_view inner = t.substr(open + 1, close - open - 1);
  if (text::trim(inner).empty()) throw fail("empty restriction list");
  for (const auto& piece : text::split_top_level(inner, ',')) {
    const std::string_view p = text::trim(piece);
    std::size_t op = std::string_view::npos;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == '(') break;
      if (p[i] == '>' || p[i] == '<') {
        op = i;
        break;
      }
    }
    if (op == std::string_view::npos) throw fail("restriction without '>' or '<'");
    Restriction r;
    r.relation = text::lower(text::trim(p.substr(0, op)));
    r.direction = p[op];
    r.target = text::squeeze(p.substr(op + 1));
    if (!is_relation_name(r.relation)) throw fail("bad restriction relation '" + r.relation + "'");
    if (r.target.empty()) throw fail("empty restriction target");
    if (!balanced(r.target)) throw fail("unbalanced parentheses in restriction target");
    if (!uw.has_restriction(r)) uw.restrictions.push_back(std::move(r));
  }
  return uw;
}

std::string UnlNode::key() const {
  if (is_hypernode()) return ":" + hypernode;
  return instance.empty() ? uw.text() : uw.text() + ":" + instance;
}

const UnlNode& UnlGraph::node(NodeId id) const {
  if (!contains(id)) throw Error(ErrorCode::UnknownNode, "no node " + std::to_string(id));
  return nodes[static_cast<std::size_t>(id - 1)];
}

UnlNode& UnlGraph::node(NodeId id) {
  if (!contains(id)) throw Error(ErrorCode::UnknownNode, "no node " + std::to_string(id));
  return nodes[static_cast<std::size_t>(id - 1)];
}

std::vector<UnlArc> UnlGraph::arcs_in(std::string_view scope) const {
  std::vector<UnlArc> out;
  for (const auto& a : arcs)
    if (a.scope == scope) out.push_back(a);
  return out;
}

std::vector<NodeId> UnlGraph::members_of(std::string_view scope) const {
  std::vector<NodeId> out;
  for (const auto& n : nodes)
    if (n.scope == scope) out.push_back(n.id);
  return out;
}

NodeId UnlGraph::scope_entry(std::string_view scope) const {
  if (scope.empty()) return entry;
  NodeId first = 0;
  for (const auto& n : nodes) {
    if (n.scope != scope) continue;
    if (n.has("entry")) return n.id;
    if (first == 0) first = n.id;
  }
  return first;
}

NodeId UnlGraph::hypernode_of(std::string_view scope) const {
  for (const auto& n : nodes)
    if (n.hypernode == scope) return n.id;
  return 0;
}

std::optional<std::string> Inventory::class_of(std::string_view attribute) const {
  for (const auto& [name, members] : classes) {
    if (std::find(members.begin(), members.end(), attribute) != members.end()) return name;
  }
  return std::nullopt;
}

Inventory Inventory::parse(std::string_view content) {
  Inventory inv;
  std::string section;
  int line_no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::FormatError, "bad section header", line_no);
      section = text::lower(text::trim(line.substr(1, line.size() - 2)));
      if (section != "relations" && section != "attributes" && section != "classes")
        throw Error(ErrorCode::FormatError, "unknown section '" + section + "'", line_no);
      continue;
    }
    if (section.empty()) throw Error(ErrorCode::FormatError, "entry outside a section", line_no);
    if (section == "classes") {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw Error(ErrorCode::FormatError, "class line needs 'name = members'", line_no);
      const std::string name(text::trim(line.substr(0, eq)));
      auto members = text::split_ws(line.substr(eq + 1));
      if (name.empty() || members.empty())
        throw Error(ErrorCode::FormatError, "empty class", line_no);
      for (const auto& m : members) {
        if (!inv.attributes.count(m))
          throw Error(ErrorCode::FormatError, "class member '" + m + "' is not a declared attribute",
                      line_no);
      }
      inv.classes[name] = std::move(members);
      continue;
    }
    for (auto& name : text::split_ws(line)) {
      if (!is_identifier(name))
        throw Error(ErrorCode::FormatError, "bad name '" + name + "'", line_no);
      (section == "relations" ? inv.relations : inv.attributes).insert(name);
    }
  }
  return inv;
}

Inventory Inventory::load(const std::filesystem::path& path) {
  return parse(text::read_file(path.string()));
}

// ---------------------------------------------------------------------------
// Graph parsing

namespace {

struct Term {
  bool hyper = false;
  std::string scope_ref;  // for hypernode references
  UW uw;
  std::string instance;
  std::vector<std::string> attributes;
};

Term parse_term(std::string_view raw, int line) {
  const std::string_view t = text::trim(raw);
  if (t.empty()) throw Error(ErrorCode::ParseError, "empty term", line);

  // Attributes start at top-level ".@" markers.
  std::vector<std::size_t> cuts;
  int depth = 0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (t[i] == '(') ++depth;
    else if (t[i] == ')') --depth;
    else if (depth == 0 && t[i] == '.' && t[i + 1] == '@') cuts.push_back(i);
  }
  Term term;
  std::string_view base = cuts.empty() ? t : t.substr(0, cuts.front());
  for (std::size_t k = 0; k < cuts.size(); ++k) {
    const std::size_t from = cuts[k] + 2;
    const std::size_t to = k + 1 < cuts.size() ? cuts[k + 1] : t.size();
    std::string attr = text::lower(text::trim(t.substr(from, to - from)));
    if (!is_identifier(attr)) throw Error(ErrorCode::ParseError, "bad attribute '@" + attr + "'", line);
    term.attributes.push_back(std::move(attr));
  }
  base = text::trim(base);
  if (!base.empty() && base.front() == ':') {
    term.hyper = true;
    term.scope_ref = std::string(base.substr(1));
    if (!is_identifier(term.scope_ref))
      throw Error(ErrorCode::ParseError, "bad scope reference '" + std::string(base) + "'", line);
    return term;
  }
  const std::size_t last_close = base.rfind(')');
  const std::size_t colon = base.rfind(':');
  if (colon != std::string_view::npos &&
      (last_close == std::string_view::npos || colon > last_close)) {
    const std::string_view inst = base.substr(colon + 1);
    if (!inst.empty() && std::all_of(inst.begin(), inst.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c));
        })) {
      term.instance = std::string(inst);
      base = text::trim(base.substr(0, colon));
    }
  }
  try {
    term.uw = parse_uw(base);
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedUW, e.detail(), line);
  }
  return term;
}

class GraphBuilder {
 public:
  explicit GraphBuilder(const ParseOptions& options) : options_(options) {}

  NodeId add_term(const Term& term, const std::string& scope, int line) {
    std::string key;
    if (term.hyper) {
      if (!scope.empty())
        throw Error(ErrorCode::NestedScope,
                    "hypernode :" + term.scope_ref + " referenced inside scope :" + scope +
                        " (only one level of hypernodes is supported)",
                    line);
      key = ":" + term.scope_ref;
    } else {
      key = term.instance.empty() ? term.uw.text() : term.uw.text() + ":" + term.instance;
    }
    NodeId id;
    if (auto it = ids_.find(key); it != ids_.end()) {
      id = it->second;
      UnlNode& existing = graph_.node(id);
      if (existing.scope != scope)
        throw Error(ErrorCode::ParseError,
                    "node '" + key + "' used in two scopes ('" + existing.scope + "' and '" +
                        scope + "')",
                    line);
    } else {
      UnlNode node;
      node.id = static_cast<NodeId>(graph_.nodes.size() + 1);
      node.scope = scope;
      if (term.hyper) {
        node.hypernode = term.scope_ref;
      } else {
        node.uw = term.uw;
        node.instance = term.instance;
      }
      id = node.id;
      graph_.nodes.push_back(std::move(node));
      ids_.emplace(key, id);
      if (!scope.empty()) graph_.scopes[scope].push_back(id);
    }
    UnlNode& node = graph_.node(id);
    for (const auto& a : term.attributes) {
      check_attribute(a, line);
      node.attributes.insert(a);
    }
    return id;
  }

  void add_arc(std::string label, std::string scope, NodeId src, NodeId dst, int line) {
    if (options_.strict && options_.inventory && !options_.inventory->relations.count(label))
      throw Error(ErrorCode::UnknownRelation, "unknown relation '" + label + "'", line);
    graph_.arcs.push_back(UnlArc{src, dst, std::move(label), std::move(scope)});
  }

  UnlGraph finish(int line) {
    if (graph_.nodes.empty()) throw Error(ErrorCode::EmptyGraph, "empty [unl] block", line);
    std::map<std::string, int> entries;
    for (const auto& n : graph_.nodes) {
      if (!n.has("entry")) continue;
      if (++entries[n.scope] > 1)
        throw Error(ErrorCode::DuplicateEntryNode,
                    n.scope.empty() ? "more than one top-level @entry node"
                                    : "more than one @entry node in scope :" + n.scope,
                    line);
      if (n.scope.empty()) graph_.entry = n.id;
    }
    return std::move(graph_);
  }

 private:
  void check_attribute(const std::string& a, int line) const {
    if (options_.strict && options_.inventory && !options_.inventory->attributes.count(a))
      throw Error(ErrorCode::UnknownAttribute, "unknown attribute '@" + a + "'", line);
  }

  const ParseOptions& options_;
  UnlGraph graph_;
  std::map<std::string, NodeId> ids_;
};

void parse_graph_line(GraphBuilder& builder, std::string_view line, int line_no) {
  if (text::starts_with(line, "@node")) {
    std::string_view rest = line.substr(5);
    std::string scope;
    if (!rest.empty() && rest.front() == ':') {
      std::size_t end = 1;
      while (end < rest.size() && !text::is_space(rest[end])) ++end;
      scope = std::string(rest.substr(1, end - 1));
      rest = rest.substr(end);
    }
    if (rest.empty() || !text::is_space(rest.front()))
      throw Error(ErrorCode::ParseError, "expected '@node[:SS] TERM'", line_no);
    const Term term = parse_term(rest, line_no);
    builder.add_term(term, scope, line_no);
    return;
  }
  const std::size_t open = line.find('(');
  if (open == std::string_view::npos || line.back() != ')')
    throw Error(ErrorCode::ParseError, "expected 'rel(term, term)'", line_no);
  std::string head = std::string(text::trim(line.substr(0, open)));
  std::string scope;
  if (auto colon = head.find(':'); colon != std::string::npos) {
    scope = head.substr(colon + 1);
    head = head.substr(0, colon);
    if (!is_identifier(scope)) throw Error(ErrorCode::ParseError, "bad scope id '" + scope + "'", line_no);
  }
  const std::string label = text::lower(head);
  if (label.empty() || !std::all_of(label.begin(), label.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
      }))
    throw Error(ErrorCode::ParseError, "bad relation label '" + head + "'", line_no);
  const std::string_view inner = line.substr(open + 1, line.size() - open - 2);
  if (!balanced(inner)) throw Error(ErrorCode::ParseError, "unbalanced parentheses", line_no);
  const auto args = text::split_top_level(inner, ',');
  if (args.size() != 2)
    throw Error(ErrorCode::ParseError, "an arc needs exactly two terms", line_no);
  const Term a = parse_term(args[0], line_no);
  const Term b = parse_term(args[1], line_no);
  const NodeId src = builder.add_term(a, scope, line_no);
  const NodeId dst = builder.add_term(b, scope, line_no);
  builder.add_arc(label, scope, src, dst, line_no);
}

UnlGraph parse_block(const std::vector<std::pair<int, std::string>>& lines, int end_line,
                     const ParseOptions& options) {
  GraphBuilder builder(options);
  for (const auto& [no, l] : lines) parse_graph_line(builder, l, no);
  return builder.finish(end_line);
}

}  // namespace

UnlGraph parse_graph(std::string_view arc_lines, const ParseOptions& options) {
  std::vector<std::pair<int, std::string>> lines;
  int no = 0;
  for (const auto& raw : text::split(arc_lines, '\n')) {
    ++no;
    const auto l = text::trim(raw);
    if (!l.empty() && l.front() != ';') lines.emplace_back(no, std::string(l));
  }
  return parse_block(lines, no, options);
}

UnlDocument parse_document(std::string_view content, const ParseOptions& options) {
  UnlDocument doc;
  bool in_block = false;
  int block_start = 0;
  std::vector<std::pair<int, std::string>> block;
  std::vector<std::string> comments;
  std::map<std::string, std::string> renderings;
  int pending_line = 0;
  int line_no = 0;

  for (const auto& raw : text::split(content, '\n')) {
    ++line_no;
    const std::string_view line = text::trim(raw);
    const std::string tag = text::lower(line);
    if (in_block) {
      if (tag == "[/unl]") {
        Utterance u;
        u.graph = parse_block(block, line_no, options);
        u.comments = "";
        for (std::size_t i = 0; i < comments.size(); ++i) {
          if (i) u.comments += '\n';
          u.comments += comments[i];
        }
        u.renderings = std::move(renderings);
        doc.utterances.push_back(std::move(u));
        comments.clear();
        renderings.clear();
        block.clear();
        in_block = false;
        pending_line = 0;
      } else if (tag == "[unl]") {
        throw Error(ErrorCode::ParseError, "nested [unl] tag", line_no);
      } else if (!line.empty() && line.front() != ';') {
        block.emplace_back(line_no, std::string(line));
      }
      continue;
    }
    if (line.empty()) continue;
    if (tag == "[unl]") {
      in_block = true;
      block_start = line_no;
      continue;
    }
    if (line.front() == ';') {
      if (pending_line == 0) pending_line = line_no;
      std::string_view body = line.substr(1);
      if (!body.empty() && body.front() == '@') {
        const std::size_t sp = body.find(' ');
        const std::string lang(body.substr(1, sp == std::string_view::npos ? body.size() - 1 : sp - 1));
        if (lang.empty()) throw Error(ErrorCode::ParseError, "rendering without language tag", line_no);
        renderings[lang] = sp == std::string_view::npos ? "" : std::string(text::trim(body.substr(sp)));
      } else {
        if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
        comments.emplace_back(body);
      }
      continue;
    }
    throw Error(ErrorCode::ParseError, "unexpected text outside [unl] block", line_no);
  }
  if (in_block) throw Error(ErrorCode::ParseError, "unterminated [unl] block", block_start);
  if (pending_line)
    throw Error(ErrorCode::ParseError, "comment lines not followed by a [unl] block", pending_line);
  return doc;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string term_text(const UnlNode& n, const SerializeOptions& options) {
  std::string out = n.key();
  if (n.has("entry")) out += ".@entry";
  for (const auto& a : n.attributes) {
    if (a == "entry") continue;
    if (!options.include_defaulted && n.defaulted.count(a)) continue;
    out += ".@" + a;
  }
  return out;
}

}  // namespace

std::string serialize_graph(const UnlGraph& g, const SerializeOptions& options) {
  std::vector<bool> in_arc(g.nodes.size() + 1, false);
  for (const auto& a : g.arcs) {
    in_arc[static_cast<std::size_t>(a.source)] = true;
    in_arc[static_cast<std::size_t>(a.target)] = true;
  }
  std::vector<NodeId> isolated;
  for (const auto& n : g.nodes)
    if (!in_arc[static_cast<std::size_t>(n.id)]) isolated.push_back(n.id);

  // Emit isolated nodes at the point where their id would have been
  // assigned so that re-parsing reproduces the same canonical indices.
  std::string out;
  std::size_t next_isolated = 0;
  NodeId max_seen = 0;
  auto flush_isolated = [&](NodeId below) {
    while (next_isolated < isolated.size() && isolated[next_isolated] < below) {
      const UnlNode& n = g.node(isolated[next_isolated++]);
      out += "@node";
      if (!n.scope.empty()) out += ":" + n.scope;
      out += " " + term_text(n, options) + "\n";
      max_seen = std::max(max_seen, n.id);
    }
  };
  for (const auto& a : g.arcs) {
    NodeId first_new = 0;
    for (NodeId id : {a.source, a.target}) {
      if (id > max_seen && (first_new == 0 || id < first_new)) first_new = id;
    }
    if (first_new) flush_isolated(first_new);
    out += a.label;
    if (!a.scope.empty()) out += ":" + a.scope;
    out += "(" + term_text(g.node(a.source), options) + ", " +
           term_text(g.node(a.target), options) + ")\n";
    max_seen = std::max({max_seen, a.source, a.target});
  }
  flush_isolated(static_cast<NodeId>(g.nodes.size() + 1));
  return out;
}

std::string serialize_document(const UnlDocument& doc, const SerializeOptions& options) {
  std::string out;
  for (std::size_t i = 0; i < doc.utterances.size(); ++i) {
    const Utterance& u = doc.utterances[i];
    if (i) out += "\n";
    if (!u.comments.empty()) {
      for (const auto& line : text::split(u.comments, '\n')) out += line.empty() ? ";\n" : "; " + line + "\n";
    }
    for (const auto& [lang, rendering] : u.renderings) out += ";@" + lang + " " + rendering + "\n";
    out += "[unl]\n" + serialize_graph(u.graph, options) + "[/unl]\n";
  }
  return out;
}

}  // namespace deconv
