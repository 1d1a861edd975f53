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

#include "deconv/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "deconv/error.hpp"
#include "text_util.hpp"

namespace deconv {

// ---------------------------------------------------------------------------
// Compiled forms

namespace {

struct Pred {
  enum Kind { Eq, Ne, Unassigned, Assigned, Format } kind = Eq;
  std::string var;
  std::vector<std::string> values;
  const Decoration* format = nullptr;
};

struct PItem;

struct PNode {
  std::string var;
  std::vector<Pred> preds;
  bool has_children = false;
  std::vector<PItem> items;
};

struct PItem {
  bool gap = false;
  std::string gap_name;  // empty for anonymous gaps
  PNode node;
};

struct Ref {
  std::string node;
  std::string var;
};

struct Assign {
  enum Kind { Set, Copy, Add, Remove, Unset, Format } kind = Set;
  std::string var;
  std::string value;
  Ref source;
  const Decoration* format = nullptr;
};

struct TItem;

struct TNode {
  bool fresh = false;     // `+{...}` or `+?x{...}`
  std::string var;        // bound node, or clone source for fresh nodes
  std::vector<Assign> assigns;
  bool has_children = false;
  std::vector<TItem> items;
};

struct TItem {
  bool gap = false;
  std::string gap_name;
  TNode node;
};

struct Guard {
  enum Kind { And, Or, Not, Def, CmpValues, CmpRef } kind = And;
  std::vector<Guard> args;
  Ref left;
  bool negated = false;
  std::vector<std::string> values;
  Ref right;
};

}  // namespace

struct CompiledRule {
  PNode pattern;
  TNode tmpl;
  std::optional<Guard> guard;
};

struct CompiledAssertion {
  enum Scope { All, Leaves, Internal } scope = All;
  std::vector<Pred> when;
  std::vector<Pred> require;
};

namespace {

// ---------------------------------------------------------------------------
// Lexer

struct Tok {
  enum Kind { Ident, Str, Var, Gap, AnonGap, Punct, End } kind = End;
  std::string text;
  int line = 0;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

void lex(std::string_view s, int line, std::vector<Tok>& out) {
  std::size_t i = 0;
  auto fail = [&](const std::string& m) { throw Error(ErrorCode::RuleSyntaxError, m, line); };
  while (i < s.size()) {
    const char c = s[i];
    if (text::is_space(c)) {
      ++i;
      continue;
    }
    if (s.substr(i, 3) == "..." || s.substr(i, 3) == "\xE2\x80\xA6") {
      out.push_back({Tok::AnonGap, "...", line});
      i += 3;
      continue;
    }
    if (c == '?' || c == '*') {
      std::size_t j = i + 1;
      while (j < s.size() && ident_char(s[j])) ++j;
      if (j == i + 1) fail(std::string("expected a name after '") + c + "'");
      out.push_back({c == '?' ? Tok::Var : Tok::Gap, std::string(s.substr(i + 1, j - i - 1)), line});
      i = j;
      continue;
    }
    if (c == '"') {
      const auto end = s.find('"', i + 1);
      if (end == std::string_view::npos) fail("unterminated string");
      out.push_back({Tok::Str, std::string(s.substr(i + 1, end - i - 1)), line});
      i = end + 1;
      continue;
    }
    for (const char* p : {"==>", "!=", "+=", "-="}) {
      const std::string_view pv(p);
      if (s.substr(i, pv.size()) == pv) {
        out.push_back({Tok::Punct, std::string(pv), line});
        i += pv.size();
        goto next;
      }
    }
    if (std::string_view("{}(),|=.:!-@+").find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), line});
      ++i;
      continue;
    }
    if (ident_char(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), line});
      i = j;
      continue;
    }
    fail(std::string("unexpected character '") + c + "'");
  next:;
  }
}

// ---------------------------------------------------------------------------
// Parser and type checker

class Parser {
 public:
  Parser(std::vector<Tok> toks, const Schema& schema) : t_(std::move(toks)), schema_(schema) {
    const int last = t_.empty() ? 0 : t_.back().line;
    t_.push_back({Tok::End, "", last});
  }

  const Tok& peek(std::size_t k = 0) const { return t_[std::min(p_ + k, t_.size() - 1)]; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is(const char* punct) const { return peek().kind == Tok::Punct && peek().text == punct; }
  bool is_word(const char* w) const { return peek().kind == Tok::Ident && peek().text == w; }

  [[noreturn]] void fail(const std::string& m) const {
    throw Error(ErrorCode::RuleSyntaxError, m, peek().line);
  }
  [[noreturn]] void type_fail(const std::string& m) const {
    throw Error(ErrorCode::TypeError, m, peek().line);
  }

  void expect(const char* punct) {
    if (!is(punct)) fail(std::string("expected '") + punct + "'" + near());
    ++p_;
  }

  std::string near() const {
    return at_end() ? " at end of statement" : " near '" + peek().text + "'";
  }

  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected a name" + near());
    return t_[p_++].text;
  }

  std::string value() {
    if (peek().kind != Tok::Ident && peek().kind != Tok::Str) fail("expected a value" + near());
    return t_[p_++].text;
  }

  const VarDecl& variable(const std::string& name) const {
    const VarDecl* v = schema_.find(name);
    if (!v) type_fail("undeclared variable " + name);
    return *v;
  }

  void check_value(const VarDecl& v, const std::string& value) const {
    if (v.kind != VarKind::String && !v.values.count(value))
      type_fail("value " + value + " is not declared for " + v.name);
  }

  const Decoration& format(const std::string& name) const {
    const Decoration* f = schema_.format(name);
    if (!f) type_fail("undeclared format " + name);
    return *f;
  }

  // -- patterns --

  std::vector<Pred> preds() {
    std::vector<Pred> out;
    expect("{");
    while (!is("}")) {
      if (!out.empty()) expect(",");
      Pred p;
      if (is("!")) {
        ++p_;
        p.kind = Pred::Unassigned;
        p.var = ident();
        variable(p.var);
      } else if (is("@")) {
        ++p_;
        p.kind = Pred::Format;
        p.var = ident();
        p.format = &format(p.var);
      } else {
        p.var = ident();
        const VarDecl& v = variable(p.var);
        if (is("=") || is("!=")) {
          p.kind = is("=") ? Pred::Eq : Pred::Ne;
          ++p_;
          p.values.push_back(value());
          while (is("|")) {
            ++p_;
            p.values.push_back(value());
          }
          for (const auto& x : p.values) check_value(v, x);
        } else {
          p.kind = Pred::Assigned;
        }
      }
      out.push_back(std::move(p));
    }
    expect("}");
    return out;
  }

  PNode pnode() {
    if (peek().kind != Tok::Var) fail("expected a node variable" + near());
    PNode n;
    n.var = t_[p_++].text;
    if (!node_vars_.insert(n.var).second) type_fail("node variable ?" + n.var + " bound twice");
    if (is("{")) n.preds = preds();
    if (is("(")) {
      ++p_;
      n.has_children = true;
      while (!is(")")) {
        if (!n.items.empty()) expect(",");
        PItem item;
        if (peek().kind == Tok::Gap) {
          item.gap = true;
          item.gap_name = t_[p_++].text;
          if (!gap_vars_.insert(item.gap_name).second)
            type_fail("gap *" + item.gap_name + " bound twice");
        } else if (peek().kind == Tok::AnonGap) {
          ++p_;
          item.gap = true;
        } else {
          item.node = pnode();
        }
        n.items.push_back(std::move(item));
      }
      expect(")");
    }
    return n;
  }

  // -- templates --

  Ref ref() {
    if (peek().kind != Tok::Var) fail("expected ?var.VARIABLE" + near());
    Ref r;
    r.node = t_[p_++].text;
    if (!node_vars_.count(r.node)) type_fail("unbound node variable ?" + r.node);
    expect(".");
    r.var = ident();
    variable(r.var);
    return r;
  }

  std::vector<Assign> assigns() {
    std::vector<Assign> out;
    expect("{");
    while (!is("}")) {
      if (!out.empty()) expect(",");
      Assign a;
      if (is("-")) {
        ++p_;
        a.kind = Assign::Unset;
        a.var = ident();
        variable(a.var);
      } else if (is("@")) {
        ++p_;
        a.kind = Assign::Format;
        a.var = ident();
        a.format = &format(a.var);
      } else {
        a.var = ident();
        const VarDecl& v = variable(a.var);
        if (is("+=") || is("-=")) {
          a.kind = is("+=") ? Assign::Add : Assign::Remove;
          ++p_;
          if (v.kind != VarKind::NonExclusive) type_fail(a.var + " is not non-exclusive");
          a.value = value();
          check_value(v, a.value);
        } else {
          expect("=");
          if (peek().kind == Tok::Var) {
            a.kind = Assign::Copy;
            a.source = ref();
            const VarDecl& src = variable(a.source.var);
            const bool set_dst = v.kind == VarKind::NonExclusive;
            const bool set_src = src.kind == VarKind::NonExclusive;
            if (set_dst != set_src)
              type_fail("cannot copy " + a.source.var + " (" + var_kind_name(src.kind) + ") into " +
                        a.var + " (" + var_kind_name(v.kind) + ")");
            if (v.kind != VarKind::String && src.kind != VarKind::String) {
              for (const auto& x : src.values)
                if (!v.values.count(x))
                  type_fail("value " + x + " of " + src.name + " is not declared for " + v.name);
            }
          } else {
            a.kind = Assign::Set;
            a.value = value();
            check_value(v, a.value);
          }
        }
      }
      out.push_back(std::move(a));
    }
    expect("}");
    return out;
  }

  TNode tnode() {
    TNode n;
    if (is("+")) {
      ++p_;
      n.fresh = true;
      if (peek().kind == Tok::Var) {
        n.var = t_[p_++].text;
        if (!node_vars_.count(n.var)) type_fail("unbound node variable ?" + n.var);
      }
      if (is("{")) n.assigns = assigns();
      else if (n.var.empty()) fail("expected '{' after '+'" + near());
    } else if (peek().kind == Tok::Var) {
      n.var = t_[p_++].text;
      if (!node_vars_.count(n.var)) type_fail("unbound node variable ?" + n.var);
      if (is("{")) n.assigns = assigns();
    } else {
      fail("expected a template node" + near());
    }
    if (is("(")) {
      ++p_;
      n.has_children = true;
      while (!is(")")) {
        if (!n.items.empty()) expect(",");
        TItem item;
        if (peek().kind == Tok::Gap) {
          item.gap = true;
          item.gap_name = t_[p_++].text;
          if (!gap_vars_.count(item.gap_name)) type_fail("unbound gap *" + item.gap_name);
        } else if (peek().kind == Tok::AnonGap) {
          fail("anonymous gaps cannot appear in a template");
        } else {
          item.node = tnode();
        }
        n.items.push_back(std::move(item));
      }
      expect(")");
    }
    return n;
  }

  // -- guards --

  Guard guard_or() {
    Guard g = guard_and();
    if (!is_word("OR")) return g;
    Guard out;
    out.kind = Guard::Or;
    out.args.push_back(std::move(g));
    while (is_word("OR")) {
      ++p_;
      out.args.push_back(guard_and());
    }
    return out;
  }

  Guard guard_and() {
    Guard g = guard_not();
    if (!is_word("AND")) return g;
    Guard out;
    out.kind = Guard::And;
    out.args.push_back(std::move(g));
    while (is_word("AND")) {
      ++p_;
      out.args.push_back(guard_not());
    }
    return out;
  }

  Guard guard_not() {
    if (is_word("NOT")) {
      ++p_;
      Guard g;
      g.kind = Guard::Not;
      g.args.push_back(guard_not());
      return g;
    }
    if (is("(")) {
      ++p_;
      Guard g = guard_or();
      expect(")");
      return g;
    }
    Guard g;
    if (is_word("DEF")) {
      ++p_;
      g.kind = Guard::Def;
      g.left = ref();
      return g;
    }
    g.left = ref();
    if (!is("=") && !is("!=")) fail("expected '=' or '!='" + near());
    g.negated = is("!=");
    ++p_;
    if (peek().kind == Tok::Var) {
      g.kind = Guard::CmpRef;
      g.right = ref();
    } else {
      g.kind = Guard::CmpValues;
      const VarDecl& v = variable(g.left.var);
      g.values.push_back(value());
      while (is("|")) {
        ++p_;
        g.values.push_back(value());
      }
      for (const auto& x : g.values) check_value(v, x);
    }
    return g;
  }

  std::size_t pos() const { return p_; }

 private:
  std::vector<Tok> t_;
  std::size_t p_ = 0;
  const Schema& schema_;
  std::set<std::string> node_vars_;
  std::set<std::string> gap_vars_;
};

struct Statement {
  int line = 0;
  std::string text;  // first line
  std::vector<std::pair<int, std::string>> continuation;
};

std::string strip_comment(std::string_view line) {
  const auto pos = line.find("**");
  return std::string(pos == std::string_view::npos ? line : line.substr(0, pos));
}

std::vector<Tok> lex_statement(const Statement& st, std::string_view first_rest) {
  std::vector<Tok> toks;
  lex(first_rest, st.line, toks);
  for (const auto& [ln, text] : st.continuation) lex(text, ln, toks);
  return toks;
}

// Splits `RULE name PRIORITY p : rest`.
Rule parse_rule(const Statement& st, const Schema& schema) {
  const auto words = text::split_ws(st.text);
  Rule r;
  r.line = st.line;
  auto fail = [&](const std::string& m) { throw Error(ErrorCode::RuleSyntaxError, m, st.line); };
  if (words.size() < 2) fail("expected RULE name PRIORITY p : pattern ==> template");
  r.name = words[1];
  const auto colon = st.text.find(':');
  if (colon == std::string::npos) fail("expected ':' after the rule header");
  const auto header = text::split_ws(std::string_view(st.text).substr(0, colon));
  if (header.size() != 4 || header[2] != "PRIORITY")
    fail("expected RULE name PRIORITY p : pattern ==> template");
  try {
    std::size_t used = 0;
    r.priority = std::stoi(header[3], &used);
    if (used != header[3].size()) throw std::invalid_argument("priority");
  } catch (const std::exception&) {
    fail("priority must be an integer");
  }

  Parser p(lex_statement(st, std::string_view(st.text).substr(colon + 1)), schema);
  auto impl = std::make_shared<CompiledRule>();
  impl->pattern = p.pnode();
  p.expect("==>");
  impl->tmpl = p.tnode();
  if (p.is_word("WHERE")) {
    p.ident();
    impl->guard = p.guard_or();
  }
  if (!p.at_end()) p.fail("unexpected trailing input" + p.near());
  r.impl = std::move(impl);
  return r;
}

// `ASSERT name ON scope [WHEN {preds}] REQUIRE {preds}`.
Assertion parse_assertion(const Statement& st, const Schema& schema) {
  const auto words = text::split_ws(st.text);
  if (words.size() < 2) throw Error(ErrorCode::RuleSyntaxError, "expected ASSERT name ON ...", st.line);
  Assertion a;
  a.name = words[1];
  a.line = st.line;
  const auto at = st.text.find(words[1]) + words[1].size();
  Parser p(lex_statement(st, std::string_view(st.text).substr(at)), schema);
  auto impl = std::make_shared<CompiledAssertion>();
  if (!p.is_word("ON")) p.fail("expected ON" + p.near());
  p.ident();
  const std::string scope = p.ident();
  if (scope == "ALL") impl->scope = CompiledAssertion::All;
  else if (scope == "LEAVES") impl->scope = CompiledAssertion::Leaves;
  else if (scope == "INTERNAL") impl->scope = CompiledAssertion::Internal;
  else p.fail("expected ALL, LEAVES or INTERNAL");
  if (p.is_word("WHEN")) {
    p.ident();
    impl->when = p.preds();
  }
  if (!p.is_word("REQUIRE")) p.fail("expected REQUIRE" + p.near());
  p.ident();
  impl->require = p.preds();
  if (!p.at_end()) p.fail("unexpected trailing input" + p.near());
  a.impl = std::move(impl);
  return a;
}

// ---------------------------------------------------------------------------
// Matching

bool pred_holds(const Pred& p, const Decoration& d, const Schema& schema) {
  switch (p.kind) {
    case Pred::Eq:
    case Pred::Ne: {
      const bool any = std::any_of(p.values.begin(), p.values.end(),
                                   [&](const std::string& v) { return d.holds(p.var, v); });
      return p.kind == Pred::Eq ? any : !any;
    }
    case Pred::Unassigned: return !d.assigned(p.var);
    case Pred::Assigned: return d.assigned(p.var);
    case Pred::Format: return schema.subsumes(d, *p.format);
  }
  return false;
}

bool preds_hold(const std::vector<Pred>& ps, const Decoration& d, const Schema& schema) {
  return std::all_of(ps.begin(), ps.end(), [&](const Pred& p) { return pred_holds(p, d, schema); });
}

struct Binding {
  std::map<std::string, const TreeNode*> nodes;
  std::map<std::string, std::vector<const TreeNode*>> gaps;
};

bool ref_equal(const Decoration& a, const std::string& va, const Decoration& b, const std::string& vb) {
  auto sa = a.sets.find(va);
  auto sb = b.sets.find(vb);
  if (sa != a.sets.end() || sb != b.sets.end()) {
    const std::set<std::string> empty;
    return (sa == a.sets.end() ? empty : sa->second) == (sb == b.sets.end() ? empty : sb->second);
  }
  return a.get(va) == b.get(vb);
}

bool eval_guard(const Guard& g, const Binding& b) {
  switch (g.kind) {
    case Guard::And:
      return std::all_of(g.args.begin(), g.args.end(), [&](const Guard& x) { return eval_guard(x, b); });
    case Guard::Or:
      return std::any_of(g.args.begin(), g.args.end(), [&](const Guard& x) { return eval_guard(x, b); });
    case Guard::Not: return !eval_guard(g.args.front(), b);
    case Guard::Def: return b.nodes.at(g.left.node)->deco.assigned(g.left.var);
    case Guard::CmpValues: {
      const Decoration& d = b.nodes.at(g.left.node)->deco;
      const bool any = std::any_of(g.values.begin(), g.values.end(),
                                   [&](const std::string& v) { return d.holds(g.left.var, v); });
      return g.negated ? !any : any;
    }
    case Guard::CmpRef: {
      const bool eq = ref_equal(b.nodes.at(g.left.node)->deco, g.left.var,
                                b.nodes.at(g.right.node)->deco, g.right.var);
      return g.negated ? !eq : eq;
    }
  }
  return false;
}

class Matcher {
 public:
  Matcher(const Schema& schema, Binding& b) : schema_(schema), b_(b) {}

  using Cont = std::function<bool()>;

  bool node(const PNode& p, const TreeNode& t, const Cont& k) {
    if (!preds_hold(p.preds, t.deco, schema_)) return false;
    b_.nodes[p.var] = &t;
    if (!p.has_children) return k();
    return seq(p.items, 0, t.children, 0, k);
  }

 private:
  bool seq(const std::vector<PItem>& items, std::size_t ii, const std::vector<TreeNode>& kids,
           std::size_t ci, const Cont& k) {
    if (ii == items.size()) return ci == kids.size() && k();
    const PItem& item = items[ii];
    if (item.gap) {
      for (std::size_t len = 0; ci + len <= kids.size(); ++len) {
        if (!item.gap_name.empty()) {
          auto& g = b_.gaps[item.gap_name];
          g.clear();
          for (std::size_t j = ci; j < ci + len; ++j) g.push_back(&kids[j]);
        }
        if (seq(items, ii + 1, kids, ci + len, k)) return true;
      }
      return false;
    }
    if (ci == kids.size()) return false;
    return node(item.node, kids[ci], [&] { return seq(items, ii + 1, kids, ci + 1, k); });
  }

  const Schema& schema_;
  Binding& b_;
};

// ---------------------------------------------------------------------------
// Template instantiation

void copy_tactical(TreeNode& to, const TreeNode& from) {
  to.unl = from.unl;
  to.tid = from.tid;
  to.umc = from.umc;
}

void run_assigns(const std::vector<Assign>& assigns, Decoration& d, const Binding& b,
                 const Schema& schema) {
  for (const Assign& a : assigns) {
    switch (a.kind) {
      case Assign::Set: schema.assign(d, a.var, a.value); break;
      case Assign::Add: schema.add(d, a.var, a.value); break;
      case Assign::Remove: schema.remove(d, a.var, a.value); break;
      case Assign::Unset: d.unset(a.var); break;
      case Assign::Format: schema.apply_format(d, *a.format); break;
      case Assign::Copy: {
        const Decoration& src = b.nodes.at(a.source.node)->deco;
        if (auto it = src.sets.find(a.source.var); it != src.sets.end()) {
          d.unset(a.var);
          for (const auto& v : it->second) schema.add(d, a.var, v);
        } else if (auto v = src.get(a.source.var)) {
          schema.assign(d, a.var, *v);
        } else {
          d.unset(a.var);
        }
        break;
      }
    }
  }
}

TreeNode build(const TNode& t, const Binding& b, const TreeNode& inherit, const Schema& schema);

std::vector<TreeNode> build_items(const std::vector<TItem>& items, const Binding& b,
                                  const TreeNode& inherit, const Schema& schema) {
  std::vector<TreeNode> out;
  for (const TItem& item : items) {
    if (item.gap) {
      for (const TreeNode* g : b.gaps.at(item.gap_name)) out.push_back(*g);
    } else {
      out.push_back(build(item.node, b, inherit, schema));
    }
  }
  return out;
}

TreeNode build(const TNode& t, const Binding& b, const TreeNode& inherit, const Schema& schema) {
  TreeNode out;
  const TreeNode* src = t.var.empty() ? nullptr : b.nodes.at(t.var);
  const TreeNode& anchor = src ? *src : inherit;
  copy_tactical(out, anchor);
  if (src) out.deco = src->deco;
  run_assigns(t.assigns, out.deco, b, schema);
  if (t.has_children) {
    out.children = build_items(t.items, b, anchor, schema);
  } else if (src && !t.fresh) {
    out.children = src->children;
  }
  return out;
}

// Nodes of `root` in breadth-first order, as child-index paths.
std::vector<std::vector<std::size_t>> bfs_paths(const TreeNode& root) {
  std::vector<std::vector<std::size_t>> out;
  std::deque<std::pair<const TreeNode*, std::vector<std::size_t>>> q;
  q.push_back({&root, {}});
  while (!q.empty()) {
    auto [n, path] = std::move(q.front());
    q.pop_front();
    for (std::size_t i = 0; i < n->children.size(); ++i) {
      auto p = path;
      p.push_back(i);
      q.push_back({&n->children[i], std::move(p)});
    }
    out.push_back(std::move(path));
  }
  return out;
}

TreeNode& at_path(TreeNode& root, const std::vector<std::size_t>& path) {
  TreeNode* n = &root;
  for (std::size_t i : path) n = &n->children[i];
  return *n;
}

const TreeNode& at_path(const TreeNode& root, const std::vector<std::size_t>& path) {
  const TreeNode* n = &root;
  for (std::size_t i : path) n = &n->children[i];
  return *n;
}

// Finds the first match of `rule` in BFS order.
bool find_match(const CompiledRule& rule, const TreeNode& root, const Schema& schema,
                std::vector<std::size_t>& path, Binding& binding) {
  for (auto& p : bfs_paths(root)) {
    const TreeNode& target = at_path(root, p);
    Binding b;
    Matcher m(schema, b);
    const bool ok = m.node(rule.pattern, target, [&] { return !rule.guard || eval_guard(*rule.guard, b); });
    if (ok) {
      path = std::move(p);
      binding = std::move(b);
      return true;
    }
  }
  return false;
}

void check_tree(const TreeNode& n, const Schema& schema) {
  schema.check(n.deco);
  for (const auto& c : n.children) check_tree(c, schema);
}

}  // namespace

Grammar compile_grammar(std::string_view content, const Schema& schema, std::string name) {
  Grammar g;
  g.name = std::move(name);
  std::vector<Statement> statements;
  int no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++no;
    const std::string line = strip_comment(raw);
    if (text::trim(line).empty()) continue;
    if (text::is_space(line.front())) {
      if (statements.empty()) throw Error(ErrorCode::RuleSyntaxError, "continuation without a statement", no);
      statements.back().continuation.push_back({no, line});
      continue;
    }
    statements.push_back({no, std::string(text::trim(line)), {}});
  }

  for (const Statement& st : statements) {
    const auto words = text::split_ws(st.text);
    const std::string& kw = words.front();
    if (kw == "RULE") {
      Rule r = parse_rule(st, schema);
      for (const auto& other : g.rules)
        if (other.name == r.name)
          throw Error(ErrorCode::RuleSyntaxError, "rule " + r.name + " defined twice", st.line);
      r.order = g.rules.size();
      g.rules.push_back(std::move(r));
    } else if (kw == "ASSERT") {
      g.assertions.push_back(parse_assertion(st, schema));
    } else if (kw == "MAXITER") {
      if (words.size() != 2 || !st.continuation.empty())
        throw Error(ErrorCode::RuleSyntaxError, "expected MAXITER n", st.line);
      try {
        g.max_iterations = std::stoul(words[1]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::RuleSyntaxError, "expected MAXITER n", st.line);
      }
    } else {
      throw Error(ErrorCode::RuleSyntaxError, "expected RULE, ASSERT or MAXITER", st.line);
    }
  }
  std::stable_sort(g.rules.begin(), g.rules.end(),
                   [](const Rule& a, const Rule& b) { return a.priority > b.priority; });
  return g;
}

Grammar load_grammar(const std::filesystem::path& path, const Schema& schema) {
  return compile_grammar(text::read_file(path.string()), schema, path.stem().string());
}

void check_assertions(const Grammar& grammar, const Schema& schema, const TreeNode& tree) {
  for (const Assertion& a : grammar.assertions) {
    for (const TreeNode* n : preorder(tree)) {
      if (a.impl->scope == CompiledAssertion::Leaves && !n->leaf()) continue;
      if (a.impl->scope == CompiledAssertion::Internal && n->leaf()) continue;
      if (!preds_hold(a.impl->when, n->deco, schema)) continue;
      if (!preds_hold(a.impl->require, n->deco, schema))
        throw Error(ErrorCode::PostconditionFailed,
                    "assertion " + a.name + " fails on node {" + n->deco.text() + "} of UNL node " +
                        std::to_string(n->unl),
                    a.line);
    }
  }
}

TreeNode apply(const Grammar& grammar, const Schema& schema, TreeNode tree, ApplyStats* stats) {
  check_tree(tree, schema);
  std::size_t applications = 0;
  for (;;) {
    bool fired = false;
    for (const Rule& rule : grammar.rules) {
      std::vector<std::size_t> path;
      Binding binding;
      if (!find_match(*rule.impl, tree, schema, path, binding)) continue;
      if (applications >= grammar.max_iterations) {
        if (stats) stats->applications = applications;
        throw Error(ErrorCode::IterationLimit,
                    "grammar " + grammar.name + ": rule " + rule.name + " still applicable after " +
                        std::to_string(applications) + " applications",
                    rule.line);
      }
      TreeNode& target = at_path(tree, path);
      TreeNode replacement;
      try {
        replacement = build(rule.impl->tmpl, binding, target, schema);
      } catch (const Error& e) {
        throw Error(e.code(), "rule " + rule.name + ": " + e.detail(), rule.line);
      }
      target = std::move(replacement);
      ++applications;
      if (stats) stats->fired.push_back(rule.name);
      fired = true;
      break;
    }
    if (!fired) break;
  }
  if (stats) stats->applications = applications;
  check_tree(tree, schema);
  check_assertions(grammar, schema, tree);
  return tree;
}

}  // namespace deconv
