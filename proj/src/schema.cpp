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

#include "deconv/schema.hpp"

#include <functional>

#include "deconv/error.hpp"
#include "text_util.hpp"

namespace deconv {

const char* var_kind_name(VarKind kind) {
  switch (kind) {
    case VarKind::Exclusive: return "exclusive";
    case VarKind::NonExclusive: return "non-exclusive";
    case VarKind::String: return "string";
  }
  return "exclusive";
}

bool Decoration::assigned(const std::string& var) const {
  return scalars.count(var) > 0 || sets.count(var) > 0;
}

std::optional<std::string> Decoration::get(const std::string& var) const {
  if (auto it = scalars.find(var); it != scalars.end()) return it->second;
  if (auto it = sets.find(var); it != sets.end()) {
    std::string out;
    for (const auto& v : it->second) out += (out.empty() ? "" : "|") + v;
    return out;
  }
  return std::nullopt;
}

bool Decoration::holds(const std::string& var, const std::string& value) const {
  if (auto it = scalars.find(var); it != scalars.end()) return it->second == value;
  if (auto it = sets.find(var); it != sets.end()) return it->second.count(value) > 0;
  return false;
}

void Decoration::unset(const std::string& var) {
  scalars.erase(var);
  sets.erase(var);
}

std::string Decoration::text() const {
  std::map<std::string, std::string> all;
  for (const auto& [k, v] : scalars) all[k] = v;
  for (const auto& [k, v] : sets) all[k] = *get(k);
  std::string out;
  for (const auto& [k, v] : all) out += (out.empty() ? "" : ", ") + k + "=" + v;
  return out;
}

namespace {

struct Token {
  std::string text;
  int line = 0;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

std::string strip_comment(std::string_view line) {
  const auto pos = line.find("**");
  return std::string(pos == std::string_view::npos ? line : line.substr(0, pos));
}

void tokenize(std::string_view line, int no, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (text::is_space(c)) {
      ++i;
    } else if (line.substr(i, 3) == "...") {
      i += 3;  // open-ended enumeration marker, ignored
    } else if (line.substr(i, 3) == "\xE2\x80\xA6") {
      i += 3;
    } else if (line.substr(i, 2) == "==") {
      out.push_back({"==", no});
      i += 2;
    } else if (c == '(' || c == ')' || c == ',' || c == '.') {
      out.push_back({std::string(1, c), no});
      ++i;
    } else if (ident_char(c)) {
      std::size_t j = i;
      while (j < line.size() && ident_char(line[j])) ++j;
      out.push_back({std::string(line.substr(i, j - i)), no});
      i = j;
    } else {
      throw Error(ErrorCode::SchemaError, std::string("unexpected character '") + c + "'", no);
    }
  }
}

bool is_ident(const std::string& t) { return !t.empty() && ident_char(t.front()); }

struct Item {
  std::string name;
  int line = 0;
  bool member = false;  // NAME ( ... )
  std::vector<Item> items;
};

class DeclParser {
 public:
  explicit DeclParser(const std::vector<Token>& toks) : t_(toks) {}

  bool done() const { return p_ >= t_.size(); }

  // NAME == ( items ) [.]
  Item top() {
    Item it;
    it.line = peek_line();
    it.name = ident();
    expect("==");
    expect("(");
    it.member = true;
    it.items = items();
    expect(")");
    if (!done() && t_[p_].text == ".") ++p_;
    return it;
  }

 private:
  std::vector<Item> items() {
    std::vector<Item> out;
    while (!done() && t_[p_].text != ")") {
      if (t_[p_].text == ",") {
        ++p_;
        continue;
      }
      Item it;
      it.line = peek_line();
      it.name = ident();
      if (!done() && t_[p_].text == "(") {
        ++p_;
        it.member = true;
        it.items = items();
        expect(")");
      }
      out.push_back(std::move(it));
    }
    return out;
  }

  int peek_line() const { return done() ? (t_.empty() ? 0 : t_.back().line) : t_[p_].line; }

  std::string ident() {
    if (done() || !is_ident(t_[p_].text))
      throw Error(ErrorCode::SchemaError, "expected a name", peek_line());
    return t_[p_++].text;
  }

  void expect(const std::string& s) {
    if (done() || t_[p_].text != s)
      throw Error(ErrorCode::SchemaError, "expected '" + s + "'", peek_line());
    ++p_;
  }

  const std::vector<Token>& t_;
  std::size_t p_ = 0;
};

}  // namespace

void Schema::declare(VarDecl v) {
  if (vars_.count(v.name) || formats_.count(v.name))
    throw Error(ErrorCode::SchemaError, "variable " + v.name + " declared twice", v.line);
  vars_.emplace(v.name, std::move(v));
}

Schema Schema::parse(std::string_view content) {
  Schema s;
  enum class Section { None, Exc, Nex, Str, Fmt } section = Section::None;
  std::vector<Token> pending;
  std::vector<std::pair<std::string, int>> format_lines;

  auto flush = [&](Section sec) {
    if (pending.empty()) return;
    if (sec == Section::Str) {
      for (const auto& t : pending) {
        if (t.text == "," || t.text == ".") continue;
        if (!is_ident(t.text)) throw Error(ErrorCode::SchemaError, "expected a name", t.line);
        s.declare({t.text, VarKind::String, {}, {}, t.line});
      }
    } else {
      const VarKind kind = sec == Section::Exc ? VarKind::Exclusive : VarKind::NonExclusive;
      DeclParser p(pending);
      while (!p.done()) {
        const Item top = p.top();
        // A top declaration whose members are plain values is itself a variable.
        std::function<void(const Item&, std::vector<std::string>)> walk =
            [&](const Item& it, std::vector<std::string> path) {
              const bool values = std::none_of(it.items.begin(), it.items.end(),
                                               [](const Item& c) { return c.member; });
              const bool members = std::all_of(it.items.begin(), it.items.end(),
                                               [](const Item& c) { return c.member; });
              if (it.items.empty())
                throw Error(ErrorCode::SchemaError, it.name + " has no values", it.line);
              if (values) {
                VarDecl v{it.name, kind, {}, path, it.line};
                for (const auto& c : it.items) v.values.insert(c.name);
                s.declare(std::move(v));
              } else if (members) {
                path.push_back(it.name);
                for (const auto& c : it.items) walk(c, path);
              } else {
                throw Error(ErrorCode::SchemaError,
                            it.name + " mixes values and variables", it.line);
              }
            };
        walk(top, {});
      }
    }
    pending.clear();
  };

  int no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++no;
    const std::string line = strip_comment(raw);
    const auto t = text::trim(line);
    if (t.empty()) continue;
    Section next = Section::None;
    if (t == "-EXC-") next = Section::Exc;
    else if (t == "-NEX-") next = Section::Nex;
    else if (t == "-STR-") next = Section::Str;
    else if (t == "-FMT-") next = Section::Fmt;
    if (next != Section::None) {
      flush(section);
      section = next;
      continue;
    }
    if (section == Section::None)
      throw Error(ErrorCode::SchemaError, "declaration outside of a section", no);
    if (section == Section::Fmt) {
      format_lines.push_back({std::string(t), no});
    } else {
      tokenize(t, no, pending);
    }
  }
  flush(section);

  for (const auto& [line, ln] : format_lines) {
    const auto eq = line.find("==");
    if (eq == std::string::npos) throw Error(ErrorCode::SchemaError, "expected NAME == assignments", ln);
    const std::string name(text::trim(std::string_view(line).substr(0, eq)));
    if (name.empty() || !std::all_of(name.begin(), name.end(), ident_char))
      throw Error(ErrorCode::SchemaError, "bad format name", ln);
    if (s.vars_.count(name) || s.formats_.count(name))
      throw Error(ErrorCode::SchemaError, "format " + name + " declared twice", ln);
    Decoration d;
    for (const auto& part : text::split(std::string_view(line).substr(eq + 2), ',')) {
      const auto a = text::trim(part);
      if (a.empty()) continue;
      const auto e = a.find('=');
      if (e == std::string_view::npos) throw Error(ErrorCode::SchemaError, "expected VAR=VALUE", ln);
      const std::string var(text::trim(a.substr(0, e)));
      try {
        for (const auto& v : text::split(a.substr(e + 1), '|')) {
          const std::string value(text::trim(v));
          if (s.require(var).kind == VarKind::NonExclusive) s.add(d, var, value);
          else s.assign(d, var, value);
        }
      } catch (const Error& err) {
        throw Error(ErrorCode::SchemaError, err.detail(), ln);
      }
    }
    s.formats_.emplace(name, std::move(d));
  }
  return s;
}

Schema Schema::load(const std::filesystem::path& path) {
  return parse(text::read_file(path.string()));
}

const VarDecl* Schema::find(std::string_view name) const {
  auto it = vars_.find(name);
  return it == vars_.end() ? nullptr : &it->second;
}

const VarDecl& Schema::require(std::string_view name) const {
  if (const VarDecl* v = find(name)) return *v;
  throw Error(ErrorCode::TypeError, "undeclared variable " + std::string(name));
}

const Decoration* Schema::format(std::string_view name) const {
  auto it = formats_.find(name);
  return it == formats_.end() ? nullptr : &it->second;
}

void Schema::check_value(const VarDecl& v, const std::string& value) const {
  if (value.empty()) throw Error(ErrorCode::TypeError, "empty value for " + v.name);
  if (v.kind != VarKind::String && !v.values.count(value))
    throw Error(ErrorCode::TypeError, "value " + value + " is not declared for " + v.name);
}

void Schema::assign(Decoration& d, const std::string& var, const std::string& value) const {
  const VarDecl& v = require(var);
  check_value(v, value);
  if (v.kind == VarKind::NonExclusive) {
    d.sets[var] = {value};
  } else {
    d.scalars[var] = value;
  }
}

void Schema::add(Decoration& d, const std::string& var, const std::string& value) const {
  const VarDecl& v = require(var);
  if (v.kind != VarKind::NonExclusive)
    throw Error(ErrorCode::TypeError, var + " is not non-exclusive");
  check_value(v, value);
  d.sets[var].insert(value);
}

void Schema::remove(Decoration& d, const std::string& var, const std::string& value) const {
  const VarDecl& v = require(var);
  if (v.kind != VarKind::NonExclusive)
    throw Error(ErrorCode::TypeError, var + " is not non-exclusive");
  auto it = d.sets.find(var);
  if (it == d.sets.end()) return;
  it->second.erase(value);
  if (it->second.empty()) d.sets.erase(it);
}

void Schema::apply_format(Decoration& d, const Decoration& format) const {
  for (const auto& [k, v] : format.scalars) d.scalars[k] = v;
  for (const auto& [k, v] : format.sets) d.sets[k].insert(v.begin(), v.end());
}

bool Schema::subsumes(const Decoration& d, const Decoration& format) const {
  for (const auto& [k, v] : format.scalars)
    if (!d.holds(k, v)) return false;
  for (const auto& [k, vs] : format.sets)
    for (const auto& v : vs)
      if (!d.holds(k, v)) return false;
  return true;
}

void Schema::check(const Decoration& d) const {
  for (const auto& [k, v] : d.scalars) {
    const VarDecl& decl = require(k);
    if (decl.kind == VarKind::NonExclusive) throw Error(ErrorCode::TypeError, k + " holds a single value");
    check_value(decl, v);
  }
  for (const auto& [k, vs] : d.sets) {
    const VarDecl& decl = require(k);
    if (decl.kind != VarKind::NonExclusive) throw Error(ErrorCode::TypeError, k + " holds a set");
    if (vs.empty()) throw Error(ErrorCode::TypeError, k + " holds an empty set");
    for (const auto& v : vs) check_value(decl, v);
  }
}

}  // namespace deconv
