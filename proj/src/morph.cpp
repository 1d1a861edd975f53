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

#include "deconv/morph.hpp"

#include <algorithm>
#include <regex>

#include "deconv/error.hpp"
#include "text_util.hpp"

namespace deconv {

namespace {

bool comment_or_blank(std::string_view line) {
  const auto t = text::trim(line);
  return t.empty() || t.front() == '#';
}

std::string first_char(std::string_view s) {
  if (s.empty()) return {};
  const auto c = static_cast<unsigned char>(s.front());
  std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : 4;
  return std::string(s.substr(0, std::min(len, s.size())));
}

}  // namespace

MorphPack MorphPack::parse(std::string_view rules, std::string_view affixes,
                           std::string_view graphemic) {
  MorphPack p;
  int no = 0;
  for (const auto& line : text::split(affixes, '\n')) {
    ++no;
    if (comment_or_blank(line)) continue;
    const auto cols = text::split(text::trim(line), '\t');
    if (cols.size() != 2) throw Error(ErrorCode::FormatError, "affixes: expected id<TAB>string", no);
    const std::string id(text::trim(cols[0]));
    std::string value(text::trim(cols[1]));
    if (value == "-") value.clear();
    if (!p.affixes_.emplace(id, value).second)
      throw Error(ErrorCode::FormatError, "affixes: duplicate id " + id, no);
  }

  no = 0;
  for (const auto& line : text::split(rules, '\n')) {
    ++no;
    if (comment_or_blank(line)) continue;
    const auto cols = text::split(text::trim(line), '\t');
    if (cols.size() < 3 || cols.size() > 4)
      throw Error(ErrorCode::FormatError, "rules: expected name<TAB>condition<TAB>stem[<TAB>ops]", no);
    MorphRule r;
    r.name = std::string(text::trim(cols[0]));
    r.line = no;
    const auto cond = text::trim(cols[1]);
    if (cond != "*") {
      for (const auto& part : text::split(cond, ',')) {
        const auto c = text::trim(part);
        MorphCondition mc;
        if (!c.empty() && c.front() == '!') {
          mc.var = std::string(text::trim(c.substr(1)));
        } else {
          const auto eq = c.find('=');
          if (eq == std::string_view::npos)
            throw Error(ErrorCode::FormatError, "rules: expected VAR=V1|V2 or !VAR", no);
          mc.var = std::string(text::trim(c.substr(0, eq)));
          for (const auto& v : text::split(c.substr(eq + 1), '|'))
            mc.values.emplace_back(text::trim(v));
        }
        if (mc.var.empty()) throw Error(ErrorCode::FormatError, "rules: empty variable", no);
        r.conditions.push_back(std::move(mc));
      }
    }
    r.stem = std::string(text::trim(cols[2]));
    if (r.stem.empty()) throw Error(ErrorCode::FormatError, "rules: empty stem selector", no);
    if (cols.size() == 4) {
      for (const auto& op : text::split_ws(cols[3])) {
        const auto colon = op.find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::FormatError, "rules: bad op " + op, no);
        const std::string kind = op.substr(0, colon);
        const std::string arg = op.substr(colon + 1);
        MorphOp m;
        if (kind == "strip") {
          m.kind = MorphOp::Strip;
          m.arg = arg;
        } else if (kind == "add" || kind == "pre") {
          m.kind = kind == "add" ? MorphOp::Add : MorphOp::Prefix;
          m.arg = arg;
        } else if (kind == "subst") {
          const auto gt = arg.find('>');
          if (gt == std::string::npos) throw Error(ErrorCode::FormatError, "rules: expected subst:old>ID", no);
          m.kind = MorphOp::Subst;
          m.arg = arg.substr(0, gt);
          m.affix = arg.substr(gt + 1);
        } else {
          throw Error(ErrorCode::FormatError, "rules: unknown op " + kind, no);
        }
        const std::string& id = m.kind == MorphOp::Subst ? m.affix : m.arg;
        if (m.kind != MorphOp::Strip && !p.affixes_.count(id))
          throw Error(ErrorCode::FormatError, "rules: unknown affix " + id, no);
        r.ops.push_back(std::move(m));
      }
    }
    p.rules_.push_back(std::move(r));
  }
  if (std::none_of(p.rules_.begin(), p.rules_.end(),
                   [](const MorphRule& r) { return r.conditions.empty(); }))
    throw Error(ErrorCode::FormatError, "rules: a fallback rule with condition * is required");

  no = 0;
  for (const auto& line : text::split(graphemic, '\n')) {
    ++no;
    if (comment_or_blank(line)) continue;
    const auto w = text::split_ws(line);
    if (w.front() == "class") {
      if (w.size() < 4 || w[2] != "=" || w[1].size() < 2 || w[1][0] != '@')
        throw Error(ErrorCode::FormatError, "graphemic: expected class @NAME = chars...", no);
      p.classes_[w[1].substr(1)] = std::vector<std::string>(w.begin() + 3, w.end());
      continue;
    }
    const auto arrow = std::find(w.begin(), w.end(), "=>");
    if (arrow == w.end() || arrow + 2 != w.end())
      throw Error(ErrorCode::FormatError, "graphemic: expected ... => result", no);
    GraphemicRule g;
    g.line = no;
    g.result = *(arrow + 1);
    std::vector<std::string> lhs(w.begin() + 1, arrow);
    auto take_class = [&](const std::string& s) {
      std::string_view c(s);
      if (!c.empty() && c.front() == '!') {
        g.negated = true;
        c.remove_prefix(1);
      }
      if (c.size() < 2 || c.front() != '@') return false;
      g.char_class = std::string(c.substr(1));
      if (!p.classes_.count(g.char_class))
        throw Error(ErrorCode::FormatError, "graphemic: unknown class @" + g.char_class, no);
      return true;
    };
    if (w.front() == "elide") {
      g.kind = GraphemicRule::Elide;
      if (lhs.size() != 2 || !take_class(lhs[1]))
        throw Error(ErrorCode::FormatError, "graphemic: expected elide WORD @CLASS => result", no);
      g.first = lhs[0];
    } else if (w.front() == "contract") {
      g.kind = GraphemicRule::Contract;
      if (lhs.size() < 2 || lhs.size() > 3 || (lhs.size() == 3 && !take_class(lhs[2])))
        throw Error(ErrorCode::FormatError, "graphemic: expected contract W1 W2 [@CLASS] => result", no);
      g.first = lhs[0];
      g.second = lhs[1];
    } else {
      throw Error(ErrorCode::FormatError, "graphemic: unknown rule kind " + w.front(), no);
    }
    p.graphemic_.push_back(std::move(g));
  }
  return p;
}

MorphPack MorphPack::load(const std::filesystem::path& dir) {
  return parse(text::read_file((dir / "rules.tsv").string()),
               text::read_file((dir / "affixes.tsv").string()),
               text::read_file((dir / "graphemic.rules").string()));
}

bool MorphPack::in_class(const std::string& cls, std::string_view token) const {
  auto it = classes_.find(cls);
  if (it == classes_.end()) return false;
  const std::string c = first_char(token);
  return std::find(it->second.begin(), it->second.end(), c) != it->second.end();
}

std::string MorphPack::realize(const Decoration& leaf) const {
  for (const MorphRule& r : rules_) {
    const bool ok = std::all_of(r.conditions.begin(), r.conditions.end(), [&](const MorphCondition& c) {
      if (c.values.empty()) return !leaf.assigned(c.var);
      return std::any_of(c.values.begin(), c.values.end(),
                         [&](const std::string& v) { return leaf.holds(c.var, v); });
    });
    if (!ok) continue;
    const auto stem = leaf.get(r.stem == "lemma" ? "LEMMA" : r.stem);
    if (!stem) continue;
    std::string form = *stem;
    bool applies = true;
    for (const MorphOp& op : r.ops) {
      switch (op.kind) {
        case MorphOp::Strip:
        case MorphOp::Subst:
          if (!text::ends_with(form, op.arg)) {
            applies = false;
            break;
          }
          form.erase(form.size() - op.arg.size());
          if (op.kind == MorphOp::Subst) form += affixes_.at(op.affix);
          break;
        case MorphOp::Add: form += affixes_.at(op.arg); break;
        case MorphOp::Prefix: form = affixes_.at(op.arg) + form; break;
      }
      if (!applies) break;
    }
    if (applies) return form;
  }
  throw Error(ErrorCode::NoMatchingMorphRule, "no morph rule realizes {" + leaf.text() + "}");
}

std::string SurfaceText::render(bool marks) const {
  std::string out;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const SurfaceToken& t = tokens[k];
    if (k > 0 && !tokens[k - 1].glue) out += ' ';
    out += t.text;
    if (marks && t.mark > 0) out += "&" + std::to_string(t.mark) + "_";
  }
  return out;
}

std::string strip_marks(std::string_view s) {
  static const std::regex mark("&[0-9]+_");
  return std::regex_replace(std::string(s), mark, "");
}

std::string capitalize_first(std::string_view s) {
  std::string out(s);
  if (out.empty()) return out;
  const auto c0 = static_cast<unsigned char>(out[0]);
  if (c0 < 0x80) {
    out[0] = static_cast<char>(std::toupper(c0));
  } else if (c0 == 0xC3 && out.size() > 1) {
    const auto c1 = static_cast<unsigned char>(out[1]);
    // U+00E0..U+00FE map to U+00C0..U+00DE, except the division sign.
    if (c1 >= 0xA0 && c1 <= 0xBE && c1 != 0xB7) out[1] = static_cast<char>(c1 - 0x20);
  }
  return out;
}

SurfaceText generate(const TreeNode& umc, const MorphPack& pack) {
  SurfaceText s;
  for (const TreeNode* leaf : leaves(umc)) {
    if (!leaf->deco.assigned("LEMMA")) continue;
    s.tokens.push_back({pack.realize(leaf->deco), leaf->umc, false});
  }

  // One left-to-right pass; at most one rule fires per position.
  auto& t = s.tokens;
  for (std::size_t k = 0; k < t.size(); ++k) {
    for (const GraphemicRule& g : pack.graphemic()) {
      if (t[k].text != g.first) continue;
      if (g.kind == GraphemicRule::Elide) {
        if (k + 1 >= t.size() || pack.in_class(g.char_class, t[k + 1].text) == g.negated) continue;
        t[k].text = g.result;
        t[k].glue = true;
        break;
      }
      if (k + 1 >= t.size() || t[k + 1].text != g.second) continue;
      if (!g.char_class.empty()) {
        const bool next_in = k + 2 < t.size() && pack.in_class(g.char_class, t[k + 2].text);
        if (next_in == g.negated) continue;
      }
      t[k].text = g.result;
      t[k].glue = t[k + 1].glue;
      t.erase(t.begin() + static_cast<std::ptrdiff_t>(k) + 1);
      break;
    }
  }

  if (!t.empty()) {
    t.front().text = capitalize_first(t.front().text);
    t.back().glue = true;
    t.push_back({".", 0, false});
  }
  return s;
}

}  // namespace deconv
