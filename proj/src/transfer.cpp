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

#include "deconv/transfer.hpp"

#include "deconv/error.hpp"
#include "text_util.hpp"

namespace deconv {

TransferVarTable TransferVarTable::parse(std::string_view content) {
  TransferVarTable t;
  int no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto cols = text::split(line, '\t');
    if (cols.size() != 2) throw Error(ErrorCode::FormatError, "expected restriction<TAB>VAR=VALUE", no);
    const auto assign = text::trim(cols[1]);
    const auto eq = assign.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::FormatError, "expected VAR=VALUE", no);
    // Normalize the restriction through the UW parser.
    Restriction r;
    try {
      r = parse_uw("x(" + std::string(text::trim(cols[0])) + ")").restrictions.at(0);
    } catch (const Error& e) {
      throw Error(ErrorCode::FormatError, e.detail(), no);
    }
    t.rows_.push_back({r.text(),
                       {std::string(text::trim(assign.substr(0, eq))),
                        std::string(text::trim(assign.substr(eq + 1)))}});
  }
  return t;
}

TransferVarTable TransferVarTable::load(const std::filesystem::path& path) {
  return parse(text::read_file(path.string()));
}

std::map<std::string, std::string> TransferVarTable::vars_for(const UW& uw) const {
  std::map<std::string, std::string> out;
  for (const auto& [restriction, assign] : rows_) {
    for (const auto& r : uw.restrictions) {
      if (r.text() == restriction) out.emplace(assign.first, assign.second);
    }
  }
  return out;
}

TransferResult transfer_lexically(const UnlGraph& localized, const Lexicon& lexicon,
                                  const Profile& profile, const CountStore& counts,
                                  const TransferVarTable& table, const TransferOptions& options) {
  TransferResult result;
  result.graph.graph = localized;
  for (const UnlNode& node : localized.nodes) {
    if (node.is_hypernode()) continue;
    TransferredNode t;
    t.node = node.id;
    t.uw_text = node.uw.text();
    t.attributes = node.attributes;
    t.defaulted = node.defaulted;
    t.vars = table.vars_for(node.uw);

    std::vector<ScoredEntry> scored;
    try {
      scored = lexicon.lookup_lus(t.uw_text, profile, counts);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotInDictionary) throw;
    }

    TransferChoice choice;
    choice.node = node.id;
    choice.uw = t.uw_text;
    for (const auto& s : scored) choice.alternatives.push_back({s.entry->lu, s.score});

    const std::string* forced = nullptr;
    if (options.overrides) {
      if (auto it = options.overrides->find(node.id); it != options.overrides->end())
        forced = &it->second;
    }

    if (forced) {
      choice.chosen = *forced;
      choice.mode = ChoiceMode::Override;
      t.lu = *forced;
      for (const auto& s : scored)
        if (s.entry->lu == *forced) t.entry = *s.entry;
      if (t.entry) {
        t.vars["CAT"] = t.entry->pos;
      } else if (const LexicalUnit* unit = lexicon.units().find(*forced)) {
        t.vars["CAT"] = unit->derivations.front().category;
      } else if (!scored.empty()) {
        t.vars["CAT"] = scored.front().entry->pos;
      } else {
        t.vars["CAT"] = "N";
      }
    } else if (scored.empty()) {
      t.untranslated = true;
      t.lu = node.uw.headword;
      t.vars["CAT"] = "N";
      choice.chosen = t.lu;
    } else {
      std::size_t pick = 0;
      if (options.chooser && scored.size() > 1) {
        pick = (*options.chooser)(choice);
        if (pick >= scored.size())
          throw Error(ErrorCode::InvalidArgument, "chooser returned an out-of-range LU");
        choice.mode = ChoiceMode::Interactive;
      } else {
        std::size_t ties = 1;
        while (ties < scored.size() && scored[ties].score >= scored.front().score - 1e-9) ++ties;
        pick = seeded_pick(options.seed, 2, node.id, ties);
      }
      t.entry = *scored[pick].entry;
      t.lu = t.entry->lu;
      t.vars["CAT"] = t.entry->pos;
      choice.chosen = t.lu;
    }
    result.graph.nodes.emplace(node.id, std::move(t));
    result.choices.push_back(std::move(choice));
  }
  return result;
}

}  // namespace deconv
