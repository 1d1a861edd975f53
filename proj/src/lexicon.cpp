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

#include "deconv/lexicon.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "deconv/error.hpp"
#include "text_util.hpp"

namespace deconv {

namespace {

double parse_number(std::string_view s, int line, const char* what) {
  const std::string t(text::trim(s));
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
    throw Error(ErrorCode::FormatError, std::string("bad ") + what + " '" + t + "'", line);
  return v;
}

// Iterates non-blank, non-comment lines with their 1-based numbers.
template <typename F>
void for_each_line(std::string_view content, F&& f) {
  int no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++no;
    std::string line = raw;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    f(no, line);
  }
}

std::map<std::string, std::string> parse_vars(std::string_view s, int line) {
  std::map<std::string, std::string> vars;
  for (const auto& item : text::split(s, ',')) {
    const auto t = text::trim(item);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorCode::FormatError, "expected VAR=VALUE, got '" + std::string(t) + "'", line);
    vars[std::string(text::trim(t.substr(0, eq)))] = std::string(text::trim(t.substr(eq + 1)));
  }
  return vars;
}

}  // namespace

// ---------------------------------------------------------------------------

Dictionary Dictionary::parse(std::string_view content, std::string id) {
  Dictionary d;
  d.id_ = std::move(id);
  std::set<std::pair<std::string, std::string>> seen;
  for_each_line(content, [&](int no, const std::string& line) {
    auto cols = text::split(line, '\t');
    if (cols.size() != 5)
      throw Error(ErrorCode::FormatError,
                  "expected 5 tab-separated columns (uw, lu, pos, domain, weight), got " +
                      std::to_string(cols.size()),
                  no);
    LexEntry e;
    try {
      e.uw = parse_uw(cols[0]);
    } catch (const Error& err) {
      throw Error(ErrorCode::FormatError, err.detail(), no);
    }
    e.uw_text = e.uw.text();
    e.lu = std::string(text::trim(cols[1]));
    e.pos = std::string(text::trim(cols[2]));
    e.domain = std::string(text::trim(cols[3]));
    if (e.domain == "-") e.domain.clear();
    e.weight = parse_number(cols[4], no, "weight");
    e.dictionary = d.id_;
    e.line = no;
    if (e.lu.empty() || e.pos.empty()) throw Error(ErrorCode::FormatError, "empty lu or pos", no);
    if (e.weight < 0) throw Error(ErrorCode::FormatError, "negative weight", no);
    if (!seen.emplace(e.uw_text, e.lu).second)
      throw Error(ErrorCode::DuplicateEntry, "duplicate entry (" + e.uw_text + ", " + e.lu + ")", no);
    d.index_[e.uw_text].push_back(d.entries_.size());
    d.entries_.push_back(std::move(e));
  });
  return d;
}

Dictionary Dictionary::load(const std::filesystem::path& path, std::string id) {
  if (id.empty()) id = path.stem().string();
  return parse(text::read_file(path.string()), std::move(id));
}

bool Dictionary::contains(std::string_view uw_text) const {
  return index_.find(uw_text) != index_.end();
}

std::vector<const LexEntry*> Dictionary::find(std::string_view uw_text) const {
  std::vector<const LexEntry*> out;
  if (auto it = index_.find(uw_text); it != index_.end())
    for (std::size_t i : it->second) out.push_back(&entries_[i]);
  return out;
}

// ---------------------------------------------------------------------------

const Derivation* LexicalUnit::find(std::string_view name) const {
  for (const auto& d : derivations)
    if (d.name == name) return &d;
  return nullptr;
}

LuTable LuTable::parse(std::string_view content) {
  LuTable t;
  for_each_line(content, [&](int no, const std::string& line) {
    auto cols = text::split(line, '\t');
    if (cols.size() != 5 && cols.size() != 6)
      throw Error(ErrorCode::FormatError,
                  "expected 5 or 6 tab-separated columns (lu, derivation, lemma, category, "
                  "paradigm[, vars])",
                  no);
    for (auto& c : cols) c = std::string(text::trim(c));
    Derivation d{cols[1], cols[2], cols[3], cols[4], {}};
    if (cols.size() == 6) d.vars = parse_vars(cols[5], no);
    if (cols[0].empty() || d.name.empty() || d.lemma.empty() || d.category.empty() ||
        d.paradigm.empty())
      throw Error(ErrorCode::FormatError, "empty column", no);
    LexicalUnit& unit = t.units_[cols[0]];
    unit.lu = cols[0];
    if (unit.find(d.name))
      throw Error(ErrorCode::DuplicateEntry, "duplicate derivation " + d.name + " for " + cols[0], no);
    unit.derivations.push_back(std::move(d));
  });
  return t;
}

LuTable LuTable::load(const std::filesystem::path& path) {
  return parse(text::read_file(path.string()));
}

const LexicalUnit* LuTable::find(std::string_view lu) const {
  auto it = units_.find(lu);
  return it == units_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------

double Profile::setting_number(const std::string& key, double fallback) const {
  auto it = settings.find(key);
  if (it == settings.end()) return fallback;
  return parse_number(it->second, 0, key.c_str());
}

std::vector<Profile> parse_profiles(std::string_view content) {
  std::vector<Profile> profiles;
  std::set<std::string> names;
  for_each_line(content, [&](int no, const std::string& raw) {
    const std::string_view line = text::trim(raw);
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorCode::FormatError, "bad section header", no);
      const auto words = text::split_ws(line.substr(1, line.size() - 2));
      if (words.size() != 2 || words[0] != "profile")
        throw Error(ErrorCode::FormatError, "expected [profile NAME]", no);
      if (!names.insert(words[1]).second)
        throw Error(ErrorCode::FormatError, "duplicate profile '" + words[1] + "'", no);
      profiles.push_back(Profile{words[1], {}, {}, {}, {}});
      return;
    }
    if (profiles.empty()) throw Error(ErrorCode::FormatError, "setting outside a profile", no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::FormatError, "expected key = value", no);
    const std::string key(text::trim(line.substr(0, eq)));
    const std::string value(text::trim(line.substr(eq + 1)));
    Profile& p = profiles.back();
    if (key == "dictionaries") {
      std::string v = value;
      std::replace(v.begin(), v.end(), ',', ' ');
      p.dictionary_priorities = text::split_ws(v);
    } else if (text::starts_with(key, "boost.")) {
      p.domain_boosts[key.substr(6)] = parse_number(value, no, "boost");
    } else if (text::starts_with(key, "default.")) {
      const auto parts = text::split(key.substr(8), '.');
      if (parts.size() != 2 || parts[0].empty() || parts[1].empty())
        throw Error(ErrorCode::FormatError, "expected default.CATEGORY.CLASS", no);
      p.attribute_defaults[{parts[0], parts[1]}] = value;
    } else {
      p.settings[key] = value;
    }
  });
  return profiles;
}

std::vector<Profile> load_profiles(const std::filesystem::path& path) {
  return parse_profiles(text::read_file(path.string()));
}

// ---------------------------------------------------------------------------

const char* pair_kind_name(PairKind kind) {
  return kind == PairKind::UwToUw ? "uw2uw" : "uw2lu";
}

namespace {

void check_key(std::string_view s) {
  if (s.empty() || s.find_first_of("\t\n\r") != std::string_view::npos)
    throw Error(ErrorCode::StorageError, "count key must be non-empty without tabs or newlines");
}

}  // namespace

CountStore::CountStore(std::filesystem::path path) : path_(std::move(path)) {
  if (std::filesystem::exists(path_)) replay(path_, false);
  std::filesystem::path log = path_;
  log += ".log";
  if (std::filesystem::exists(log)) replay(log, true);
  open_log();
}

CountStore::~CountStore() {
  if (log_) std::fclose(log_);
}

void CountStore::open_log() {
  std::filesystem::path log = path_;
  log += ".log";
  log_ = std::fopen(log.c_str(), "a");
  if (!log_) throw Error(ErrorCode::StorageError, "cannot open count log '" + log.string() + "'");
}

void CountStore::replay(const std::filesystem::path& file, bool is_log) {
  const std::string content = text::read_file(file.string());
  int no = 0;
  for (const auto& raw : text::split(content, '\n')) {
    ++no;
    if (text::trim(raw).empty()) continue;
    const auto cols = text::split(raw, '\t');
    if (cols.size() != (is_log ? 3u : 4u)) {
      // A torn final log line is the in-flight increment lost by a crash.
      if (is_log) continue;
      throw Error(ErrorCode::StorageError, "bad count line in " + file.string(), no);
    }
    Map* m = cols[0] == "uw2uw" ? &uw2uw_ : cols[0] == "uw2lu" ? &uw2lu_ : nullptr;
    if (!m) throw Error(ErrorCode::StorageError, "bad count kind '" + cols[0] + "'", no);
    std::int64_t delta = 1;
    if (!is_log) {
      auto [ptr, ec] = std::from_chars(cols[3].data(), cols[3].data() + cols[3].size(), delta);
      if (ec != std::errc{} || delta < 0)
        throw Error(ErrorCode::StorageError, "bad count value '" + cols[3] + "'", no);
    }
    (*m)[{cols[1], cols[2]}] += delta;
  }
}

std::int64_t CountStore::increment(PairKind kind, std::string_view a, std::string_view b) {
  check_key(a);
  check_key(b);
  std::lock_guard lock(mu_);
  Map& m = kind == PairKind::UwToUw ? uw2uw_ : uw2lu_;
  if (log_) {
    const std::string line =
        std::string(pair_kind_name(kind)) + "\t" + std::string(a) + "\t" + std::string(b) + "\n";
    if (std::fputs(line.c_str(), log_) < 0 || std::fflush(log_) != 0 || ::fsync(fileno(log_)) != 0)
      throw Error(ErrorCode::StorageError, "cannot append to count log");
  }
  return ++m[{std::string(a), std::string(b)}];
}

std::int64_t CountStore::count(PairKind kind, std::string_view a, std::string_view b) const {
  std::lock_guard lock(mu_);
  const Map& m = kind == PairKind::UwToUw ? uw2uw_ : uw2lu_;
  auto it = m.find({std::string(a), std::string(b)});
  return it == m.end() ? 0 : it->second;
}

CountStore::Map CountStore::snapshot(PairKind kind) const {
  std::lock_guard lock(mu_);
  return kind == PairKind::UwToUw ? uw2uw_ : uw2lu_;
}

void CountStore::save(const std::filesystem::path& path) {
  std::lock_guard lock(mu_);
  const std::filesystem::path target = path.empty() ? path_ : path;
  if (target.empty()) throw Error(ErrorCode::StorageError, "in-memory count store has no path");
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::FILE* f = std::fopen(tmp.c_str(), "w");
    if (!f) throw Error(ErrorCode::StorageError, "cannot write '" + tmp.string() + "'");
    for (const auto& [kind, m] : {std::pair{PairKind::UwToUw, &uw2uw_}, std::pair{PairKind::UwToLu, &uw2lu_}}) {
      for (const auto& [key, n] : *m)
        std::fprintf(f, "%s\t%s\t%s\t%lld\n", pair_kind_name(kind), key.first.c_str(),
                     key.second.c_str(), static_cast<long long>(n));
    }
    const bool ok = std::fflush(f) == 0 && ::fsync(fileno(f)) == 0;
    std::fclose(f);
    if (!ok) throw Error(ErrorCode::StorageError, "cannot flush '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::StorageError, "cannot rename snapshot: " + ec.message());
  if (!path_.empty() && std::filesystem::equivalent(target, path_) && log_) {
    std::fclose(log_);
    std::filesystem::path log = path_;
    log += ".log";
    std::FILE* trunc = std::fopen(log.c_str(), "w");
    if (trunc) std::fclose(trunc);
    open_log();
  }
}

CountStore::Map CountStore::load_map(const std::filesystem::path& path, PairKind kind) {
  CountStore tmp;
  tmp.path_ = path;
  if (std::filesystem::exists(path)) tmp.replay(path, false);
  std::filesystem::path log = path;
  log += ".log";
  if (std::filesystem::exists(log)) tmp.replay(log, true);
  return tmp.snapshot(kind);
}

// ---------------------------------------------------------------------------

void Lexicon::add_dictionary(Dictionary dict) {
  dicts_.push_back(std::move(dict));
  std::map<std::string, UW> all;
  for (const auto& d : dicts_)
    for (const auto& e : d.entries()) all.emplace(e.uw_text, e.uw);
  uw_set_.clear();
  for (auto& [text, uw] : all) uw_set_.push_back(uw);
}

bool Lexicon::contains(std::string_view uw_text) const {
  return std::any_of(dicts_.begin(), dicts_.end(),
                     [&](const Dictionary& d) { return d.contains(uw_text); });
}

std::vector<const Dictionary*> Lexicon::ordered(const Profile& profile) const {
  std::vector<const Dictionary*> out;
  for (const auto& name : profile.dictionary_priorities)
    for (const auto& d : dicts_)
      if (d.id() == name) out.push_back(&d);
  for (const auto& d : dicts_)
    if (std::find(out.begin(), out.end(), &d) == out.end()) out.push_back(&d);
  return out;
}

std::vector<ScoredEntry> Lexicon::lookup_lus(const UW& uw, const Profile& profile,
                                             const CountStore& counts) const {
  return lookup_lus(uw.text(), profile, counts);
}

std::vector<ScoredEntry> Lexicon::lookup_lus(std::string_view uw_text, const Profile& profile,
                                             const CountStore& counts) const {
  std::vector<ScoredEntry> out;
  for (const Dictionary* d : ordered(profile)) {
    const auto entries = d->find(uw_text);
    if (entries.empty()) continue;
    for (const LexEntry* e : entries) {
      double score = e->weight;
      if (auto it = profile.domain_boosts.find(e->domain);
          !e->domain.empty() && it != profile.domain_boosts.end())
        score += it->second;
      score += static_cast<double>(counts.count(PairKind::UwToLu, e->uw_text, e->lu));
      out.push_back({e, score});
    }
    break;
  }
  if (out.empty())
    throw Error(ErrorCode::NotInDictionary, "UW '" + std::string(uw_text) + "' is not in the dictionary");
  std::stable_sort(out.begin(), out.end(),
                   [](const ScoredEntry& a, const ScoredEntry& b) { return a.score > b.score; });
  return out;
}

std::optional<std::string> Lexicon::category_of(std::string_view uw_text,
                                                const Profile& profile) const {
  for (const Dictionary* d : ordered(profile)) {
    const auto entries = d->find(uw_text);
    if (!entries.empty()) return entries.front()->pos;
  }
  return std::nullopt;
}

}  // namespace deconv
