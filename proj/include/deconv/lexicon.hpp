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

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "deconv/unl.hpp"

namespace deconv {

// One row of a target-language UW dictionary.
struct LexEntry {
  UW uw;
  std::string uw_text;  // normalized uw.text()
  std::string lu;
  std::string pos;      // head category of the derivational family
  std::string domain;   // empty when unspecified
  double weight = 1.0;
  std::string dictionary;
  int line = 0;
};

// A UW -> LU dictionary file (TSV: uw, lu, pos, domain, weight).
class Dictionary {
 public:
  static Dictionary parse(std::string_view content, std::string id);
  static Dictionary load(const std::filesystem::path& path, std::string id = {});

  const std::string& id() const { return id_; }
  const std::vector<LexEntry>& entries() const { return entries_; }
  bool contains(std::string_view uw_text) const;
  // Entries for a UW in file order.
  std::vector<const LexEntry*> find(std::string_view uw_text) const;

 private:
  std::string id_;
  std::vector<LexEntry> entries_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> index_;
};

struct Derivation {
  std::string name;      // VB, NM, AJ, ...
  std::string lemma;
  std::string category;
  std::string paradigm;  // morph paradigm id
  std::map<std::string, std::string> vars;  // extra decoration, e.g. GNR=FEM
};

struct LexicalUnit {
  std::string lu;
  std::vector<Derivation> derivations;  // file order; the first is the default

  const Derivation* find(std::string_view name) const;
};

// Derivation tables (TSV: lu, derivation, lemma, category, paradigm[, vars]).
class LuTable {
 public:
  static LuTable parse(std::string_view content);
  static LuTable load(const std::filesystem::path& path);

  const LexicalUnit* find(std::string_view lu) const;
  const std::map<std::string, LexicalUnit, std::less<>>& units() const { return units_; }

 private:
  std::map<std::string, LexicalUnit, std::less<>> units_;
};

struct Profile {
  std::string name;
  std::vector<std::string> dictionary_priorities;
  std::map<std::string, double> domain_boosts;
  // (category, attribute class) -> default attribute, e.g. (N, number) -> sg
  std::map<std::pair<std::string, std::string>, std::string> attribute_defaults;
  // Remaining keys (distance.*, counts, ...) for other modules.
  std::map<std::string, std::string> settings;

  double setting_number(const std::string& key, double fallback) const;
};

// Profile config: `[profile NAME]` sections of `key = value` lines.
std::vector<Profile> parse_profiles(std::string_view content);
std::vector<Profile> load_profiles(const std::filesystem::path& path);

enum class PairKind { UwToUw, UwToLu };
const char* pair_kind_name(PairKind kind);

// Association counts on (UW, UW) and (UW, LU) pairs. Increments are
// serialized and appended to a log before returning; save() compacts the log
// into a snapshot. Readers take the same lock and see a consistent state.
class CountStore {
 public:
  CountStore() = default;
  // Opens (or creates) a persistent store: `path` holds the snapshot,
  // `path.log` the pending increments.
  explicit CountStore(std::filesystem::path path);
  ~CountStore();
  CountStore(const CountStore&) = delete;
  CountStore& operator=(const CountStore&) = delete;

  std::int64_t increment(PairKind kind, std::string_view a, std::string_view b);
  std::int64_t count(PairKind kind, std::string_view a, std::string_view b) const;

  using Map = std::map<std::pair<std::string, std::string>, std::int64_t>;
  Map snapshot(PairKind kind) const;

  // Writes a compacted snapshot to `path` (defaults to the store's own path)
  // and truncates the log when saving in place.
  void save(const std::filesystem::path& path = {});
  // Loads snapshot plus log from disk into a fresh in-memory store.
  static Map load_map(const std::filesystem::path& path, PairKind kind);

  const std::filesystem::path& path() const { return path_; }

 private:
  void replay(const std::filesystem::path& file, bool is_log);
  void open_log();

  mutable std::mutex mu_;
  Map uw2uw_;
  Map uw2lu_;
  std::filesystem::path path_;
  std::FILE* log_ = nullptr;
};

struct ScoredEntry {
  const LexEntry* entry = nullptr;
  double score = 0;
};

// The set D of target UWs (union of all loaded dictionaries) plus LU
// derivation tables.
class Lexicon {
 public:
  void add_dictionary(Dictionary dict);
  void set_units(LuTable units) { units_ = std::move(units); }

  const std::vector<Dictionary>& dictionaries() const { return dicts_; }
  const LuTable& units() const { return units_; }

  bool contains(std::string_view uw_text) const;
  // All UWs of D, sorted by text.
  const std::vector<UW>& uw_set() const { return uw_set_; }

  // Candidate LUs for a UW of D scored as base weight + domain boost + count.
  // Only the highest-priority dictionary (per profile) that knows the UW is
  // consulted. Sorted by descending score, ties in dictionary order.
  // Throws Error(NotInDictionary) when the UW is not in D.
  std::vector<ScoredEntry> lookup_lus(const UW& uw, const Profile& profile,
                                      const CountStore& counts) const;
  std::vector<ScoredEntry> lookup_lus(std::string_view uw_text, const Profile& profile,
                                      const CountStore& counts) const;

  // Head category of a UW: pos of its first entry in priority order.
  std::optional<std::string> category_of(std::string_view uw_text, const Profile& profile) const;

 private:
  std::vector<const Dictionary*> ordered(const Profile& profile) const;

  std::vector<Dictionary> dicts_;
  LuTable units_;
  std::vector<UW> uw_set_;
};

}  // namespace deconv
