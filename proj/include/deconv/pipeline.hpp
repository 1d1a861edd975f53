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

// Stage orchestration: validate, localize (lexical then cultural), transfer,
// graph-to-tree, TS, GS1, GS2, morphological generation. Every stage is
// cached in an UtteranceState, edits invalidate from their stage onward and
// re-deconversion recomputes only the missing stages.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deconv/graph2tree.hpp"
#include "deconv/lexicon.hpp"
#include "deconv/localizer.hpp"
#include "deconv/morph.hpp"
#include "deconv/rewrite.hpp"
#include "deconv/schema.hpp"
#include "deconv/transfer.hpp"
#include "deconv/tree.hpp"
#include "deconv/unl.hpp"
#include "deconv/validator.hpp"

namespace deconv {

struct LingwarePaths {
  std::filesystem::path dict;
  std::filesystem::path lus;
  std::filesystem::path schema;
  std::filesystem::path ts;
  std::filesystem::path gs1;
  std::filesystem::path gs2;
  std::filesystem::path morph;  // directory
  std::filesystem::path profile;
  std::string profile_name;     // first profile of the file when empty
  std::filesystem::path inventory;
  std::filesystem::path incompat;  // optional
  std::filesystem::path tvars;     // optional

  // Conventional layout of a lingware directory (dict.tsv, lus.tsv, ...).
  static LingwarePaths from_dir(const std::filesystem::path& dir);
  // Fills empty inventory/incompat/tvars paths with files next to `dict`.
  void fill_defaults();
};

struct Lingware {
  Inventory inventory;
  Lexicon lexicon;
  Schema schema;
  Grammar ts;
  Grammar gs1;
  Grammar gs2;
  MorphPack morph;
  Profile profile;
  PseudoDistance distance;
  IncompatibilityTable incompat;
  TransferVarTable tvars;

  // Errors are annotated with the phase "lingware" and the offending file.
  static Lingware load(const LingwarePaths& paths);
};

enum class Stage { Validated, Localized, Transferred, TransferTree, Gma, Uma, Umc, Surface };
constexpr int kStageCount = 8;
const char* stage_name(Stage stage);
std::optional<Stage> parse_stage(std::string_view name);

enum class Policy { Always, EveryK, OnDemand };
const char* policy_name(Policy policy);
std::optional<Policy> parse_policy(std::string_view name);

enum class AttributeLevel { Interlingual, Style };

// Posteditor decisions, replayed whenever their stage is recomputed.
struct Edits {
  std::map<NodeId, std::string> uw_overrides;   // localized stage
  std::map<NodeId, std::string> lu_overrides;   // transferred stage
  std::map<NodeId, std::map<std::string, bool>> attributes;  // localized stage, attr -> present
  std::map<NodeId, std::map<std::string, std::string>> style;  // GMA stage, var -> value
  bool empty() const;
  bool operator==(const Edits&) const = default;
};

struct UtteranceState {
  std::string id;
  Utterance source;
  std::uint64_t seed = 0;
  ValidationReport report;
  bool validated_run = false;

  std::optional<UnlGraph> validated;
  std::optional<UnlGraph> localized;
  std::vector<LocalizationChoice> localization_choices;
  std::optional<TransferredGraph> transferred;
  std::vector<TransferChoice> transfer_choices;
  std::optional<GTResult> gt;
  std::optional<TreeNode> transfer_tree;
  std::optional<TreeNode> gma;
  std::optional<TreeNode> uma;
  std::optional<TreeNode> umc;
  std::optional<SurfaceText> surface;

  Edits edits;
  std::optional<Stage> dirty_from;
  std::size_t pending_edits = 0;
  std::uint64_t version = 0;

  bool has(Stage stage) const;
  bool complete() const { return has(Stage::Surface); }
  // Drops `stage` and every later stage.
  void invalidate(Stage stage);
  std::string rendering(bool marks) const;
};

struct TraceLink {
  std::string stage;  // umc, uma, gma, transfer, unl
  int node = 0;       // umc index, preorder index (1-based), tree id, or n
  bool operator==(const TraceLink&) const = default;
};

struct CandidateLu {
  std::string uw;
  std::string lu;
  double score = 0;
  double distance = 0;  // pseudo-distance of `uw` to the original UW
  bool operator==(const CandidateLu&) const = default;
};

struct Edit {
  enum Kind { ChooseLu, SetAttribute } kind = ChooseLu;
  NodeId node = 0;
  std::string lu;   // ChooseLu
  std::string uw;   // ChooseLu, optional target UW of D
  std::string name;   // SetAttribute
  std::string value;  // SetAttribute
  AttributeLevel level = AttributeLevel::Interlingual;
};

struct ReplaceResult {
  std::vector<std::size_t> changed;                    // utterance positions
  std::vector<std::pair<std::size_t, NodeId>> skipped;  // LuNotCandidate
};

struct RunOptions {
  const UwChooser* uw_chooser = nullptr;
  const LuChooser* lu_chooser = nullptr;
  std::optional<Stage> until;  // stop after this stage
};

class Deconverter {
 public:
  Deconverter(const Lingware& lingware, CountStore& counts) : lw_(lingware), counts_(counts) {}

  UtteranceState start(const Utterance& utterance, std::string id, std::uint64_t seed) const;
  // Computes every missing stage. Stops without throwing when validation
  // fails; later phase errors are thrown annotated with the phase name.
  void run(UtteranceState& state, const RunOptions& options = {}) const;
  UtteranceState deconvert(const Utterance& utterance, std::uint64_t seed,
                           const RunOptions& options = {}) const;

  // Token position -> umc, uma, gma, transfer-tree and UNL node. Punctuation
  // yields an empty chain. Throws UnknownNode for positions out of range.
  std::vector<TraceLink> resolve_trace(const UtteranceState& state, std::size_t token) const;

  // Records an edit at its stage and invalidates the later stages; nothing is
  // recomputed here. choose-lu increments the association counts.
  void apply_edit(UtteranceState& state, const Edit& edit) const;
  // apply_edit followed by the policy's re-deconversion decision.
  void edit_and_redeconvert(UtteranceState& state, const Edit& edit, Policy policy,
                            std::size_t every_k = 1) const;

  // LUs for the node's localized UW, or with widen the union of the LUs of
  // every UW of D within the widening radius of the original UW.
  std::vector<CandidateLu> candidates(const UtteranceState& state, NodeId node, bool widen) const;

  // Utterance source plus posteditor-added interlingual attributes, with a
  // revision comment when there are any.
  Utterance enriched(const UtteranceState& state) const;

  const Lingware& lingware() const { return lw_; }
  CountStore& counts() const { return counts_; }

 private:
  void compute(UtteranceState& state, Stage stage, const RunOptions& options) const;
  void ensure_localized(UtteranceState& state) const;
  TreeNode build_tree(const GTResult& gt, const TransferredGraph& g) const;
  void expand(TreeNode& node) const;

  const Lingware& lw_;
  CountStore& counts_;
};

// Re-chooses `to` wherever `from` was chosen and `to` is a candidate, then
// re-deconverts the changed utterances.
ReplaceResult global_replace(const Deconverter& dc, std::vector<UtteranceState>& states,
                             const std::string& from, const std::string& to);

// Serialized stage, for caching and byte comparison; empty when absent.
std::string stage_json(const UtteranceState& state, Stage stage);
std::string state_to_json(const UtteranceState& state);
UtteranceState state_from_json(const std::string& json);

// Length-prefixed record files: `<bytes>\n<payload>\n` per record.
void write_records(const std::filesystem::path& path, const std::vector<std::string>& records);
std::vector<std::string> read_records(const std::filesystem::path& path);

}  // namespace deconv
