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

// A postedition session: a document's utterance states, the association
// counts of one profile and the re-deconversion policy. Utterances carry
// their own lock so edits on different utterances proceed concurrently.

#include <filesystem>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "deconv/pipeline.hpp"

namespace deconv {

class Session {
 public:
  // `counts_path` empty keeps the counts in memory.
  Session(const Lingware& lingware, const std::filesystem::path& counts_path);
  // Shares a count store owned elsewhere (one per profile in the service).
  Session(const Lingware& lingware, CountStore& shared_counts);

  // Appends the utterances of `doc`; returns the index of the first one.
  std::size_t add(const UnlDocument& doc, std::uint64_t seed);
  std::size_t size() const;

  // Copies of a state, safe against concurrent edits.
  UtteranceState snapshot(std::size_t u) const;

  // Runs the missing stages of one utterance (or all when u == npos).
  // Validation failures leave the state unrendered; phase errors throw.
  void run(std::size_t u, const RunOptions& options = {});
  void run_all(const RunOptions& options = {});

  // Applies an edit under the current policy. `expected_version`, when set,
  // must equal the state's version or Conflict is thrown. Throws Conflict as
  // well when another edit on the same utterance is in progress.
  std::uint64_t edit(std::size_t u, const Edit& edit,
                     std::optional<std::uint64_t> expected_version = std::nullopt);

  std::vector<CandidateLu> candidates(std::size_t u, NodeId node, bool widen) const;
  std::vector<TraceLink> trace(std::size_t u, std::size_t token) const;

  // Re-deconverts every utterance with pending edits.
  std::vector<std::size_t> redeconvert();
  ReplaceResult replace(const std::string& from, const std::string& to);
  UnlDocument export_document() const;

  void set_policy(Policy policy, std::size_t every_k);
  Policy policy() const;
  std::size_t every_k() const;

  // Record file: one header record then one record per utterance.
  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);

  CountStore& counts() { return *counts_; }
  const Deconverter& deconverter() const { return dc_; }

 private:
  struct Slot {
    UtteranceState state;
    mutable std::mutex mu;
  };
  Slot& slot(std::size_t u) const;

  const Lingware& lw_;
  std::unique_ptr<CountStore> owned_counts_;
  CountStore* counts_;
  Deconverter dc_;
  mutable std::shared_mutex mu_;  // guards the slot vector
  std::vector<std::unique_ptr<Slot>> slots_;
  Policy policy_ = Policy::Always;
  std::size_t every_k_ = 1;
};

}  // namespace deconv
