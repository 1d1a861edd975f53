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

#include "deconv/session.hpp"

#include "deconv/error.hpp"
#include "json_io.hpp"

namespace deconv {

Session::Session(const Lingware& lingware, const std::filesystem::path& counts_path)
    : lw_(lingware),
      owned_counts_(counts_path.empty() ? std::make_unique<CountStore>()
                                        : std::make_unique<CountStore>(counts_path)),
      counts_(owned_counts_.get()),
      dc_(lingware, *counts_) {}

Session::Session(const Lingware& lingware, CountStore& shared_counts)
    : lw_(lingware), counts_(&shared_counts), dc_(lingware, shared_counts) {}

std::size_t Session::add(const UnlDocument& doc, std::uint64_t seed) {
  std::unique_lock lock(mu_);
  const std::size_t first = slots_.size();
  for (const Utterance& u : doc.utterances) {
    auto s = std::make_unique<Slot>();
    s->state = dc_.start(u, "u" + std::to_string(slots_.size() + 1), seed);
    slots_.push_back(std::move(s));
  }
  return first;
}

std::size_t Session::size() const {
  std::shared_lock lock(mu_);
  return slots_.size();
}

Session::Slot& Session::slot(std::size_t u) const {
  std::shared_lock lock(mu_);
  if (u >= slots_.size())
    throw Error(ErrorCode::UnknownUtterance, "no utterance " + std::to_string(u + 1));
  return *slots_[u];
}

UtteranceState Session::snapshot(std::size_t u) const {
  Slot& s = slot(u);
  std::lock_guard lock(s.mu);
  return s.state;
}

void Session::run(std::size_t u, const RunOptions& options) {
  Slot& s = slot(u);
  std::lock_guard lock(s.mu);
  dc_.run(s.state, options);
}

void Session::run_all(const RunOptions& options) {
  for (std::size_t u = 0, n = size(); u < n; ++u) run(u, options);
}

std::uint64_t Session::edit(std::size_t u, const Edit& e, std::optional<std::uint64_t> expected_version) {
  Slot& s = slot(u);
  std::unique_lock lock(s.mu, std::try_to_lock);
  if (!lock.owns_lock())
    throw Error(ErrorCode::Conflict, "utterance " + std::to_string(u + 1) + " is being edited");
  if (expected_version && *expected_version != s.state.version)
    throw Error(ErrorCode::Conflict, "utterance " + std::to_string(u + 1) + " is at version " +
                                         std::to_string(s.state.version));
  dc_.edit_and_redeconvert(s.state, e, policy(), every_k());
  return s.state.version;
}

std::vector<CandidateLu> Session::candidates(std::size_t u, NodeId node, bool widen) const {
  Slot& s = slot(u);
  std::lock_guard lock(s.mu);
  return dc_.candidates(s.state, node, widen);
}

std::vector<TraceLink> Session::trace(std::size_t u, std::size_t token) const {
  Slot& s = slot(u);
  std::lock_guard lock(s.mu);
  return dc_.resolve_trace(s.state, token);
}

std::vector<std::size_t> Session::redeconvert() {
  std::vector<std::size_t> done;
  for (std::size_t u = 0, n = size(); u < n; ++u) {
    Slot& s = slot(u);
    std::lock_guard lock(s.mu);
    if (s.state.complete() && !s.state.dirty_from) continue;
    if (s.state.validated_run && !s.state.report.ok) continue;
    dc_.run(s.state);
    done.push_back(u);
  }
  return done;
}

ReplaceResult Session::replace(const std::string& from, const std::string& to) {
  // Takes every utterance lock, in index order.
  std::shared_lock lock(mu_);
  std::vector<std::unique_lock<std::mutex>> locks;
  std::vector<UtteranceState> states;
  for (auto& s : slots_) {
    locks.emplace_back(s->mu);
    states.push_back(std::move(s->state));
  }
  ReplaceResult r;
  try {
    r = global_replace(dc_, states, from, to);
  } catch (...) {
    for (std::size_t u = 0; u < slots_.size(); ++u) slots_[u]->state = std::move(states[u]);
    throw;
  }
  for (std::size_t u = 0; u < slots_.size(); ++u) slots_[u]->state = std::move(states[u]);
  return r;
}

UnlDocument Session::export_document() const {
  UnlDocument doc;
  for (std::size_t u = 0, n = size(); u < n; ++u) {
    Slot& s = slot(u);
    std::lock_guard lock(s.mu);
    doc.utterances.push_back(dc_.enriched(s.state));
  }
  return doc;
}

void Session::set_policy(Policy policy, std::size_t every_k) {
  if (policy == Policy::EveryK && every_k == 0)
    throw Error(ErrorCode::InvalidArgument, "every-k needs k >= 1");
  std::unique_lock lock(mu_);
  policy_ = policy;
  every_k_ = every_k == 0 ? 1 : every_k;
}

Policy Session::policy() const {
  std::shared_lock lock(mu_);
  return policy_;
}

std::size_t Session::every_k() const {
  std::shared_lock lock(mu_);
  return every_k_;
}

void Session::save(const std::filesystem::path& path) const {
  std::vector<std::string> records;
  {
    std::shared_lock lock(mu_);
    records.push_back(json{{"format", 1},
                           {"policy", policy_name(policy_)},
                           {"k", every_k_},
                           {"profile", lw_.profile.name},
                           {"utterances", slots_.size()}}
                          .dump());
    for (const auto& s : slots_) {
      std::lock_guard l(s->mu);
      records.push_back(state_to_json(s->state));
    }
  }
  write_records(path, records);
}

void Session::load(const std::filesystem::path& path) {
  const auto records = read_records(path);
  if (records.empty()) throw Error(ErrorCode::StorageError, path.string() + ": no header record");
  json header;
  try {
    header = json::parse(records.front());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::StorageError, path.string() + ": bad header: " + e.what());
  }
  if (header.value("format", 0) != 1)
    throw Error(ErrorCode::StorageError, path.string() + ": unsupported session format");
  const auto policy = parse_policy(header.value("policy", std::string("always")));
  if (!policy) throw Error(ErrorCode::StorageError, path.string() + ": unknown policy");
  std::vector<std::unique_ptr<Slot>> slots;
  for (std::size_t k = 1; k < records.size(); ++k) {
    auto s = std::make_unique<Slot>();
    s->state = state_from_json(records[k]);
    slots.push_back(std::move(s));
  }
  std::unique_lock lock(mu_);
  slots_ = std::move(slots);
  policy_ = *policy;
  every_k_ = header.value("k", std::size_t{1});
}

}  // namespace deconv
