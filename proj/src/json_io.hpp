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

// nlohmann::json conversions for every cached structure. Object keys are
// sorted on output, so dumps are stable byte for byte.

#include <json.hpp>

#include "deconv/pipeline.hpp"

namespace deconv {

using json = nlohmann::json;

void to_json(json& j, const UW& uw);
void from_json(const json& j, UW& uw);
void to_json(json& j, const UnlNode& n);
void from_json(const json& j, UnlNode& n);
void to_json(json& j, const UnlArc& a);
void from_json(const json& j, UnlArc& a);
void to_json(json& j, const UnlGraph& g);
void from_json(const json& j, UnlGraph& g);
void to_json(json& j, const Utterance& u);
void from_json(const json& j, Utterance& u);

void to_json(json& j, const Issue& i);
void from_json(const json& j, Issue& i);
void to_json(json& j, const ValidationReport& r);
void from_json(const json& j, ValidationReport& r);

void to_json(json& j, const UwCandidate& c);
void from_json(const json& j, UwCandidate& c);
void to_json(json& j, const LocalizationChoice& c);
void from_json(const json& j, LocalizationChoice& c);
void to_json(json& j, const LuCandidate& c);
void from_json(const json& j, LuCandidate& c);
void to_json(json& j, const TransferChoice& c);
void from_json(const json& j, TransferChoice& c);
void to_json(json& j, const LexEntry& e);
void from_json(const json& j, LexEntry& e);
void to_json(json& j, const TransferredNode& n);
void from_json(const json& j, TransferredNode& n);
void to_json(json& j, const TransferredGraph& g);
void from_json(const json& j, TransferredGraph& g);

void to_json(json& j, const GTNode& n);
void from_json(const json& j, GTNode& n);
void to_json(json& j, const GTResult& r);
void from_json(const json& j, GTResult& r);

void to_json(json& j, const Decoration& d);
void from_json(const json& j, Decoration& d);
void to_json(json& j, const TreeNode& n);
void from_json(const json& j, TreeNode& n);

void to_json(json& j, const SurfaceToken& t);
void from_json(const json& j, SurfaceToken& t);
void to_json(json& j, const SurfaceText& s);
void from_json(const json& j, SurfaceText& s);

void to_json(json& j, const Edits& e);
void from_json(const json& j, Edits& e);
void to_json(json& j, const TraceLink& l);
void to_json(json& j, const CandidateLu& c);

json stage_value(const UtteranceState& state, Stage stage);

}  // namespace deconv
