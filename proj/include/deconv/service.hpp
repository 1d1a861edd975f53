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

// HTTP/JSON postedition service. Endpoints (all bodies JSON):
//
//   POST /sessions                                    {document, seed?} -> 201 {session, utterances, reports}
//   POST /sessions/{s}/deconvert                      -> {utterances: [{index, text, marked, ok, report}]}
//                                                      422 with rejected: [{index, report}] when a graph fails
//   GET  /sessions/{s}/utterances/{u}                 -> {index, text, marked, version, tokens}
//   GET  /sessions/{s}/utterances/{u}/tokens/{i}/trace
//   GET  /sessions/{s}/utterances/{u}/nodes/{n}/candidates?widen=0|1
//   POST /sessions/{s}/utterances/{u}/nodes/{n}/choose      {lu, uw?, version?}
//   POST /sessions/{s}/utterances/{u}/nodes/{n}/attributes  {name, value, level, version?}
//   POST /sessions/{s}/replace                        {from_lu, to_lu}
//   GET  /sessions/{s}/export                         -> UNL document (text/plain)
//   PUT  /sessions/{s}/policy                         {policy, k?}
//   POST /sessions/{s}/redeconvert
//
// Utterances are numbered from 1 in URLs. Errors are {error, code, phase}
// with 400 (input), 404 (unknown session, utterance or node), 409 (edit
// conflict), 422 (validation), 500 (lingware, storage).

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "deconv/pipeline.hpp"

namespace deconv {

struct ServiceOptions {
  std::filesystem::path session_dir;  // session files and counts; required
  std::uint64_t default_seed = 0;
};

class Service {
 public:
  Service(const Lingware& lingware, ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Blocks until stop().
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it; serve with listen_after_bind().
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  // Blocks until the server accepts connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace deconv
