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

#include "deconv/service.hpp"

#include <httplib.h>

#include <map>
#include <mutex>
#include <regex>

#include "deconv/error.hpp"
#include "deconv/session.hpp"
#include "json_io.hpp"

namespace deconv {

namespace fs = std::filesystem;

namespace {

int http_status(const Error& e) {
  if (e.code() == ErrorCode::ValidationFailed) return 422;
  switch (e.error_class()) {
    case ErrorClass::Input: return 400;
    case ErrorClass::NotFound: return 404;
    case ErrorClass::Conflict: return 409;
    case ErrorClass::Lingware:
    case ErrorClass::Storage: return 500;
  }
  return 500;
}

json error_body(const Error& e) {
  return json{{"error", e.detail()}, {"code", code_name(e.code())}, {"phase", e.phase()}};
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad JSON body: ") + e.what());
  }
}

template <typename T>
T field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::InvalidArgument, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad field '") + key + "'");
  }
}

template <typename T>
std::optional<T> opt_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return field<T>(j, key);
}

std::size_t number(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidArgument, std::string("bad ") + what + " '" + s + "'");
}

// 1-based URL index -> 0-based utterance position.
std::size_t utterance_index(const std::string& s) {
  const std::size_t u = number(s, "utterance");
  if (u == 0) throw Error(ErrorCode::UnknownUtterance, "utterances are numbered from 1");
  return u - 1;
}

json utterance_view(const UtteranceState& s, std::size_t u) {
  json tokens = json::array();
  if (s.surface)
    for (const auto& t : s.surface->tokens) tokens.push_back({{"text", t.text}, {"mark", t.mark}});
  return json{{"index", u + 1},
              {"id", s.id},
              {"ok", !s.validated_run || s.report.ok},
              {"text", s.rendering(false)},
              {"marked", s.rendering(true)},
              {"tokens", tokens},
              {"version", s.version},
              {"pending_edits", s.pending_edits},
              {"stale", s.dirty_from.has_value()},
              {"report", s.report.to_text()}};
}

}  // namespace

struct Service::Impl {
  const Lingware& lw;
  ServiceOptions options;
  httplib::Server server;
  std::unique_ptr<CountStore> counts;
  std::mutex mu;  // guards sessions and next_id
  std::map<std::string, std::unique_ptr<Session>> sessions;
  int next_id = 1;

  Impl(const Lingware& l, ServiceOptions o) : lw(l), options(std::move(o)) {
    if (options.session_dir.empty()) throw Error(ErrorCode::InvalidArgument, "a session directory is required");
    std::error_code ec;
    fs::create_directories(options.session_dir, ec);
    if (ec) throw Error(ErrorCode::StorageError, "cannot create " + options.session_dir.string());
    counts = std::make_unique<CountStore>(options.session_dir / ("counts." + lw.profile.name + ".tsv"));
    // Continue numbering after sessions left by an earlier run.
    static const std::regex name(R"(s([0-9]+)\.session)");
    for (const auto& entry : fs::directory_iterator(options.session_dir)) {
      std::smatch m;
      const std::string f = entry.path().filename().string();
      if (std::regex_match(f, m, name)) next_id = std::max(next_id, std::stoi(m[1]) + 1);
    }
    routes();
  }

  fs::path file_of(const std::string& id) const { return options.session_dir / (id + ".session"); }

  Session& get(const std::string& id) {
    std::lock_guard lock(mu);
    auto it = sessions.find(id);
    if (it != sessions.end()) return *it->second;
    const fs::path f = file_of(id);
    if (!fs::exists(f)) throw Error(ErrorCode::UnknownSession, "no session " + id);
    auto s = std::make_unique<Session>(lw, *counts);
    s->load(f);
    return *sessions.emplace(id, std::move(s)).first->second;
  }

  void persist(const std::string& id, const Session& s) { s.save(file_of(id)); }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static Handler wrap(std::function<json(const httplib::Request&, httplib::Response&)> f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        json out = f(req, res);
        if (!out.is_null()) res.set_content(out.dump(), "application/json");
      } catch (const Error& e) {
        res.status = http_status(e);
        res.set_content(error_body(e).dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(json{{"error", e.what()}, {"code", "Internal"}, {"phase", ""}}.dump(),
                        "application/json");
      }
    };
  }

  json all_utterances(Session& s) {
    json out = json::array();
    for (std::size_t u = 0, n = s.size(); u < n; ++u) out.push_back(utterance_view(s.snapshot(u), u));
    return out;
  }

  Edit edit_from(const httplib::Request& req, const json& body, Edit::Kind kind) {
    Edit e;
    e.kind = kind;
    e.node = static_cast<NodeId>(number(req.matches[3], "node"));
    if (kind == Edit::ChooseLu) {
      e.lu = field<std::string>(body, "lu");
      e.uw = opt_field<std::string>(body, "uw").value_or("");
    } else {
      e.name = field<std::string>(body, "name");
      e.value = opt_field<std::string>(body, "value").value_or("on");
      const std::string level = opt_field<std::string>(body, "level").value_or("interlingual");
      if (level == "interlingual") e.level = AttributeLevel::Interlingual;
      else if (level == "style") e.level = AttributeLevel::Style;
      else throw Error(ErrorCode::InvalidArgument, "level must be interlingual or style");
    }
    return e;
  }

  json apply_edit(const httplib::Request& req, Edit::Kind kind) {
    const json body = parse_body(req);
    const std::string id = req.matches[1];
    Session& s = get(id);
    const std::size_t u = utterance_index(req.matches[2]);
    const Edit e = edit_from(req, body, kind);
    s.edit(u, e, opt_field<std::uint64_t>(body, "version"));
    persist(id, s);
    return utterance_view(s.snapshot(u), u);
  }

  void routes() {
    server.Post("/sessions", wrap([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      const UnlDocument doc = parse_document(field<std::string>(body, "document"));
      const auto seed = opt_field<std::uint64_t>(body, "seed").value_or(options.default_seed);
      auto s = std::make_unique<Session>(lw, *counts);
      s->add(doc, seed);
      RunOptions validate_only;
      validate_only.until = Stage::Validated;
      s->run_all(validate_only);
      json reports = json::array();
      for (std::size_t u = 0, n = s->size(); u < n; ++u) {
        const UtteranceState st = s->snapshot(u);
        reports.push_back({{"index", u + 1}, {"ok", st.report.ok}, {"report", st.report}});
      }
      std::string id;
      {
        std::lock_guard lock(mu);
        id = "s" + std::to_string(next_id++);
      }
      persist(id, *s);
      const std::size_t n = s->size();
      {
        std::lock_guard lock(mu);
        sessions.emplace(id, std::move(s));
      }
      res.status = 201;
      return json{{"session", id}, {"utterances", n}, {"reports", reports}};
    }));

    server.Post(R"(/sessions/([A-Za-z0-9_]+)/deconvert)",
                wrap([this](const httplib::Request& req, httplib::Response& res) {
                  const std::string id = req.matches[1];
                  Session& s = get(id);
                  s.run_all();
                  persist(id, s);
                  json out{{"utterances", all_utterances(s)}};
                  // Rejected graphs: 422, the body still carries every utterance and its report.
                  json rejected = json::array();
                  for (std::size_t u = 0, n = s.size(); u < n; ++u) {
                    const UtteranceState st = s.snapshot(u);
                    if (st.validated_run && !st.report.ok)
                      rejected.push_back({{"index", u + 1}, {"report", st.report}});
                  }
                  if (!rejected.empty()) {
                    res.status = 422;
                    out["error"] = std::to_string(rejected.size()) + " utterance(s) rejected by the validator";
                    out["code"] = "ValidationFailed";
                    out["phase"] = "validated";
                    out["rejected"] = rejected;
                  }
                  return out;
                }));

    server.Get(R"(/sessions/([A-Za-z0-9_]+)/utterances/([0-9]+))",
               wrap([this](const httplib::Request& req, httplib::Response&) {
                 Session& s = get(req.matches[1]);
                 const std::size_t u = utterance_index(req.matches[2]);
                 return utterance_view(s.snapshot(u), u);
               }));

    server.Get(R"(/sessions/([A-Za-z0-9_]+)/utterances/([0-9]+)/tokens/([0-9]+)/trace)",
               wrap([this](const httplib::Request& req, httplib::Response&) {
                 Session& s = get(req.matches[1]);
                 const std::size_t u = utterance_index(req.matches[2]);
                 const std::size_t token = number(req.matches[3], "token");
                 return json{{"token", token}, {"chain", s.trace(u, token)}};
               }));

    server.Get(R"(/sessions/([A-Za-z0-9_]+)/utterances/([0-9]+)/nodes/([0-9]+)/candidates)",
               wrap([this](const httplib::Request& req, httplib::Response&) {
                 Session& s = get(req.matches[1]);
                 const std::size_t u = utterance_index(req.matches[2]);
                 const NodeId node = static_cast<NodeId>(number(req.matches[3], "node"));
                 const std::string w = req.has_param("widen") ? req.get_param_value("widen") : "0";
                 const bool widen = w == "1" || w == "true";
                 return json{{"node", node}, {"widen", widen}, {"candidates", s.candidates(u, node, widen)}};
               }));

    server.Post(R"(/sessions/([A-Za-z0-9_]+)/utterances/([0-9]+)/nodes/([0-9]+)/choose)",
                wrap([this](const httplib::Request& req, httplib::Response&) {
                  return apply_edit(req, Edit::ChooseLu);
                }));

    server.Post(R"(/sessions/([A-Za-z0-9_]+)/utterances/([0-9]+)/nodes/([0-9]+)/attributes)",
                wrap([this](const httplib::Request& req, httplib::Response&) {
                  return apply_edit(req, Edit::SetAttribute);
                }));

    server.Post(R"(/sessions/([A-Za-z0-9_]+)/replace)",
                wrap([this](const httplib::Request& req, httplib::Response&) {
                  const json body = parse_body(req);
                  const std::string id = req.matches[1];
                  Session& s = get(id);
                  const ReplaceResult r =
                      s.replace(field<std::string>(body, "from_lu"), field<std::string>(body, "to_lu"));
                  persist(id, s);
                  json changed = json::array();
                  for (std::size_t u : r.changed) changed.push_back(u + 1);
                  json skipped = json::array();
                  for (const auto& [u, n] : r.skipped)
                    skipped.push_back({{"utterance", u + 1}, {"node", n}, {"code", "LuNotCandidate"}});
                  return json{{"changed", changed}, {"skipped", skipped}, {"utterances", all_utterances(s)}};
                }));

    server.Get(R"(/sessions/([A-Za-z0-9_]+)/export)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 wrap([this](const httplib::Request& rq, httplib::Response& rs) {
                   const std::string id = rq.matches[1];
                   Session& s = get(id);
                   rs.set_header("Content-Disposition", "attachment; filename=\"" + id + ".unl\"");
                   rs.set_content(serialize_document(s.export_document()), "text/plain; charset=utf-8");
                   return json();
                 })(req, res);
               });

    server.Put(R"(/sessions/([A-Za-z0-9_]+)/policy)",
               wrap([this](const httplib::Request& req, httplib::Response&) {
                 const json body = parse_body(req);
                 const std::string id = req.matches[1];
                 Session& s = get(id);
                 const std::string name = field<std::string>(body, "policy");
                 const auto p = parse_policy(name);
                 if (!p) throw Error(ErrorCode::InvalidArgument, "unknown policy '" + name + "'");
                 s.set_policy(*p, opt_field<std::size_t>(body, "k").value_or(1));
                 persist(id, s);
                 return json{{"policy", policy_name(s.policy())}, {"k", s.every_k()}};
               }));

    server.Post(R"(/sessions/([A-Za-z0-9_]+)/redeconvert)",
                wrap([this](const httplib::Request& req, httplib::Response&) {
                  const std::string id = req.matches[1];
                  Session& s = get(id);
                  json done = json::array();
                  for (std::size_t u : s.redeconvert()) done.push_back(u + 1);
                  persist(id, s);
                  return json{{"redeconverted", done}, {"utterances", all_utterances(s)}};
                }));
  }
};

Service::Service(const Lingware& lingware, ServiceOptions options)
    : impl_(std::make_unique<Impl>(lingware, std::move(options))) {}

Service::~Service() = default;

bool Service::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int Service::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool Service::listen_after_bind() { return impl_->server.listen_after_bind(); }
void Service::stop() { impl_->server.stop(); }
void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace deconv
