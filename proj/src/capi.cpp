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

#include "deconv/deconv.h"

#include <cstdlib>
#include <cstring>
#include <mutex>
#include <new>

#include "deconv/error.hpp"
#include "deconv/graph2tree.hpp"
#include "deconv/service.hpp"
#include "deconv/session.hpp"
#include "json_io.hpp"

struct deconv_lingware {
  deconv::Lingware lw;
};

struct deconv_session {
  const deconv::Lingware* lw = nullptr;
  std::unique_ptr<deconv::Session> session;
  deconv_chooser chooser = nullptr;
  void* user = nullptr;
};

namespace {

using namespace deconv;

thread_local std::string last_error;
thread_local std::string last_code;

deconv_status status_of(const Error& e) {
  if (e.code() == ErrorCode::ValidationFailed) return DECONV_E_VALIDATION;
  switch (e.error_class()) {
    case ErrorClass::Input: return DECONV_E_INPUT;
    case ErrorClass::Lingware: return DECONV_E_LINGWARE;
    case ErrorClass::Storage: return DECONV_E_STORAGE;
    case ErrorClass::NotFound: return DECONV_E_NOT_FOUND;
    case ErrorClass::Conflict: return DECONV_E_CONFLICT;
  }
  return DECONV_E_INTERNAL;
}

template <typename F>
deconv_status guard(F&& f) {
  last_error.clear();
  last_code.clear();
  try {
    return f();
  } catch (const Error& e) {
    last_error = e.what();
    last_code = code_name(e.code());
    return status_of(e);
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    last_code = "Internal";
    return DECONV_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    last_code = "Internal";
    return DECONV_E_INTERNAL;
  }
}

[[noreturn]] void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::InvalidArgument, std::string(what) + " is NULL");
}

std::filesystem::path opt_path(const char* s) { return s ? std::filesystem::path(s) : std::filesystem::path(); }

const TreeNode* tree_stage(const UtteranceState& s, Stage stage) {
  switch (stage) {
    case Stage::TransferTree: return s.transfer_tree ? &*s.transfer_tree : nullptr;
    case Stage::Gma: return s.gma ? &*s.gma : nullptr;
    case Stage::Uma: return s.uma ? &*s.uma : nullptr;
    case Stage::Umc: return s.umc ? &*s.umc : nullptr;
    default: fail(ErrorCode::InvalidArgument, std::string(stage_name(stage)) + " is not a tree stage");
  }
  return nullptr;
}

Stage stage_arg(const char* name) {
  need(name, "stage");
  auto st = parse_stage(name);
  if (!st) fail(ErrorCode::InvalidArgument, std::string("unknown stage '") + name + "'");
  return *st;
}

RunOptions run_options(deconv_session* s, UwChooser& uw, LuChooser& lu) {
  RunOptions o;
  if (!s->chooser) return o;
  uw = [s](const LocalizationChoice& c) {
    std::vector<std::string> texts;
    for (const auto& x : c.candidates) texts.push_back(x.uw.text());
    std::vector<const char*> ptrs;
    for (const auto& t : texts) ptrs.push_back(t.c_str());
    return s->chooser(s->user, "uw", c.node, ptrs.data(), ptrs.size());
  };
  lu = [s](const TransferChoice& c) {
    std::vector<const char*> ptrs;
    for (const auto& x : c.alternatives) ptrs.push_back(x.lu.c_str());
    return s->chooser(s->user, "lu", c.node, ptrs.data(), ptrs.size());
  };
  o.uw_chooser = &uw;
  o.lu_chooser = &lu;
  return o;
}

std::mutex serve_mu;
Service* active_service = nullptr;

}  // namespace

extern "C" {

const char* deconv_version(void) { return "1.0.0"; }
const char* deconv_last_error(void) { return last_error.c_str(); }
const char* deconv_last_error_code(void) { return last_code.c_str(); }
void deconv_free(char* s) { std::free(s); }

deconv_status deconv_lingware_load(const deconv_lingware_paths* p, deconv_lingware** out) {
  return guard([&] {
    need(p, "paths");
    need(out, "out");
    for (const char* f : {p->dict, p->lus, p->schema, p->ts, p->gs1, p->gs2, p->morph, p->profile})
      need(f, "required lingware path");
    LingwarePaths lp;
    lp.dict = p->dict;
    lp.lus = p->lus;
    lp.schema = p->schema;
    lp.ts = p->ts;
    lp.gs1 = p->gs1;
    lp.gs2 = p->gs2;
    lp.morph = p->morph;
    lp.profile = p->profile;
    lp.profile_name = p->profile_name ? p->profile_name : "";
    lp.inventory = opt_path(p->inventory);
    lp.incompat = opt_path(p->incompat);
    lp.tvars = opt_path(p->tvars);
    lp.fill_defaults();
    auto h = std::make_unique<deconv_lingware>();
    h->lw = Lingware::load(lp);
    *out = h.release();
    return DECONV_OK;
  });
}

deconv_status deconv_lingware_load_dir(const char* dir, const char* profile_name, deconv_lingware** out) {
  return guard([&] {
    need(dir, "dir");
    need(out, "out");
    LingwarePaths lp = LingwarePaths::from_dir(dir);
    if (!std::filesystem::exists(lp.incompat)) lp.incompat.clear();
    if (!std::filesystem::exists(lp.tvars)) lp.tvars.clear();
    lp.profile_name = profile_name ? profile_name : "";
    auto h = std::make_unique<deconv_lingware>();
    h->lw = Lingware::load(lp);
    *out = h.release();
    return DECONV_OK;
  });
}

void deconv_lingware_free(deconv_lingware* lw) { delete lw; }

deconv_status deconv_validate(const deconv_lingware* lw, const char* unl, char** report) {
  return guard([&] {
    need(lw, "lingware");
    need(unl, "document");
    need(report, "report");
    const UnlDocument doc = parse_document(unl);
    std::string out;
    bool ok = true;
    for (std::size_t u = 0; u < doc.utterances.size(); ++u) {
      const ValidationReport r = validate(doc.utterances[u].graph, lw->lw.inventory);
      ok = ok && r.ok;
      out += "utterance " + std::to_string(u + 1) + ": " + (r.ok ? "ok" : "rejected") + "\n";
      out += r.to_text();
      if (!out.empty() && out.back() != '\n') out += '\n';
    }
    *report = dup(out);
    if (!ok) {
      last_error = "validation failed";
      last_code = code_name(ErrorCode::ValidationFailed);
      return DECONV_E_VALIDATION;
    }
    return DECONV_OK;
  });
}

deconv_status deconv_graph_to_tree(const char* unl, int indented, char** tree) {
  return guard([&] {
    need(unl, "document");
    need(tree, "tree");
    const UnlDocument doc = parse_document(unl);
    std::string out;
    for (const Utterance& u : doc.utterances) {
      const GTResult r = graph_to_tree(u.graph);
      out += indented ? to_indented(r, u.graph) : to_bracketed(r, u.graph);
      if (!out.empty() && out.back() != '\n') out += '\n';
    }
    *tree = dup(out);
    return DECONV_OK;
  });
}

deconv_status deconv_session_open(const deconv_lingware* lw, const char* counts_path, deconv_session** out) {
  return guard([&] {
    need(lw, "lingware");
    need(out, "out");
    auto s = std::make_unique<deconv_session>();
    s->lw = &lw->lw;
    s->session = std::make_unique<Session>(lw->lw, opt_path(counts_path));
    *out = s.release();
    return DECONV_OK;
  });
}

void deconv_session_close(deconv_session* s) { delete s; }

deconv_status deconv_session_add(deconv_session* s, const char* unl, uint64_t seed, size_t* first,
                                 size_t* count) {
  return guard([&] {
    need(s, "session");
    need(unl, "document");
    const UnlDocument doc = parse_document(unl);
    const std::size_t f = s->session->add(doc, seed);
    if (first) *first = f;
    if (count) *count = doc.utterances.size();
    return DECONV_OK;
  });
}

deconv_status deconv_session_size(const deconv_session* s, size_t* count) {
  return guard([&] {
    need(s, "session");
    need(count, "count");
    *count = s->session->size();
    return DECONV_OK;
  });
}

deconv_status deconv_session_set_chooser(deconv_session* s, deconv_chooser chooser, void* user) {
  return guard([&] {
    need(s, "session");
    s->chooser = chooser;
    s->user = user;
    return DECONV_OK;
  });
}

deconv_status deconv_session_run(deconv_session* s, size_t u) { return deconv_session_run_until(s, u, "surface"); }

deconv_status deconv_session_run_until(deconv_session* s, size_t u, const char* stage) {
  return guard([&] {
    need(s, "session");
    const Stage until = stage_arg(stage);
    UwChooser uw;
    LuChooser lu;
    RunOptions o = run_options(s, uw, lu);
    o.until = until;
    s->session->run(u, o);
    const UtteranceState st = s->session->snapshot(u);
    if (!st.report.ok) {
      last_error = "utterance " + std::to_string(u + 1) + " rejected by the validator";
      last_code = code_name(ErrorCode::ValidationFailed);
      return DECONV_E_VALIDATION;
    }
    return DECONV_OK;
  });
}

deconv_status deconv_session_report(const deconv_session* s, size_t u, char** report) {
  return guard([&] {
    need(s, "session");
    need(report, "report");
    *report = dup(s->session->snapshot(u).report.to_text());
    return DECONV_OK;
  });
}

deconv_status deconv_session_rendering(const deconv_session* s, size_t u, int marks, char** out) {
  return guard([&] {
    need(s, "session");
    need(out, "text");
    const UtteranceState st = s->session->snapshot(u);
    if (!st.complete()) fail(ErrorCode::InvalidArgument, "utterance " + std::to_string(u + 1) + " has no rendering");
    *out = dup(st.rendering(marks != 0));
    return DECONV_OK;
  });
}

deconv_status deconv_session_stage(const deconv_session* s, size_t u, const char* stage, char** out) {
  return guard([&] {
    need(s, "session");
    need(out, "json");
    const Stage st = stage_arg(stage);
    const std::string j = stage_json(s->session->snapshot(u), st);
    *out = dup(j.empty() ? "null" : j);
    return DECONV_OK;
  });
}

deconv_status deconv_session_tree(const deconv_session* s, size_t u, const char* stage, char** out) {
  return guard([&] {
    need(s, "session");
    need(out, "text");
    const Stage st = stage_arg(stage);
    const UtteranceState state = s->session->snapshot(u);
    const TreeNode* t = tree_stage(state, st);
    if (!t) fail(ErrorCode::InvalidArgument, std::string(stage) + " is not computed");
    *out = dup(to_bracketed(*t));
    return DECONV_OK;
  });
}

deconv_status deconv_session_trace(const deconv_session* s, size_t u, size_t token, char** out) {
  return guard([&] {
    need(s, "session");
    need(out, "json");
    *out = dup(json(s->session->trace(u, token)).dump());
    return DECONV_OK;
  });
}

deconv_status deconv_session_candidates(const deconv_session* s, size_t u, int node, int widen, char** out) {
  return guard([&] {
    need(s, "session");
    need(out, "json");
    *out = dup(json(s->session->candidates(u, node, widen != 0)).dump());
    return DECONV_OK;
  });
}

deconv_status deconv_session_choose_lu(deconv_session* s, size_t u, int node, const char* lu, const char* uw) {
  return guard([&] {
    need(s, "session");
    need(lu, "lu");
    Edit e;
    e.kind = Edit::ChooseLu;
    e.node = node;
    e.lu = lu;
    e.uw = uw ? uw : "";
    s->session->edit(u, e);
    return DECONV_OK;
  });
}

deconv_status deconv_session_set_attribute(deconv_session* s, size_t u, int node, const char* name,
                                           const char* value, int style) {
  return guard([&] {
    need(s, "session");
    need(name, "name");
    Edit e;
    e.kind = Edit::SetAttribute;
    e.node = node;
    e.name = name;
    e.value = value ? value : "";
    e.level = style ? AttributeLevel::Style : AttributeLevel::Interlingual;
    s->session->edit(u, e);
    return DECONV_OK;
  });
}

deconv_status deconv_session_set_policy(deconv_session* s, const char* policy, size_t k) {
  return guard([&] {
    need(s, "session");
    need(policy, "policy");
    auto p = parse_policy(policy);
    if (!p) fail(ErrorCode::InvalidArgument, std::string("unknown policy '") + policy + "'");
    s->session->set_policy(*p, k);
    return DECONV_OK;
  });
}

deconv_status deconv_session_redeconvert(deconv_session* s) {
  return guard([&] {
    need(s, "session");
    s->session->redeconvert();
    return DECONV_OK;
  });
}

deconv_status deconv_session_replace(deconv_session* s, const char* from, const char* to, char** out) {
  return guard([&] {
    need(s, "session");
    need(from, "from_lu");
    need(to, "to_lu");
    const ReplaceResult r = s->session->replace(from, to);
    json skipped = json::array();
    for (const auto& [u, n] : r.skipped) skipped.push_back(json::array({u, n}));
    if (out) *out = dup(json{{"changed", r.changed}, {"skipped", skipped}}.dump());
    return DECONV_OK;
  });
}

deconv_status deconv_session_export(const deconv_session* s, char** out) {
  return guard([&] {
    need(s, "session");
    need(out, "document");
    *out = dup(serialize_document(s->session->export_document()));
    return DECONV_OK;
  });
}

deconv_status deconv_session_save_counts(deconv_session* s) {
  return guard([&] {
    need(s, "session");
    if (s->session->counts().path().empty())
      fail(ErrorCode::StorageError, "session counts are not backed by a file");
    s->session->counts().save();
    return DECONV_OK;
  });
}

deconv_status deconv_session_save(const deconv_session* s, const char* path) {
  return guard([&] {
    need(s, "session");
    need(path, "path");
    s->session->save(path);
    return DECONV_OK;
  });
}

deconv_status deconv_session_load(deconv_session* s, const char* path) {
  return guard([&] {
    need(s, "session");
    need(path, "path");
    s->session->load(path);
    return DECONV_OK;
  });
}

deconv_status deconv_serve(const deconv_lingware* lw, const char* host, int port, const char* session_dir) {
  return guard([&] {
    need(lw, "lingware");
    need(host, "host");
    need(session_dir, "session_dir");
    ServiceOptions o;
    o.session_dir = session_dir;
    Service service(lw->lw, o);
    {
      std::lock_guard lock(serve_mu);
      active_service = &service;
    }
    const bool ok = service.listen(host, port);
    {
      std::lock_guard lock(serve_mu);
      active_service = nullptr;
    }
    if (!ok) fail(ErrorCode::InvalidArgument, std::string("cannot listen on ") + host + ":" + std::to_string(port));
    return DECONV_OK;
  });
}

void deconv_serve_stop(void) {
  std::lock_guard lock(serve_mu);
  if (active_service) active_service->stop();
}

}  // extern "C"
