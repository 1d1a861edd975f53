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

// Command-line front end. Everything goes through the C interface.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "deconv/deconv.h"

#ifndef DECONV_DEFAULT_LINGWARE
#define DECONV_DEFAULT_LINGWARE "data/lingware/fr"
#endif

namespace {

struct LingwareFlags {
  std::string dir, dict, lus, schema, ts, gs1, gs2, morph, profile, profile_name, inventory, incompat, tvars;

  void add_to(CLI::App* app) {
    app->add_option("--lingware", dir, "Directory with the conventional lingware file names");
    app->add_option("--dict", dict, "Dictionary TSV");
    app->add_option("--lus", lus, "LU table TSV");
    app->add_option("--schema", schema, "Decoration schema");
    app->add_option("--ts", ts, "Transfer rules");
    app->add_option("--gs1", gs1, "Structural generation rules");
    app->add_option("--gs2", gs2, "Syntactic generation rules");
    app->add_option("--morph", morph, "Morphological pack directory");
    app->add_option("--profile", profile, "Profile file");
    app->add_option("--profile-name", profile_name, "Profile section (default: first)");
    app->add_option("--inventory", inventory, "Relation and attribute inventory");
    app->add_option("--incompat", incompat, "Relation/class incompatibility table");
    app->add_option("--tvars", tvars, "Restriction to variable table");
  }

  bool explicit_files() const { return !dict.empty(); }
};

const char* or_null(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

int exit_code(deconv_status st) {
  switch (st) {
    case DECONV_OK: return 0;
    case DECONV_E_LINGWARE: return 2;
    case DECONV_E_STORAGE:
    case DECONV_E_INTERNAL: return 3;
    default: return 1;
  }
}

int report_failure(deconv_status st) {
  std::cerr << "deconv: " << deconv_last_error() << "\n";
  return exit_code(st);
}

struct Text {
  char* p = nullptr;
  ~Text() { deconv_free(p); }
  std::string str() const { return p ? p : ""; }
};

bool read_input(const std::string& path, std::string& out) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    out = ss.str();
    return true;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

struct LingwareHandle {
  deconv_lingware* p = nullptr;
  ~LingwareHandle() { deconv_lingware_free(p); }
};

deconv_status load_lingware(const LingwareFlags& f, LingwareHandle& out) {
  if (f.explicit_files()) {
    deconv_lingware_paths p{};
    p.dict = or_null(f.dict);
    p.lus = or_null(f.lus);
    p.schema = or_null(f.schema);
    p.ts = or_null(f.ts);
    p.gs1 = or_null(f.gs1);
    p.gs2 = or_null(f.gs2);
    p.morph = or_null(f.morph);
    p.profile = or_null(f.profile);
    p.profile_name = or_null(f.profile_name);
    p.inventory = or_null(f.inventory);
    p.incompat = or_null(f.incompat);
    p.tvars = or_null(f.tvars);
    return deconv_lingware_load(&p, &out.p);
  }
  std::string dir = f.dir;
  if (dir.empty()) {
    const char* env = std::getenv("DECONV_LINGWARE");
    dir = env && *env ? env : DECONV_DEFAULT_LINGWARE;
  }
  return deconv_lingware_load_dir(dir.c_str(), or_null(f.profile_name), &out.p);
}

size_t prompt_choice(void*, const char* kind, int node, const char* const* options, size_t count) {
  std::cerr << "node " << node << ", choose " << (std::string(kind) == "uw" ? "a UW" : "an LU") << ":\n";
  for (size_t k = 0; k < count; ++k) std::cerr << "  [" << k << "] " << options[k] << "\n";
  for (;;) {
    std::cerr << "> " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) return 0;
    try {
      const unsigned long k = std::stoul(line);
      if (k < count) return k;
    } catch (const std::exception&) {
    }
    std::cerr << "enter a number between 0 and " << count - 1 << "\n";
  }
}

int cmd_validate(const LingwareFlags& lf, const std::string& file) {
  std::string doc;
  if (!read_input(file, doc)) {
    std::cerr << "deconv: cannot read " << file << "\n";
    return 1;
  }
  LingwareHandle lw;
  if (auto st = load_lingware(lf, lw); st != DECONV_OK) return report_failure(st);
  Text report;
  const deconv_status st = deconv_validate(lw.p, doc.c_str(), &report.p);
  std::cout << report.str();
  if (st == DECONV_E_VALIDATION) return 1;
  if (st != DECONV_OK) return report_failure(st);
  return 0;
}

int cmd_g2t(const std::string& file, bool indented_only, bool bracketed_only) {
  std::string doc;
  if (!read_input(file, doc)) {
    std::cerr << "deconv: cannot read " << file << "\n";
    return 1;
  }
  if (!bracketed_only) {
    Text t;
    if (auto st = deconv_graph_to_tree(doc.c_str(), 1, &t.p); st != DECONV_OK) return report_failure(st);
    std::cout << t.str();
  }
  if (!indented_only) {
    Text t;
    if (auto st = deconv_graph_to_tree(doc.c_str(), 0, &t.p); st != DECONV_OK) return report_failure(st);
    std::cout << t.str();
  }
  return 0;
}

struct RunFlags {
  std::string file;
  unsigned long long seed = 0;
  bool interactive = false;
  bool marks = false;
  std::string counts;
  std::string stage;
  std::string save;
};

int cmd_run(const LingwareFlags& lf, const RunFlags& rf) {
  std::string doc;
  if (!read_input(rf.file, doc)) {
    std::cerr << "deconv: cannot read " << rf.file << "\n";
    return 1;
  }
  LingwareHandle lw;
  if (auto st = load_lingware(lf, lw); st != DECONV_OK) return report_failure(st);
  deconv_session* raw = nullptr;
  if (auto st = deconv_session_open(lw.p, or_null(rf.counts), &raw); st != DECONV_OK) return report_failure(st);
  std::unique_ptr<deconv_session, void (*)(deconv_session*)> session(raw, deconv_session_close);
  size_t count = 0;
  if (auto st = deconv_session_add(raw, doc.c_str(), rf.seed, nullptr, &count); st != DECONV_OK)
    return report_failure(st);
  if (rf.interactive) deconv_session_set_chooser(raw, prompt_choice, nullptr);

  int worst = 0;
  for (size_t u = 0; u < count; ++u) {
    const deconv_status st =
        rf.stage.empty() ? deconv_session_run(raw, u) : deconv_session_run_until(raw, u, rf.stage.c_str());
    if (st == DECONV_E_VALIDATION) {
      Text report;
      deconv_session_report(raw, u, &report.p);
      std::cerr << "utterance " << u + 1 << " rejected:\n" << report.str();
      std::cout << "\n";
      worst = std::max(worst, 1);
      continue;
    }
    if (st != DECONV_OK) return report_failure(st);
    if (!rf.stage.empty()) {
      Text t;
      const deconv_status s2 = rf.stage == "surface" || rf.stage == "validated" || rf.stage == "localized" ||
                                       rf.stage == "transferred"
                                   ? deconv_session_stage(raw, u, rf.stage.c_str(), &t.p)
                                   : deconv_session_tree(raw, u, rf.stage.c_str(), &t.p);
      if (s2 != DECONV_OK) return report_failure(s2);
      std::cout << t.str();
      if (!t.str().empty() && t.str().back() != '\n') std::cout << "\n";
      continue;
    }
    Text text;
    if (auto s2 = deconv_session_rendering(raw, u, rf.marks ? 1 : 0, &text.p); s2 != DECONV_OK)
      return report_failure(s2);
    std::cout << text.str() << "\n";
  }
  if (!rf.counts.empty())
    if (auto st = deconv_session_save_counts(raw); st != DECONV_OK) return report_failure(st);
  if (!rf.save.empty())
    if (auto st = deconv_session_save(raw, rf.save.c_str()); st != DECONV_OK) return report_failure(st);
  return worst;
}

int cmd_serve(const LingwareFlags& lf, const std::string& host, int port, const std::string& dir) {
  LingwareHandle lw;
  if (auto st = load_lingware(lf, lw); st != DECONV_OK) return report_failure(st);
  std::cerr << "deconv: serving on " << host << ":" << port << "\n";
  if (auto st = deconv_serve(lw.p, host.c_str(), port, dir.c_str()); st != DECONV_OK) return report_failure(st);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UNL graph deconverter"};
  app.require_subcommand(1);
  app.set_version_flag("--version", deconv_version());

  LingwareFlags lf;

  auto* validate = app.add_subcommand("validate", "Check UNL graphs; exit 0 iff all are accepted");
  std::string validate_file;
  validate->add_option("file", validate_file, "UNL document, - for stdin")->required();
  lf.add_to(validate);

  auto* g2t = app.add_subcommand("g2t", "Dump the graph-to-tree result, indented then bracketed");
  std::string g2t_file;
  bool indented_only = false, bracketed_only = false;
  g2t->add_option("file", g2t_file, "UNL document, - for stdin")->required();
  auto* i_flag = g2t->add_flag("--indented", indented_only, "Only the indented form");
  g2t->add_flag("--bracketed", bracketed_only, "Only the bracketed form")->excludes(i_flag);

  auto* run = app.add_subcommand("run", "Deconvert every utterance, one rendering per line");
  RunFlags rf;
  run->add_option("file", rf.file, "UNL document, - for stdin")->required();
  run->add_option("--seed", rf.seed, "Seed of the localization draws");
  run->add_flag("--interactive", rf.interactive, "Ask for every ambiguous UW or LU choice on stdin");
  run->add_flag("--marks", rf.marks, "Append &i_ trace marks to tokens");
  run->add_option("--counts", rf.counts, "Persistent association counts (TSV)");
  run->add_option("--stage", rf.stage,
                  "Print a stage instead of the text: validated, localized, transferred (JSON) "
                  "or transfer-tree, gma, uma, umc (bracketed)");
  run->add_option("--save-session", rf.save, "Write the session state file");
  lf.add_to(run);

  auto* serve = app.add_subcommand("serve", "Run the HTTP postedition service");
  std::string host = "127.0.0.1", session_dir = "sessions";
  int port = 8080;
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--port", port, "Listen port");
  serve->add_option("--session-dir", session_dir, "Session files and counts");
  lf.add_to(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (*validate) return cmd_validate(lf, validate_file);
  if (*g2t) return cmd_g2t(g2t_file, indented_only, bracketed_only);
  if (*run) return cmd_run(lf, rf);
  if (*serve) return cmd_serve(lf, host, port, session_dir);
  return 1;
}
