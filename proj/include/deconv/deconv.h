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

/* UNL deconverter, C interface.
 *
 * All handles are opaque. Every function returns a deconv_status; on failure
 * deconv_last_error() and deconv_last_error_code() describe the error of the
 * calling thread until its next call. Strings returned through char** out
 * parameters are NUL-terminated, owned by the caller and released with
 * deconv_free(). Utterance indices are 0-based; node ids are the canonical
 * 1-based UNL node indices. */
#ifndef DECONV_DECONV_H
#define DECONV_DECONV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DECONV_API __declspec(dllexport)
#else
#define DECONV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum deconv_status {
  DECONV_OK = 0,
  DECONV_E_INPUT = 1,      /* malformed input, bad argument, unknown node */
  DECONV_E_LINGWARE = 2,   /* dictionary, schema, rule or morph pack error */
  DECONV_E_VALIDATION = 3, /* graph rejected by the validator */
  DECONV_E_NOT_FOUND = 4,  /* unknown utterance or session */
  DECONV_E_CONFLICT = 5,   /* concurrent or stale edit */
  DECONV_E_STORAGE = 6,    /* counts or session files */
  DECONV_E_INTERNAL = 7
} deconv_status;

typedef struct deconv_lingware deconv_lingware;
typedef struct deconv_session deconv_session;

/* Paths of a lingware set; NULL members fall back to the conventional file
 * names next to `dict` (inventory.cfg, incompat.tsv, tvars.tsv). */
typedef struct deconv_lingware_paths {
  const char* dict;
  const char* lus;
  const char* schema;
  const char* ts;
  const char* gs1;
  const char* gs2;
  const char* morph; /* directory */
  const char* profile;
  const char* profile_name; /* NULL: first profile of the file */
  const char* inventory;
  const char* incompat;
  const char* tvars;
} deconv_lingware_paths;

/* Called for every ambiguous choice in interactive mode. `kind` is "uw" or
 * "lu"; returns the index of the chosen option. */
typedef size_t (*deconv_chooser)(void* user, const char* kind, int node, const char* const* options,
                                 size_t count);

DECONV_API const char* deconv_version(void);
DECONV_API const char* deconv_last_error(void);
/* Symbolic code such as "NonConnectedGraph", "" after success. */
DECONV_API const char* deconv_last_error_code(void);
DECONV_API void deconv_free(char* s);

DECONV_API deconv_status deconv_lingware_load(const deconv_lingware_paths* paths, deconv_lingware** out);
/* Loads dict.tsv, lus.tsv, schema.dv, ts.rules, gs1.rules, gs2.rules,
 * morph/, profile.cfg and inventory.cfg from one directory. */
DECONV_API deconv_status deconv_lingware_load_dir(const char* dir, const char* profile_name,
                                                  deconv_lingware** out);
DECONV_API void deconv_lingware_free(deconv_lingware* lw);

/* Validation report of every utterance of a UNL document, as text.
 * Returns DECONV_E_VALIDATION when some graph is rejected (the report is
 * still produced). */
DECONV_API deconv_status deconv_validate(const deconv_lingware* lw, const char* unl_document,
                                         char** report);
/* Graph-to-tree dump of every utterance; `indented` selects the indented
 * layout over the bracketed one. */
DECONV_API deconv_status deconv_graph_to_tree(const char* unl_document, int indented, char** tree);

/* A session owns utterance states and association counts. `counts_path`
 * may be NULL for in-memory counts. The lingware must outlive the session. */
DECONV_API deconv_status deconv_session_open(const deconv_lingware* lw, const char* counts_path,
                                             deconv_session** out);
DECONV_API void deconv_session_close(deconv_session* s);

/* Appends the utterances of a UNL document; `first` receives the index of
 * the first appended utterance and `count` their number (both optional). */
DECONV_API deconv_status deconv_session_add(deconv_session* s, const char* unl_document, uint64_t seed,
                                            size_t* first, size_t* count);
DECONV_API deconv_status deconv_session_size(const deconv_session* s, size_t* count);
DECONV_API deconv_status deconv_session_set_chooser(deconv_session* s, deconv_chooser chooser, void* user);

/* Computes the missing stages. DECONV_E_VALIDATION when the graph is
 * rejected; the report is available through deconv_session_report. */
DECONV_API deconv_status deconv_session_run(deconv_session* s, size_t utterance);
/* Like deconv_session_run but stops once `stage` is computed. */
DECONV_API deconv_status deconv_session_run_until(deconv_session* s, size_t utterance, const char* stage);
DECONV_API deconv_status deconv_session_report(const deconv_session* s, size_t utterance, char** report);
DECONV_API deconv_status deconv_session_rendering(const deconv_session* s, size_t utterance, int marks,
                                                  char** text);
/* JSON of one cached stage: validated, localized, transferred,
 * transfer-tree, gma, uma, umc or surface. "null" when not computed. */
DECONV_API deconv_status deconv_session_stage(const deconv_session* s, size_t utterance, const char* stage,
                                              char** json);
/* Bracketed dump of a tree stage (transfer-tree, gma, uma, umc). */
DECONV_API deconv_status deconv_session_tree(const deconv_session* s, size_t utterance, const char* stage,
                                             char** text);
/* JSON array of {stage, node} links for a token position. */
DECONV_API deconv_status deconv_session_trace(const deconv_session* s, size_t utterance, size_t token,
                                              char** json);
DECONV_API deconv_status deconv_session_candidates(const deconv_session* s, size_t utterance, int node,
                                                   int widen, char** json);

/* Edits apply under the session policy. `uw` may be NULL. */
DECONV_API deconv_status deconv_session_choose_lu(deconv_session* s, size_t utterance, int node,
                                                  const char* lu, const char* uw);
/* `style` 0 edits an interlingual attribute ("on"/"off"), 1 a style
 * variable of the GMA tree (empty value unsets). */
DECONV_API deconv_status deconv_session_set_attribute(deconv_session* s, size_t utterance, int node,
                                                      const char* name, const char* value, int style);
/* "always", "every-k" or "on-demand". */
DECONV_API deconv_status deconv_session_set_policy(deconv_session* s, const char* policy, size_t k);
DECONV_API deconv_status deconv_session_redeconvert(deconv_session* s);
/* JSON {changed: [...], skipped: [[u, node], ...]}. */
DECONV_API deconv_status deconv_session_replace(deconv_session* s, const char* from_lu, const char* to_lu,
                                                char** json);
/* The enriched UNL document. */
DECONV_API deconv_status deconv_session_export(const deconv_session* s, char** unl_document);
DECONV_API deconv_status deconv_session_save_counts(deconv_session* s);
DECONV_API deconv_status deconv_session_save(const deconv_session* s, const char* path);
DECONV_API deconv_status deconv_session_load(deconv_session* s, const char* path);

/* Runs the HTTP postedition service until deconv_serve_stop is called or
 * the process ends. Session files and counts live in `session_dir`. */
DECONV_API deconv_status deconv_serve(const deconv_lingware* lw, const char* host, int port,
                                      const char* session_dir);
DECONV_API void deconv_serve_stop(void);

#ifdef __cplusplus
}
#endif

#endif /* DECONV_DECONV_H */
