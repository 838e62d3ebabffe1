// Copyright 2026 The kbqa Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KBQA_KBQA_H_
#define KBQA_KBQA_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define KBQA_API __declspec(dllexport)
#else
#define KBQA_API __attribute__((visibility("default")))
#endif

typedef enum kbqa_status {
  KBQA_OK = 0,
  KBQA_ERR_INVALID_ARGUMENT = 1,
  KBQA_ERR_PARSE = 2,
  KBQA_ERR_NOT_FOUND = 3,
  KBQA_ERR_IO = 4,
  KBQA_ERR_CONFIG = 5,
  KBQA_ERR_DATA = 6,
  KBQA_ERR_TRANSPORT = 7,
  KBQA_ERR_PROTOCOL = 8,
  /* A logical form parsed but did not produce answers. */
  KBQA_ERR_NOT_EXECUTABLE = 9,
  /* A run finished but some questions failed. Output is still written. */
  KBQA_ERR_PARTIAL_FAILURE = 10,
  KBQA_ERR_INTERNAL = 11
} kbqa_status;

typedef struct kbqa_kb kbqa_kb;
typedef struct kbqa_sparse_index kbqa_sparse_index;
typedef struct kbqa_dense_index kbqa_dense_index;
typedef struct kbqa_config kbqa_config;

KBQA_API const char* kbqa_version(void);
KBQA_API const char* kbqa_status_name(kbqa_status status);

/* Message of the last failed call on this thread, "" if none. */
KBQA_API const char* kbqa_last_error(void);

/* Frees strings returned through char** out-parameters. NULL is ignored. */
KBQA_API void kbqa_string_free(char* s);

/* Knowledge base. NULL relation ids select the defaults. */
KBQA_API kbqa_status kbqa_kb_load(const char* path, const char* name_relation, const char* type_relation,
                                  kbqa_kb** out);
KBQA_API void kbqa_kb_free(kbqa_kb* kb);
KBQA_API kbqa_status kbqa_kb_counts(const kbqa_kb* kb, size_t* entities, size_t* triples);
KBQA_API kbqa_status kbqa_kb_resolve_name(const kbqa_kb* kb, const char* name, char** out_id);
/* Linearized passages of the whole KB as JSON lines {"id","title","text"}. */
KBQA_API kbqa_status kbqa_kb_linearize(const kbqa_kb* kb, size_t max_words, char** out_jsonl);
/* Writes {"status","executable","answers"[,"reason"]} and returns
   KBQA_ERR_NOT_EXECUTABLE when no answers were produced. */
KBQA_API kbqa_status kbqa_kb_execute(const kbqa_kb* kb, const char* logical_form, char** out_json);

/* Sparse index built with kbqa run index-sparse. Results are a JSON array of
   {"id","score","rank"}. */
KBQA_API kbqa_status kbqa_sparse_load(const char* path, kbqa_sparse_index** out);
KBQA_API void kbqa_sparse_free(kbqa_sparse_index* index);
KBQA_API kbqa_status kbqa_sparse_search(const kbqa_sparse_index* index, const char* query, size_t k,
                                        char** out_json);

KBQA_API kbqa_status kbqa_dense_load(const char* path, kbqa_dense_index** out);
KBQA_API void kbqa_dense_free(kbqa_dense_index* index);
KBQA_API kbqa_status kbqa_dense_dim(const kbqa_dense_index* index, size_t* dim);
KBQA_API kbqa_status kbqa_dense_search_vector(const kbqa_dense_index* index, const float* query, size_t dim,
                                              size_t k, char** out_json);

/* Pipeline configuration file. */
KBQA_API kbqa_status kbqa_config_load(const char* path, kbqa_config** out);
KBQA_API void kbqa_config_free(kbqa_config* config);
/* Keys: k, beam, lambda, score_fn, mode, reader_url, mock_fixture. */
KBQA_API kbqa_status kbqa_config_set(kbqa_config* config, const char* key, const char* value);

/* Commands: linearize, index-sparse, index-dense, retrieve, answer, eval,
   execute. `arg` is the logical form for execute and ignored otherwise.
   The JSON summary is written to *out_json even for KBQA_ERR_PARTIAL_FAILURE. */
KBQA_API kbqa_status kbqa_run(const kbqa_config* config, const char* command, const char* arg, char** out_json);

#ifdef __cplusplus
}
#endif

#endif  // KBQA_KBQA_H_
