/*
 * Copyright (c) 2026 The subner Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the subword NER tagger.
 *
 * All functions return a subner_status. On failure a message is available
 * from subner_last_error() on the calling thread until the next call. Strings
 * returned through `char**` are owned by the caller and released with
 * subner_string_free(). Handles are opaque; a loaded model may be shared by
 * threads for tagging.
 */

#ifndef SUBNER_SUBNER_H_
#define SUBNER_SUBNER_H_

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SUBNER_API __declspec(dllexport)
#else
#define SUBNER_API __attribute__((visibility("default")))
#endif

/* Values match the command-line exit codes. */
typedef enum {
  SUBNER_OK = 0,
  SUBNER_ERR_INTERNAL = 1,
  SUBNER_ERR_USAGE = 2,
  SUBNER_ERR_DATA = 3,
  SUBNER_ERR_NUMERICAL = 4
} subner_status;

typedef struct subner_config subner_config;
typedef struct subner_model subner_model;

SUBNER_API const char* subner_version(void);
SUBNER_API const char* subner_last_error(void);
SUBNER_API void subner_string_free(char* s);

/* Configuration: defaults, optionally overlaid by a `key = value` file. */
SUBNER_API subner_status subner_config_new(subner_config** out);
SUBNER_API subner_status subner_config_load(const char* path,
                                            subner_config** out);
SUBNER_API subner_status subner_config_set(subner_config* config,
                                           const char* key,
                                           const char* value);
SUBNER_API subner_status subner_config_get(const subner_config* config,
                                           const char* key, char** value);
/* Full config in file format. */
SUBNER_API subner_status subner_config_dump(const subner_config* config,
                                            char** text);
SUBNER_API void subner_config_free(subner_config* config);

/* `kind` is "epoch" (a tab-separated epoch log line) or "warning". */
typedef void (*subner_log_fn)(const char* kind, const char* line,
                              void* user);

typedef struct {
  const char* train_path;        /* required */
  const char* dev_path;          /* required */
  const char* lexicon_path;      /* optional */
  const char* word_vectors_path; /* optional */
  unsigned threads;              /* 0 or 1: sequential */
  subner_log_fn log;             /* optional */
  void* log_user;
} subner_train_options;

/* Trains and returns the best-on-dev model. */
SUBNER_API subner_status subner_train(const subner_config* config,
                                      const subner_train_options* options,
                                      subner_model** out);

SUBNER_API subner_status subner_model_save(const subner_model* model,
                                           const char* path);
SUBNER_API subner_status subner_model_load(const char* path,
                                           subner_model** out);
SUBNER_API void subner_model_free(subner_model* model);
/* Config the model was trained with, in file format. */
SUBNER_API subner_status subner_model_config(const subner_model* model,
                                             char** text);

/* Tags one whitespace-tokenized line; output is `token/LABEL` pairs
 * separated by single spaces. An empty line yields an empty string. */
SUBNER_API subner_status subner_tag_line(const subner_model* model,
                                         const char* line, char** out);
/* Tags a corpus file (`token` or `token<TAB>label` lines, blank line
 * between utterances) and writes `token<TAB>predicted` in the same layout. */
SUBNER_API subner_status subner_tag_file(const subner_model* model,
                                         const char* in_path,
                                         const char* out_path);

/* Per-token PRF report of predictions against gold. With `oov` set, the OOV
 * report is appended; the training vocabulary comes from `model` when given,
 * otherwise from the corpus at `train_path`. */
SUBNER_API subner_status subner_eval(const char* pred_path,
                                     const char* gold_path, int oov,
                                     const subner_model* model,
                                     const char* train_path, char** report);

/* Trains every nonempty subset of `units` (comma-separated) with and
 * without word embeddings, plus a word-only model, `repeats` times each.
 * `test_path` may be null. */
SUBNER_API subner_status subner_ablate(const subner_config* config,
                                       const char* units,
                                       const subner_train_options* options,
                                       const char* test_path,
                                       unsigned repeats, char** report);

/* Vocabulary sizes and parameter counts of a trained model. */
SUBNER_API subner_status subner_vocab_stats_model(const subner_model* model,
                                                  char** report);
/* Same, for vocabularies built from a training corpus and lexicon. */
SUBNER_API subner_status subner_vocab_stats_data(const subner_config* config,
                                                 const char* train_path,
                                                 const char* lexicon_path,
                                                 char** report);

#ifdef __cplusplus
}
#endif

#endif /* SUBNER_SUBNER_H_ */
