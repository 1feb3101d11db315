/* Copyright 2026 The fdisc Authors
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

/* C interface to the fdisc feature-discretization library.
 *
 * Every function returns a status code (FDISC_OK on success); on failure
 * fdisc_last_error() describes what went wrong (the message is thread-local
 * and valid until the next failing call on the same thread). Objects are
 * opaque handles created and destroyed by the library.
 *
 * Configuration-heavy entry points take JSON documents; the schemas are
 * documented in the project README and mirror the CLI's config files.
 */

#ifndef FDISC_FDISC_H
#define FDISC_FDISC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define FDISC_OK 0
#define FDISC_ERR_INVALID 1    /* bad argument / usage */
#define FDISC_ERR_PARSE 2      /* malformed file or document */
#define FDISC_ERR_STRUCTURE 3  /* shape mismatch (columns, indices) */
#define FDISC_ERR_CONFIG 4     /* invalid configuration */
#define FDISC_ERR_DEGENERATE 5 /* single-class labels etc. */
#define FDISC_ERR_IO 6         /* file system */
#define FDISC_ERR_MISMATCH 7   /* encoder/model hash mismatch */
#define FDISC_ERR_VIOLATION 8  /* a verified property failed */
#define FDISC_ERR_INTERNAL 9

typedef struct fdisc_dataset fdisc_dataset;
typedef struct fdisc_encoder fdisc_encoder;
typedef struct fdisc_encoded fdisc_encoded;
typedef struct fdisc_model fdisc_model;

const char* fdisc_version(void);
const char* fdisc_last_error(void);

/* ---- datasets ---- */

/* CSV: comma separated, no header, binary label first. */
int fdisc_dataset_load_csv(const char* path, fdisc_dataset** out);

/* spec_json: {"generator":"linear|piecewise|smooth_nonlinear","fields":N,
 *             "rows":N,"sigma":S,"seed":N,"name":"..."} */
int fdisc_dataset_synthetic(const char* spec_json, fdisc_dataset** out);

int fdisc_dataset_rows(const fdisc_dataset* d, size_t* out);
int fdisc_dataset_fields(const fdisc_dataset* d, size_t* out);

/* spec_json: {"train":0.8,"valid":0.1,"test":0.1,"ratio":1.0,"seed":N} */
int fdisc_dataset_split(const fdisc_dataset* d, const char* spec_json, fdisc_dataset** train,
                        fdisc_dataset** valid, fdisc_dataset** test);

void fdisc_dataset_free(fdisc_dataset* d);

/* ---- encoders ---- */

/* spec_json: {"kind":"cd|lle","granularity":N,
 *             "strategy":"equal_frequency|equal_width","missing_bin":false} */
int fdisc_encoder_fit(const fdisc_dataset* train, const char* spec_json, fdisc_encoder** out);

/* spec_json: {"granularities":[...],"strategy":"...","missing_bin":false,"seed":N} */
int fdisc_encoder_fit_mgd(const fdisc_dataset* train, const fdisc_dataset* valid,
                          const char* spec_json, fdisc_encoder** out);

int fdisc_encoder_save(const fdisc_encoder* e, const char* path);
int fdisc_encoder_load(const char* path, fdisc_encoder** out);

/* Embedding-side parameter total at the given embedding dimension. */
int fdisc_encoder_params(const fdisc_encoder* e, size_t embedding_dim, size_t* out);

/* Writes the per-field bin boundaries as a versioned text document. */
int fdisc_encoder_binspec_text(const fdisc_encoder* e, char** out);

int fdisc_encoder_encode(const fdisc_encoder* e, const fdisc_dataset* d, fdisc_encoded** out);
void fdisc_encoder_free(fdisc_encoder* e);

/* ---- encoded data ---- */

/* "label index:weight index:weight ..." one row per line. */
int fdisc_encoded_dump(const fdisc_encoded* e, const char* path);
void fdisc_encoded_free(fdisc_encoded* e);

/* ---- models ---- */

/* spec_json: {"kind":"lr|dnn","optimizer":"sgd|adagrad","learning_rate":F,
 *             "epochs":N,"batch_size":N,"l2":F,"seed":N,"patience":N,
 *             "embedding_dim":N,"hidden":[..]}   (last two: dnn only) */
int fdisc_train(const fdisc_encoded* train, const fdisc_encoded* valid, const char* spec_json,
                fdisc_model** out);

/* Scores a dataset and reports the ROC AUC (in [0,1]). */
int fdisc_model_auc(const fdisc_model* m, const fdisc_encoded* data, double* auc_out);

int fdisc_model_save(const fdisc_model* m, const char* path);
int fdisc_model_load(const char* path, uint64_t expected_encoder_hash, fdisc_model** out);
void fdisc_model_free(fdisc_model* m);

/* ---- grid runs and reports ---- */

/* config_json: an fdisc-experiment v1 document (see README). table_out and
 * csv_out receive malloc'd strings (free with fdisc_string_free); pass NULL
 * for whichever you do not need. Returns FDISC_ERR_DEGENERATE if any cell
 * failed while the rest of the grid still ran. */
int fdisc_experiment_run(const char* config_json, char** csv_out, char** table_out);

/* config_json: an fdisc-simulate v1 document, or NULL for the default
 * campaign. csv_out/summary_out as above. violations_out (may be NULL)
 * receives the number of failed checks; the return code is
 * FDISC_ERR_VIOLATION when it is nonzero. */
int fdisc_simulate_run(const char* config_json, char** csv_out, char** summary_out,
                       size_t* violations_out);

/* Embedding-parameter totals from a declarative description (no data or
 * training involved; MGD rows report the pre-selection total).
 * config_json: {"fields":N,"embedding_dim":D,"missing_bin":false,
 *               "encoders":[{"kind":"lle","granularity":10},
 *                           {"kind":"mgd","granularities":[10,100]}]} */
int fdisc_params_table(const char* config_json, char** csv_out);

void fdisc_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FDISC_FDISC_H */
