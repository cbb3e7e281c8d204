/*
 * Copyright 2026 The dcwit Authors
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
 * C interface to libdcwit: prepare-and-measure dimension witnesses for the
 * delayed-choice interferometer.
 *
 * Conventions:
 *  - Every fallible call returns a dcwit_status. On failure the outputs are
 *    untouched and dcwit_last_error() / dcwit_last_error_json() describe the
 *    failure for the calling thread.
 *  - Objects are opaque handles created by dcwit_*_create / producing calls
 *    and released with the matching dcwit_*_free. Free functions accept NULL.
 *  - Strings returned through char** are heap allocated; release them with
 *    dcwit_string_free.
 *  - Indices are zero-based. Phases are radians.
 */

#ifndef DCWIT_H
#define DCWIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(DCWIT_BUILDING_LIBRARY)
#define DCWIT_API __attribute__((visibility("default")))
#else
#define DCWIT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dcwit_status {
    DCWIT_OK = 0,
    DCWIT_ERR_NORMALIZATION = 1,
    DCWIT_ERR_RANGE = 2,
    DCWIT_ERR_SHAPE = 3,
    DCWIT_ERR_INDEX = 4,
    DCWIT_ERR_INVALID_INPUT = 5,
    DCWIT_ERR_CAP_EXCEEDED = 6,
    DCWIT_ERR_EMPTY_SETTING = 7,
    DCWIT_ERR_PARSE = 8,
    DCWIT_ERR_VALIDATION = 9,
    DCWIT_ERR_UNKNOWN_KEY = 10,
    DCWIT_ERR_IO = 11,
    DCWIT_ERR_NULL_ARGUMENT = 100,
    DCWIT_ERR_INTERNAL = 101
} dcwit_status;

typedef enum dcwit_policy {
    DCWIT_POLICY_POST_SELECTED = 0,
    DCWIT_POLICY_INCLUSIVE = 1
} dcwit_policy;

typedef enum dcwit_witness { DCWIT_WITNESS_W2 = 0, DCWIT_WITNESS_IDW = 1 } dcwit_witness;

typedef enum dcwit_accounting {
    DCWIT_ACCOUNTING_PER_TRIGGER = 0,
    DCWIT_ACCOUNTING_PER_PAIR = 1
} dcwit_accounting;

typedef enum dcwit_x_selection {
    DCWIT_X_ROUND_ROBIN = 0,
    DCWIT_X_UNIFORM = 1
} dcwit_x_selection;

typedef struct dcwit_device {
    double eta;
    double t_a;
    double t_b;
    double visibility;
    dcwit_policy policy;
} dcwit_device;

typedef struct dcwit_sim_options {
    dcwit_accounting accounting;
    dcwit_x_selection x_selection;
    unsigned threads;
} dcwit_sim_options;

/* Witness value with optional maximizing phases (has_config != 0). */
typedef struct dcwit_witness_result {
    dcwit_witness witness;
    double value;
    double std_error;
    int degenerate;
    int has_config;
    size_t n_x;
    size_t n_y;
    double phi[4];
    double sigma[2];
} dcwit_witness_result;

typedef struct dcwit_sweep_summary {
    double max_value;
    double fraction_above_3;
    uint64_t n_tuples;
    uint64_t n_above_3;
    double argmax_phases[3];
} dcwit_sweep_summary;

typedef struct dcwit_table dcwit_table;
typedef struct dcwit_ledger dcwit_ledger;
typedef struct dcwit_config dcwit_config;

DCWIT_API const char *dcwit_version(void);
DCWIT_API const char *dcwit_status_name(dcwit_status status);
DCWIT_API const char *dcwit_last_error(void);
/* {"status":"error","error":{"type","module","operation","cause"}} */
DCWIT_API const char *dcwit_last_error_json(void);
DCWIT_API void dcwit_string_free(char *text);

/* Ideal, lossless device with post-selection. */
DCWIT_API dcwit_device dcwit_device_ideal(void);

/* ---- probability tables ------------------------------------------------ */

/* p0/p1 are laid out as [x * n_y + y]; the table is validated. */
DCWIT_API dcwit_status dcwit_table_create(size_t n_x, size_t n_y, const double *p0,
                                          const double *p1, dcwit_table **out);
DCWIT_API dcwit_status dcwit_table_ideal(const double *phi, size_t n_x,
                                         const double *sigma, size_t n_y,
                                         dcwit_table **out);
DCWIT_API dcwit_status dcwit_table_lossy(const double *phi, size_t n_x,
                                         const double *sigma, size_t n_y,
                                         const dcwit_device *device, dcwit_table **out);
DCWIT_API dcwit_status dcwit_table_from_csv(const char *text, dcwit_table **out);
DCWIT_API dcwit_status dcwit_table_from_json(const char *text, dcwit_table **out);
DCWIT_API void dcwit_table_free(dcwit_table *table);

DCWIT_API dcwit_status dcwit_table_shape(const dcwit_table *table, size_t *n_x,
                                         size_t *n_y);
DCWIT_API dcwit_status dcwit_table_get(const dcwit_table *table, size_t b, size_t x,
                                       size_t y, double *out);
DCWIT_API dcwit_status dcwit_table_expectation(const dcwit_table *table, size_t x,
                                               size_t y, double *out);
DCWIT_API dcwit_status dcwit_table_to_csv(const dcwit_table *table, char **out);
DCWIT_API dcwit_status dcwit_table_to_json(const dcwit_table *table, char **out);

/* ---- witnesses and bounds ---------------------------------------------- */

/* Signed determinant; the witness statistic is its absolute value. */
DCWIT_API dcwit_status dcwit_det_w2(const dcwit_table *table, double *out);
DCWIT_API dcwit_status dcwit_i_dw(const dcwit_table *table, double *out);

/* Maximum over deterministic strategies with messages of dimension `dim`. */
DCWIT_API dcwit_status dcwit_classical_max(dcwit_witness witness, size_t dim,
                                           double *out);
DCWIT_API dcwit_status dcwit_correlated_det_search(size_t n_components,
                                                   size_t restarts, uint64_t seed,
                                                   double *out);
DCWIT_API dcwit_status dcwit_min_retrocausality(double i_dw_value, double *out);

/* fixed_sigma: two phases, or NULL to optimize the measurement phases too. */
DCWIT_API dcwit_status dcwit_maximize_quantum(dcwit_witness witness,
                                              const double *fixed_sigma, size_t grid_n,
                                              size_t starts, uint64_t seed,
                                              dcwit_witness_result *out);

/* ---- simulation -------------------------------------------------------- */

/* options may be NULL for round-robin x, per-trigger accounting, 1 thread. */
DCWIT_API dcwit_status dcwit_run_experiment(const double *phi, size_t n_x,
                                            const double *sigma, size_t n_y,
                                            const dcwit_device *device, uint64_t trials,
                                            uint64_t seed,
                                            const dcwit_sim_options *options,
                                            dcwit_ledger **out);
DCWIT_API dcwit_status dcwit_ledger_from_csv(const char *text, dcwit_ledger **out);
DCWIT_API void dcwit_ledger_free(dcwit_ledger *ledger);
DCWIT_API dcwit_status dcwit_ledger_shape(const dcwit_ledger *ledger, size_t *n_x,
                                          size_t *n_y);
DCWIT_API dcwit_status dcwit_ledger_counts(const dcwit_ledger *ledger, size_t x, size_t y,
                                           uint64_t *trigger, uint64_t *d0, uint64_t *d1,
                                           uint64_t *lost);
DCWIT_API dcwit_status dcwit_ledger_to_csv(const dcwit_ledger *ledger, char **out);
DCWIT_API dcwit_status dcwit_estimate_table(const dcwit_ledger *ledger,
                                            dcwit_policy policy, dcwit_table **out);
DCWIT_API dcwit_status dcwit_witness_stderr(const dcwit_ledger *ledger,
                                            dcwit_witness witness, dcwit_policy policy,
                                            dcwit_witness_result *out);

/*
 * I_DW histogram over every tuple of grid phases. device == NULL selects the
 * analytic source; otherwise each grid point is simulated with
 * trials_per_setting runs. counts may be NULL or hold `bins` entries.
 */
DCWIT_API dcwit_status dcwit_sweep_idw(const double *grid, size_t grid_n,
                                       const double *sigma, const dcwit_device *device,
                                       uint64_t trials_per_setting, uint64_t seed,
                                       size_t bins, dcwit_sweep_summary *summary,
                                       uint64_t *counts);

/* ---- run configuration and commands ------------------------------------ */

DCWIT_API dcwit_status dcwit_config_create(dcwit_config **out);
DCWIT_API dcwit_status dcwit_config_load(const char *path, dcwit_config **out);
/* value is read as JSON when it parses, as a string otherwise. */
DCWIT_API dcwit_status dcwit_config_set(dcwit_config *config, const char *key,
                                        const char *value);
DCWIT_API dcwit_status dcwit_config_effective_json(const dcwit_config *config,
                                                   char **out);
DCWIT_API void dcwit_config_free(dcwit_config *config);

/*
 * command: predict, bounds, optimize, simulate or sweep. Writes artifacts
 * into the configured "out" directory and returns the one-line JSON summary.
 */
DCWIT_API dcwit_status dcwit_dispatch(const dcwit_config *config, const char *command,
                                      char **summary_json);

#ifdef __cplusplus
}
#endif

#endif /* DCWIT_H */
