/*
 * SPDX-FileCopyrightText: © 2026 soundsmooth contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

/*
 * C interface to the soundsmooth library. Objects are opaque handles owned by
 * the caller and released with the matching *_free function (NULL is accepted
 * everywhere a handle is freed). Every fallible call returns ss_status; on
 * failure ss_last_error() describes the problem for the calling thread.
 * Strings returned through char** are released with ss_string_free.
 */

#ifndef SOUNDSMOOTH_H
#define SOUNDSMOOTH_H

#include <stddef.h>
#include <stdint.h>

#if defined(SOUNDSMOOTH_BUILDING)
#define SS_API __attribute__((visibility("default")))
#else
#define SS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ss_status {
  SS_OK = 0,
  SS_ERR_INVALID_ARGUMENT = 1,
  SS_ERR_DOMAIN = 2,
  SS_ERR_IO = 3,
  SS_ERR_FORMAT = 4,
  SS_ERR_CHECKSUM = 5,
  SS_ERR_NON_MONOTONE = 6,
  SS_ERR_SPEC_MISMATCH = 7,
  SS_ERR_DIMENSION = 8,
  SS_ERR_INTERNAL = 9
} ss_status;

SS_API const char* ss_version(void);
SS_API const char* ss_status_name(ss_status status);
/* Message for the last failing call on this thread; "" if none. */
SS_API const char* ss_last_error(void);
SS_API void ss_string_free(char* s);

/* Parses "3/4", "0.5" or "2" into a reduced fraction. */
SS_API ss_status ss_parse_fraction(const char* text, uint64_t* num, uint64_t* den);

/* ---- 8-bit minifloat ---------------------------------------------------- */

/* Accepts a bit pattern ("1 110 1010", "0b11101010") or a value ("-13", "6.5", "13/4"),
 * the latter rounded to nearest, ties to even. */
SS_API ss_status ss_minifloat_parse(const char* text, uint8_t* bits);
SS_API ss_status ss_minifloat_add(uint8_t a, uint8_t b, uint8_t* out);
SS_API ss_status ss_minifloat_sub(uint8_t a, uint8_t b, uint8_t* out);
/* "s eee mmmm" and exact decimal value, each into a caller buffer of at least 32 bytes. */
SS_API ss_status ss_minifloat_describe(uint8_t bits, char* pattern, size_t pattern_cap, char* value, size_t value_cap);

typedef struct ss_identity_report {
  uint64_t pairs;
  uint64_t always_violations;
  uint64_t near_violations;
  uint64_t commutativity_violations;
} ss_identity_report;

SS_API ss_status ss_minifloat_check_identities(ss_identity_report* out);

/* ---- statistics --------------------------------------------------------- */

SS_API ss_status ss_normal_cdf(double x, double* out);
SS_API ss_status ss_phi_inv(double p, double* out);
SS_API ss_status ss_hoeffding_lower(double alpha, uint64_t n, uint64_t successes, double* out);
SS_API ss_status ss_clopper_pearson_lower(double alpha, uint64_t n, uint64_t successes, double* out);
/* *abstain is set to 1 (and *radius to 0) when p_lower <= 1/2. */
SS_API ss_status ss_certified_radius(double p_lower, double sigma, double* radius, int* abstain);

/* ---- breaking-point tables ---------------------------------------------- */

typedef struct ss_grid_spec {
  uint32_t levels;    /* L */
  uint32_t k;         /* clamp margin in grid steps */
  uint64_t sigma_num; /* sigma in units of intensity / L */
  uint64_t sigma_den;
  uint32_t n_bits;    /* 8, 16, 32 or 64 */
} ss_grid_spec;

/* Margin k = 6 L (ceil(6 sigma) L when sigma > 1). */
SS_API ss_status ss_grid_spec_default(uint32_t levels, uint64_t sigma_num, uint64_t sigma_den, uint32_t n_bits,
                                      ss_grid_spec* out);

typedef struct ss_table ss_table;

SS_API ss_status ss_table_build(const ss_grid_spec* spec, ss_table** out);
SS_API ss_status ss_table_read(const char* path, ss_table** out);
SS_API ss_status ss_table_write(const ss_table* table, const char* path);
SS_API void ss_table_free(ss_table* table);
SS_API ss_status ss_table_spec(const ss_table* table, ss_grid_spec* out);
SS_API ss_status ss_table_size(const ss_table* table, size_t* entries, size_t* ambiguous);
/* Threshold j as (T_j - 1), which always fits in n_bits. */
SS_API ss_status ss_table_entry(const ss_table* table, size_t j, uint64_t* threshold_minus_one, int* ambiguous);
/* Offsets for one uniform value; lo < hi marks a breaking point. */
SS_API ss_status ss_table_draw(const ss_table* table, uint64_t u, int64_t* lo, int64_t* hi);

typedef struct ss_failure_bound {
  double per_draw;
  double per_coordinate;
  double aggregate_failure;
  double aggregate_success;
  uint64_t coordinates;
  char per_coordinate_exact[128];    /* "num/den" */
  char aggregate_success_exact[192];
} ss_failure_bound;

/* table may be NULL, in which case the bound comes from spec alone. */
SS_API ss_status ss_failure_bound_compute(const ss_grid_spec* spec, const ss_table* table, uint64_t dimension,
                                          uint64_t samples, ss_failure_bound* out);
/* *holds = 1 iff bound.per_coordinate <= 2^(e) exactly. */
SS_API ss_status ss_failure_bound_at_most_pow2(const ss_failure_bound* bound, int which, int exponent, int* holds);

/* ---- noise buffers ------------------------------------------------------ */

typedef struct ss_noise ss_noise;

/* Selection (n0 samples, stream 0) and estimation (n samples, stream 1) buffers. */
SS_API ss_status ss_noise_build(const ss_table* table, size_t dimension, uint64_t n0, uint64_t n, uint64_t seed,
                                ss_noise** out);
SS_API ss_status ss_noise_read(const char* path, ss_noise** out);
SS_API ss_status ss_noise_write(const ss_noise* noise, const char* path);
SS_API void ss_noise_free(ss_noise* noise);
SS_API ss_status ss_noise_info(const ss_noise* noise, size_t* dimension, uint64_t* n0, uint64_t* n,
                               uint64_t* breaking_draws);

/* ---- image sets --------------------------------------------------------- */

typedef struct ss_images ss_images;

/* pattern: "uniform" or "graded". */
SS_API ss_status ss_images_generate(const char* pattern, size_t count, size_t dimension, uint32_t levels, uint64_t seed,
                                    ss_images** out);
SS_API ss_status ss_images_read(const char* path, ss_images** out);
SS_API ss_status ss_images_write(const ss_images* images, const char* path);
SS_API void ss_images_free(ss_images* images);
SS_API ss_status ss_images_info(const ss_images* images, size_t* count, size_t* dimension, uint32_t* levels);

/* ---- classifiers -------------------------------------------------------- */

typedef struct ss_classifier ss_classifier;

/* constant:C | fa:A | fai:I:A | ga:FILE[:INDEX] | ha:FILE | m:FILE | threshold:THETA */
SS_API ss_status ss_classifier_parse(const char* text, uint32_t levels, ss_classifier** out);
SS_API void ss_classifier_free(ss_classifier* classifier);

/* ---- certification ------------------------------------------------------ */

typedef enum ss_method { SS_METHOD_UNSOUND = 0, SS_METHOD_SOUND = 1 } ss_method;
typedef enum ss_bound { SS_BOUND_CLOPPER_PEARSON = 0, SS_BOUND_HOEFFDING = 1 } ss_bound;
typedef enum ss_precision { SS_BINARY64 = 0, SS_BINARY32 = 1 } ss_precision;

typedef struct ss_certify_params {
  double sigma;
  uint64_t n0;
  uint64_t n;
  double alpha;
  ss_bound bound;
  ss_precision precision;
  uint64_t seed;
} ss_certify_params;

SS_API void ss_certify_params_default(ss_certify_params* out);

typedef struct ss_outcome {
  size_t index;
  int prediction; /* 0, 1 or -1 for abstain */
  double p_lower;
  double radius;  /* 0 when abstaining */
  uint64_t count0;
  uint64_t count1;
  uint64_t failures;
} ss_outcome;

typedef struct ss_results ss_results;

/* For SS_METHOD_SOUND a table is required; noise may be NULL (drawn from params.seed).
 * radii may be NULL for the default grid. */
SS_API ss_status ss_certify(const ss_classifier* classifier, const ss_images* images, ss_method method,
                            const ss_certify_params* params, const ss_table* table, const ss_noise* noise,
                            const double* radii, size_t radius_count, ss_results** out);
/* Runs both methods on the same inputs. */
SS_API ss_status ss_compare(const ss_classifier* classifier, const ss_images* images, const ss_certify_params* params,
                            const ss_table* table, const ss_noise* noise, const double* radii, size_t radius_count,
                            ss_results** out);
SS_API void ss_results_free(ss_results* results);
SS_API ss_status ss_results_count(const ss_results* results, size_t* count);
SS_API ss_status ss_results_outcome(const ss_results* results, size_t i, ss_outcome* out);
/* Per-image CSV (both methods for a comparison). */
SS_API ss_status ss_results_csv(const ss_results* results, char** out);
/* radius,certified_accuracy (or radius,unsound,sound for a comparison). */
SS_API ss_status ss_results_summary_csv(const ss_results* results, char** out);

/* ---- demonstrations ----------------------------------------------------- */

typedef struct ss_attack_demo_params {
  uint32_t intensity;
  uint32_t levels;
  double sigma;
  uint64_t samples;
  double alpha;
  uint64_t seed;
  ss_precision precision;
  int sound;
} ss_attack_demo_params;

typedef struct ss_attack_demo_result {
  double p_at_zero;
  double p_at_anchor;
  double hoeffding_p;
  double hoeffding_radius;
  double clopper_pearson_p;
  double clopper_pearson_radius;
  int prediction_at_zero;
  double distance;
  int has_sound;
  ss_outcome sound_at_anchor;
} ss_attack_demo_result;

SS_API void ss_attack_demo_params_default(ss_attack_demo_params* out);
SS_API ss_status ss_attack_demo(const ss_attack_demo_params* params, ss_attack_demo_result* out);

typedef struct ss_theorem_demo_params {
  size_t anchors;
  size_t dimension;
  uint32_t levels;
  double sigma;
  uint64_t n0;
  uint64_t samples;
  double alpha;
  uint64_t seed;
  ss_precision precision;
  int sound;
} ss_theorem_demo_params;

typedef struct ss_theorem_demo_result {
  double perturbation_norm;
  size_t anchors;
  size_t flipped;
  size_t unsound_at_least_2;
  size_t sound_covering;
  double min_unsound_radius;
  double max_sound_radius;
  int unsound_all_at_least_2;
  int all_flipped;
  int sound_none_covering;
} ss_theorem_demo_result;

SS_API void ss_theorem_demo_params_default(ss_theorem_demo_params* out);
SS_API ss_status ss_theorem_demo(const ss_theorem_demo_params* params, ss_theorem_demo_result* out);

#ifdef __cplusplus
}
#endif

#endif /* SOUNDSMOOTH_H */
