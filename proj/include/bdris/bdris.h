/*
 * C interface to the BD-RIS rate simulator.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible call returns a bdris_status; on failure a message for the
 * calling thread is available from bdris_last_error() until the next call.
 * Complex arrays are interleaved (re, im) doubles; matrices are column-major.
 */
#ifndef BDRIS_BDRIS_H
#define BDRIS_BDRIS_H

#include <stddef.h>
#include <stdint.h>

#if defined(BDRIS_BUILDING_LIBRARY)
#define BDRIS_API __attribute__((visibility("default")))
#else
#define BDRIS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bdris_status {
    BDRIS_OK = 0,
    BDRIS_ERR_CONFIG = 1,
    BDRIS_ERR_DIMENSION = 2,
    BDRIS_ERR_DOMAIN = 3,
    BDRIS_ERR_GEOMETRY = 4,
    BDRIS_ERR_CONTRACT = 5,
    BDRIS_ERR_INVARIANT = 6,
    BDRIS_ERR_IO = 7,
    BDRIS_ERR_NULL_ARGUMENT = 8,
    BDRIS_ERR_OUT_OF_RANGE = 9,
    BDRIS_ERR_INTERNAL = 10
} bdris_status;

typedef enum bdris_sweep_kind {
    BDRIS_SWEEP_PT = 0, /* transmit power, dBm */
    BDRIS_SWEEP_K = 1   /* Ricean factor, linear */
} bdris_sweep_kind;

typedef enum bdris_qrot_mode {
    BDRIS_QROT_IDENTITY = 0,
    BDRIS_QROT_RANDOM = 1,
    BDRIS_QROT_ZERO = 2
} bdris_qrot_mode;

typedef enum bdris_audit_injection {
    BDRIS_INJECT_NONE = 0,
    BDRIS_INJECT_ASYMMETRIC_THETA = 1,
    BDRIS_INJECT_FLIPPED_DELTA = 2
} bdris_audit_injection;

typedef struct bdris_config bdris_config;
typedef struct bdris_results bdris_results;
typedef struct bdris_audit_report bdris_audit_report;

typedef struct bdris_result_row {
    const char* scheme;    /* static string, valid for the library lifetime */
    const char* sweep_var; /* "pt_dbm" or "ricean_k" */
    double sweep_value;
    int32_t trial;
    uint64_t seed;
    double rate_bits;
} bdris_result_row;

BDRIS_API const char* bdris_version(void);
BDRIS_API const char* bdris_last_error(void);
BDRIS_API const char* bdris_status_name(bdris_status status);

/* Configuration. A config created from defaults describes the reference scenario. */
BDRIS_API bdris_status bdris_config_default(bdris_config** out);
BDRIS_API bdris_status bdris_config_load(const char* path, bdris_config** out);
BDRIS_API bdris_status bdris_config_parse(const char* json_text, bdris_config** out);
BDRIS_API void bdris_config_free(bdris_config* cfg);
BDRIS_API bdris_status bdris_config_set_trials(bdris_config* cfg, int32_t trials);
BDRIS_API bdris_status bdris_config_set_seed(bdris_config* cfg, uint64_t seed);
BDRIS_API bdris_status bdris_config_set_threads(bdris_config* cfg, uint32_t threads);
/* Writes the normalized JSON document; *len receives the size without the terminator. */
BDRIS_API bdris_status bdris_config_to_json(const bdris_config* cfg, char* buf, size_t cap, size_t* len);

/* Sweeps. `schemes` is a comma separated list, or NULL for every scheme. */
BDRIS_API bdris_status bdris_run_sweep(const bdris_config* cfg, bdris_sweep_kind kind, const char* schemes,
                                       bdris_results** out);
BDRIS_API void bdris_results_free(bdris_results* res);
BDRIS_API size_t bdris_results_count(const bdris_results* res);
BDRIS_API bdris_status bdris_results_row(const bdris_results* res, size_t index, bdris_result_row* out);
BDRIS_API bdris_status bdris_results_write_csv(const bdris_results* res, const char* path);
BDRIS_API bdris_status bdris_results_write_summary_csv(const bdris_results* res, const char* path);

/* Invariant audit. quick != 0 runs reduced instance counts. */
BDRIS_API bdris_status bdris_audit_run(const bdris_config* cfg, uint64_t seed, int quick,
                                       bdris_audit_injection inject, bdris_audit_report** out);
BDRIS_API void bdris_audit_report_free(bdris_audit_report* rep);
BDRIS_API int bdris_audit_report_passed(const bdris_audit_report* rep);
BDRIS_API const char* bdris_audit_report_text(const bdris_audit_report* rep);

/* Numerical entry points. */

/* Closed-form BD-RIS for length-m vectors f_d, g_a; writes m*m complex entries to theta_out. */
BDRIS_API bdris_status bdris_optimal_bdris(const double* f_d, const double* g_a, size_t m, double theta_opt,
                                           bdris_qrot_mode qrot, uint64_t qrot_seed, double* theta_out);

/* log2 det(I + H R H^H / sigma_sq) for H n_r x n_t and R n_t x n_t. */
BDRIS_API bdris_status bdris_achievable_rate(const double* h, size_t n_r, size_t n_t, const double* r_xx,
                                             double sigma_sq, double* rate_out);

#ifdef __cplusplus
}
#endif

#endif /* BDRIS_BDRIS_H */
