/* C interface to the gwborder library.
 *
 * Every fallible call returns a gwb_status. On failure, gwb_last_error()
 * holds a message for the calling thread until its next failing call.
 * Objects returned through out-pointers are owned by the caller and released
 * with the matching *_free function. Passing NULL to a *_free function is a
 * no-op. */
#ifndef GWBORDER_H
#define GWBORDER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define GWB_API __attribute__((visibility("default")))
#else
#define GWB_API
#endif

typedef enum gwb_status {
  GWB_OK = 0,
  GWB_ERR_INVALID = 2,
  GWB_ERR_MISMATCH = 3,
  GWB_ERR_INSUFFICIENT = 4,
  GWB_ERR_NOT_IN_KSTAR = 5,
  GWB_ERR_DOMAIN = 6,
  GWB_ERR_INTERNAL = 7
} gwb_status;

typedef enum gwb_format { GWB_FORMAT_CSV = 0, GWB_FORMAT_JSON = 1 } gwb_format;

typedef struct gwb_family gwb_family;
typedef struct gwb_report gwb_report;
typedef struct gwb_oracle gwb_oracle;
typedef struct gwb_string gwb_string;

GWB_API const char* gwb_version(void);
GWB_API const char* gwb_last_error(void);

/* Caps worker threads for every later call; 0 restores the hardware default.
 * Results never depend on it. */
GWB_API void gwb_set_threads(unsigned threads);

/* Text owned by the string object. */
GWB_API const char* gwb_string_data(const gwb_string* s);
GWB_API size_t gwb_string_size(const gwb_string* s);
GWB_API void gwb_string_free(gwb_string* s);

/* cayley, plane, binary, motzkin, unary. */
GWB_API gwb_status gwb_family_builtin(const char* name, gwb_family** out);
/* {"coeffs": ["1","0","1"], "egf": false, "name": "..."} */
GWB_API gwb_status gwb_family_from_json(const char* text, gwb_family** out);
GWB_API void gwb_family_free(gwb_family* fam);
GWB_API const char* gwb_family_name(const gwb_family* fam);
GWB_API unsigned gwb_family_span(const gwb_family* fam);

typedef struct gwb_apex_info {
  double tau;
  double rho;
  double psi_tau;
  double sigma_tau;
  unsigned span;
} gwb_apex_info;

/* GWB_ERR_NOT_IN_KSTAR when psi has no apex. */
GWB_API gwb_status gwb_apex(const gwb_family* fam, gwb_apex_info* out);
GWB_API gwb_status gwb_limit_constant(const gwb_family* fam, unsigned k, double* out);
/* A_n^(k) / A_n as "p/q". */
GWB_API gwb_status gwb_exact_ratio(const gwb_family* fam, unsigned k, size_t n, gwb_string** out);
/* Coefficient n of g_k (k = 0 gives g) as "p/q", from a series cut at n. */
GWB_API gwb_status gwb_series_coeff(const gwb_family* fam, unsigned k, size_t n, gwb_string** out);

typedef struct gwb_gw_config {
  size_t target_n;
  unsigned k;
  uint64_t samples;      /* accepted-sample budget */
  uint64_t max_attempts; /* 0: automatic */
  uint64_t seed;
  int has_t; /* nonzero: use t, else the default tilt */
  double t;
  size_t node_cap;    /* 0: 10 * target_n */
  size_t exact_limit; /* attach the exact ratio when target_n <= this */
} gwb_gw_config;

GWB_API void gwb_gw_config_init(gwb_gw_config* cfg);

typedef struct gwb_estimate {
  double t;
  double p_hat; /* NaN when nothing was accepted */
  double ci95;
  uint64_t accepted;
  uint64_t attempts;
  int insufficient;
  double mean_protected;
  double mean_protected_ci95;
  double mean_protected_rooted;
  double mean_protected_rooted_ci95;
  int has_limit;
  double limit;
} gwb_estimate;

/* Runs rejection sampling. Succeeds with insufficient set when the attempt
 * budget runs out first. */
GWB_API gwb_status gwb_simulate(const gwb_family* fam, const gwb_gw_config* cfg, gwb_report** out);
GWB_API gwb_status gwb_report_estimate(const gwb_report* report, gwb_estimate* out);
GWB_API void gwb_report_free(gwb_report* report);

/* Enumerates every tree of size <= n_max (at most 14). With dump_path set,
 * writes one JSON line per tree there. */
GWB_API gwb_status gwb_oracle_run(const gwb_family* fam, size_t n_max, unsigned k, const char* dump_path,
                                  gwb_oracle** out);
GWB_API int gwb_oracle_ok(const gwb_oracle* oracle);
GWB_API void gwb_oracle_free(gwb_oracle* oracle);

/* Rendered command output: CSV with a header row, or a JSON document tagged
 * "schema": "gw-border/1". */
GWB_API gwb_status gwb_render_apex(const gwb_family* fam, gwb_format format, gwb_string** out);
GWB_API gwb_status gwb_render_coeffs(const gwb_family* fam, unsigned k, size_t n_max, gwb_format format,
                                     gwb_string** out);
GWB_API gwb_status gwb_render_limit(const gwb_family* fam, unsigned k, gwb_format format, gwb_string** out);
GWB_API gwb_status gwb_render_simulate(const gwb_report* report, gwb_format format, gwb_string** out);
GWB_API gwb_status gwb_render_mean_protected(const gwb_report* report, gwb_format format, gwb_string** out);
GWB_API gwb_status gwb_render_oracle(const gwb_oracle* oracle, gwb_format format, gwb_string** out);

#ifdef __cplusplus
}
#endif

#endif
