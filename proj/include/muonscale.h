/* muonscale C API: adaptive trust-region scaling for Muon-type optimizers.
 *
 * All entry points are exported from the muonscale shared library with C
 * linkage. Runs are configured by a flat JSON object (the same schema the
 * muonscale CLI uses); results come back as an opaque trace handle that owns
 * the per-iteration rows, named summary statistics, and the canonical CSV
 * rendering. Strings returned through char** are heap-allocated and must be
 * released with ms_string_free.
 */
#ifndef MUONSCALE_H
#define MUONSCALE_H

#include <stddef.h>

#if defined(_WIN32)
#define MS_API __declspec(dllexport)
#else
#define MS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ms_status {
  MS_OK = 0,
  MS_ERR_CHECK_FAILED = 1, /* a check suite reported failures */
  MS_ERR_USAGE = 2,        /* bad configuration or arguments */
  MS_ERR_DIVERGED = 3,     /* non-finite objective during a run */
  MS_ERR_INVARIANT = 4,    /* a runtime invariant assertion failed */
  MS_ERR_IO = 5,           /* file could not be written or read */
  MS_ERR_INTERNAL = 6      /* unexpected failure */
} ms_status;

typedef struct ms_trace ms_trace;

MS_API const char* ms_version(void);
MS_API const char* ms_status_name(ms_status status);

/* Message describing the most recent failure on this thread. */
MS_API const char* ms_last_error(void);

/* Execute one run described by config_json; on success *out_trace owns the
 * result and must be freed with ms_trace_free. */
MS_API ms_status ms_run(const char* config_json, ms_trace** out_trace);

/* Convenience: run and write the CSV in one call. */
MS_API ms_status ms_run_to_csv(const char* config_json, const char* csv_path);

MS_API size_t ms_trace_rows(const ms_trace* trace);
MS_API size_t ms_trace_cols(const ms_trace* trace);
MS_API const char* ms_trace_col_name(const ms_trace* trace, size_t col);

/* Returns 1 and stores the cell when it is set, 0 for an empty cell or
 * out-of-range indices. */
MS_API int ms_trace_cell(const ms_trace* trace, size_t row, size_t col,
                         double* value);

/* Per-run summary statistics, e.g. "f_final", "gap_final",
 * "grad_dual_final", "min_grad_dual_next", "max_dist_from_x0",
 * "halt_streak", "d_final", "grad_evals". Returns 1 when available. */
MS_API int ms_trace_stat(const ms_trace* trace, const char* name,
                         double* value);

MS_API ms_status ms_trace_write_csv(const ms_trace* trace, const char* path);
MS_API ms_status ms_trace_csv_string(const ms_trace* trace, char** out);
MS_API void ms_trace_free(ms_trace* trace);

/* Run an invariant suite: geometry, da, sc, df, practical or all. The report
 * has one pass/fail line per invariant with its worst observed margin.
 * Returns MS_OK when everything passed, MS_ERR_CHECK_FAILED otherwise;
 * *failures_out receives the number of failed checks. */
MS_API ms_status ms_check(const char* suite, char** report_out,
                          int* failures_out);

/* Least-squares line through (log x, log y); inputs must be positive. */
MS_API ms_status ms_slope_fit(const double* xs, const double* ys, size_t n,
                              double* slope, double* intercept,
                              double* r_squared);

MS_API void ms_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* MUONSCALE_H */
