/* bcsim - deterministic simulator for joint communication/sensing and
 * compute offloading in beyond-communication cellular networks.
 *
 * C API over the simulation core. Handles are opaque; every function
 * returns a status code and bcsim_last_error() carries the message of the
 * most recent failure on the calling thread. Strings returned through
 * out-parameters are owned by the caller and released with
 * bcsim_string_free().
 */
#ifndef BCSIM_H
#define BCSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BCSIM_API __declspec(dllexport)
#else
#define BCSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bcsim_status {
  BCSIM_OK = 0,
  BCSIM_ERR_IO = 1,
  BCSIM_ERR_PARSE = 2,
  BCSIM_ERR_VALIDATION = 3,
  BCSIM_ERR_RUNTIME = 4,
  BCSIM_ERR_INVALID_ARGUMENT = 5,
} bcsim_status;

typedef struct bcsim_scenario bcsim_scenario;
typedef struct bcsim_result bcsim_result;

BCSIM_API const char* bcsim_version(void);
BCSIM_API const char* bcsim_status_name(bcsim_status status);

/* Message for the last failing call on this thread; empty string if none. */
BCSIM_API const char* bcsim_last_error(void);

BCSIM_API void bcsim_string_free(char* s);

/* Scenario lifecycle. Loading parses the document; structural and semantic
 * problems are reported by bcsim_scenario_validate, not here (only
 * unreadable files and non-JSON input fail the load). */
BCSIM_API bcsim_status bcsim_scenario_load_file(const char* path,
                                                bcsim_scenario** out);
BCSIM_API bcsim_status bcsim_scenario_load_string(const char* json_text,
                                                  bcsim_scenario** out);
BCSIM_API void bcsim_scenario_free(bcsim_scenario* scenario);

/* Writes the number of violations to *out_count and, when out_text is
 * non-NULL, a newline-separated list (path: rule). Zero violations means
 * the scenario is runnable. */
BCSIM_API bcsim_status bcsim_scenario_validate(const bcsim_scenario* scenario,
                                               size_t* out_count, char** out_text);

typedef struct bcsim_run_options {
  int has_seed;       /* nonzero: use seed below instead of the scenario's */
  uint64_t seed;
  const char* policy; /* "min_latency" | "min_energy" | NULL for default */
  double tick;        /* allocation tick override; <= 0 keeps the default */
} bcsim_run_options;

/* Deterministic run: same scenario + options give byte-identical trace and
 * report text. options may be NULL. */
BCSIM_API bcsim_status bcsim_run(const bcsim_scenario* scenario,
                                 const bcsim_run_options* options,
                                 bcsim_result** out);
BCSIM_API void bcsim_result_free(bcsim_result* result);

BCSIM_API bcsim_status bcsim_result_trace(const bcsim_result* result, char** out_text);
BCSIM_API bcsim_status bcsim_result_report_json(const bcsim_result* result,
                                                char** out_text);
BCSIM_API bcsim_status bcsim_result_report_csv(const bcsim_result* result,
                                               char** out_text);

/* One run per policy with the same seed; out_table receives a TSV table with
 * one row per policy. */
BCSIM_API bcsim_status bcsim_compare(const bcsim_scenario* scenario,
                                     const char* const* policies, size_t n_policies,
                                     const bcsim_run_options* options,
                                     char** out_table);

#ifdef __cplusplus
}
#endif

#endif /* BCSIM_H */
