/* C interface to the offloading simulator. Every call returns a status code;
 * on failure sars_last_error() describes what went wrong on this thread. */
#ifndef SARS_SARS_H
#define SARS_SARS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SARS_BUILDING_LIBRARY)
#    define SARS_API __declspec(dllexport)
#  else
#    define SARS_API __declspec(dllimport)
#  endif
#else
#  define SARS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sars_status {
    SARS_OK = 0,
    SARS_ERR_ARGUMENT = 1,   /* null handle, unknown key, bad value */
    SARS_ERR_PARSE = 2,      /* malformed scenario or task file */
    SARS_ERR_VALIDATION = 3, /* well-formed but violates a model rule */
    SARS_ERR_IO = 4,         /* file could not be read or written */
    SARS_ERR_RUNTIME = 5     /* simulation failure */
} sars_status;

typedef struct sars_scenario sars_scenario;
typedef struct sars_report sars_report;
typedef struct sars_sweep sars_sweep;

SARS_API const char* sars_version(void);
SARS_API const char* sars_last_error(void);
SARS_API const char* sars_status_name(sars_status status);

/* Scenarios. */
SARS_API sars_status sars_scenario_default(sars_scenario** out);
SARS_API sars_status sars_scenario_load(const char* path, sars_scenario** out);
SARS_API sars_status sars_scenario_parse(const char* json_text, sars_scenario** out);
SARS_API sars_status sars_scenario_validate(const sars_scenario* scenario);
/* Caller frees *out with sars_string_free. */
SARS_API sars_status sars_scenario_to_json(const sars_scenario* scenario, char** out);
SARS_API void sars_scenario_free(sars_scenario* scenario);
SARS_API void sars_string_free(char* s);

/* Single-run policy selection. Keys: tsp, rsp, pora (on|off), alpha, beta,
 * beta_sign (plus|minus), pora_k, covert_k, seed, tasks_csv (path of a task
 * set to use instead of the generated workload). */
SARS_API sars_status sars_scenario_set(sars_scenario* scenario, const char* key, const char* value);

/* One engine run. debug != 0 enables invariant checking. */
SARS_API sars_status sars_run(const sars_scenario* scenario, int debug, sars_report** out);
SARS_API size_t sars_report_total(const sars_report* report);
SARS_API size_t sars_report_processed(const sars_report* report);
SARS_API double sars_report_tcr(const sars_report* report);
SARS_API size_t sars_report_violations(const sars_report* report);
/* i-th violation message, or NULL. Valid until the report is freed. */
SARS_API const char* sars_report_violation(const sars_report* report, size_t i);
SARS_API sars_status sars_report_write_trace(const sars_report* report, const char* path);
SARS_API sars_status sars_report_write_metrics(const sars_report* report, const char* csv_path);
SARS_API void sars_report_free(sars_report* report);

/* Sweep over every policy cell and seed. seeds/workers of 0 use defaults
 * (scenario seed count; SARS_WORKERS or all cores). Writes metrics.csv and
 * summary.txt under out_dir, plus traces/ when write_traces != 0. */
typedef struct sars_sweep_options {
    int seeds;
    int workers;
    int debug;
    int write_traces;
} sars_sweep_options;

SARS_API sars_status sars_sweep_run(const sars_scenario* scenario, const sars_sweep_options* options,
                                    const char* out_dir, sars_sweep** out);
SARS_API size_t sars_sweep_runs(const sars_sweep* sweep);
SARS_API size_t sars_sweep_violations(const sars_sweep* sweep);
SARS_API void sars_sweep_free(sars_sweep* sweep);

/* Generated task set for `seed` as CSV (id,vehicle,group,release,deadline,workload,size). */
SARS_API sars_status sars_workload_write_csv(const sars_scenario* scenario, uint64_t seed, const char* path);

#ifdef __cplusplus
}
#endif

#endif
