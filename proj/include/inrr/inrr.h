/* C interface of the inrr library. All functions return an inrr_status;
 * on failure inrr_last_error() describes the problem (per thread). */
#ifndef INRR_INRR_H
#define INRR_INRR_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define INRR_API __declspec(dllexport)
#else
#define INRR_API __attribute__((visibility("default")))
#endif

typedef enum inrr_status {
  INRR_OK = 0,
  INRR_ERR_INVALID_ARGUMENT = 1,
  INRR_ERR_CONFIG = 2,
  INRR_ERR_NUMERIC = 3,
  INRR_ERR_IO = 4,
  INRR_ERR_INTERNAL = 5
} inrr_status;

typedef struct inrr_config inrr_config;
typedef struct inrr_report inrr_report;

typedef struct inrr_log_row {
  size_t step;
  double observed_mse;
  double unobserved_mse;
  double psnr_unobserved;
  double penalty;
  double effective_rank;
  double wall_seconds;
} inrr_log_row;

INRR_API const char* inrr_version(void);
INRR_API const char* inrr_status_string(inrr_status status);
/* Message of the last failed call on this thread; "" when none. */
INRR_API const char* inrr_last_error(void);

/* Configs. Relative paths inside a loaded file resolve against its directory. */
INRR_API inrr_status inrr_config_load(const char* path, inrr_config** out);
INRR_API inrr_status inrr_config_parse(const char* text, const char* base_dir, inrr_config** out);
/* key is "section.key", e.g. "experiment.seed". */
INRR_API inrr_status inrr_config_set(inrr_config* config, const char* key, const char* value);
/* Copies the value (NUL-terminated) into buf when it fits; *needed gets the
 * required size including the terminator. An unset key yields "". */
INRR_API inrr_status inrr_config_get(const inrr_config* config, const char* key, char* buf, size_t size,
                                     size_t* needed);
INRR_API inrr_status inrr_config_validate(const inrr_config* config);
/* Fully resolved config as INI text; same buffer protocol as inrr_config_get. */
INRR_API inrr_status inrr_config_resolved(const inrr_config* config, char* buf, size_t size, size_t* needed);
INRR_API void inrr_config_free(inrr_config* config);

/* Runs the config's task. */
INRR_API inrr_status inrr_run(const inrr_config* config, inrr_report** out);
/* Runs the config as an ntk_sweep / implicit_bias task regardless of its task key. */
INRR_API inrr_status inrr_sweep(const inrr_config* config, inrr_report** out);
INRR_API inrr_status inrr_bias(const inrr_config* config, inrr_report** out);

INRR_API size_t inrr_report_metric_count(const inrr_report* report);
/* name stays valid until the report is freed. */
INRR_API inrr_status inrr_report_metric(const inrr_report* report, size_t index, const char** name, double* value);
INRR_API inrr_status inrr_report_metric_by_name(const inrr_report* report, const char* name, double* value);
INRR_API size_t inrr_report_artifact_count(const inrr_report* report);
INRR_API inrr_status inrr_report_artifact(const inrr_report* report, size_t index, const char** role,
                                          const char** path);
INRR_API size_t inrr_report_log_length(const inrr_report* report);
INRR_API inrr_status inrr_report_log_row(const inrr_report* report, size_t index, inrr_log_row* out);
INRR_API void inrr_report_free(inrr_report* report);

#ifdef __cplusplus
}
#endif

#endif /* INRR_INRR_H */
