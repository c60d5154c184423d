/* C interface to the privacy-amplification lab. All objects are opaque
 * handles owned by the caller and released with the matching _free call.
 * Functions return a palab_status; on failure palab_last_error() describes
 * the problem (per thread, valid until the next failing call). */
#ifndef PALAB_PALAB_H
#define PALAB_PALAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(PALAB_BUILDING_LIBRARY)
#define PALAB_API __attribute__((visibility("default")))
#else
#define PALAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum palab_status {
  PALAB_OK = 0,
  PALAB_ERR_VALIDATION = 1,
  PALAB_ERR_DIMENSION = 2,
  PALAB_ERR_DOMAIN = 3,
  PALAB_ERR_RANK = 4,
  PALAB_ERR_RESOURCE = 5,
  PALAB_ERR_EXTRACTION = 6,
  PALAB_ERR_DEGENERATE = 7,
  PALAB_ERR_USAGE = 8,
  PALAB_ERR_NULL_ARGUMENT = 9,
  PALAB_ERR_INTERNAL = 10
} palab_status;

typedef struct palab_config palab_config;
typedef struct palab_report palab_report;
typedef struct palab_state palab_state;

PALAB_API const char* palab_last_error(void);
PALAB_API const char* palab_version(void);
/* Process exit status for a failed call: usage 2, resource 3, otherwise 1. */
PALAB_API int palab_exit_code(palab_status status);
PALAB_API const char* palab_experiment_help(void);

/* Experiment configuration. Keys: experiment, n, theta, delta, epsilon,
 * margin, seed, trials, out, format. */
PALAB_API palab_status palab_config_new(palab_config** out);
PALAB_API palab_status palab_config_load_json(palab_config* config, const char* json_text);
PALAB_API palab_status palab_config_set(palab_config* config, const char* key, const char* value);
PALAB_API void palab_config_free(palab_config* config);

/* Runs the experiment; writes the report file when "out" is set. A report
 * whose checks failed is still returned with PALAB_OK. */
PALAB_API palab_status palab_run(const palab_config* config, palab_report** out);
PALAB_API const char* palab_report_text(const palab_report* report);
PALAB_API int palab_report_passed(const palab_report* report);
PALAB_API int palab_report_exit_code(const palab_report* report);
/* 1 when the report went to the configured "out" file. */
PALAB_API int palab_report_wrote_file(const palab_report* report);
PALAB_API size_t palab_report_failure_count(const palab_report* report);
PALAB_API const char* palab_report_failure(const palab_report* report, size_t index);
PALAB_API void palab_report_free(palab_report* report);

/* States, in the JSON matrix form with "subsystems". */
PALAB_API palab_status palab_state_from_json(const char* json_text, palab_state** out);
PALAB_API palab_status palab_state_to_json(const palab_state* state, char** out);
/* Two-pure-state attack with overlap cos(theta); purified adds the shield. */
PALAB_API palab_status palab_state_theta_attack(double theta, int purified, palab_state** out);
PALAB_API size_t palab_state_dimension(const palab_state* state);
PALAB_API void palab_state_free(palab_state* state);
PALAB_API void palab_string_free(char* s);

PALAB_API palab_status palab_key_rates(const palab_state* psi_abse, double* rate_pa, double* rate_psd);
PALAB_API palab_status palab_diagnose(const palab_state* gamma, double tol, int* eve_marginal,
                                      int* orthogonality);
PALAB_API palab_status palab_epsilon_privacy(const palab_state* rho_abe, double* epsilon);
PALAB_API palab_status palab_distill(const palab_state* psi_abse, unsigned n, unsigned m, uint64_t seed,
                                     double* success_probability, double* privacy_epsilon);

#ifdef __cplusplus
}
#endif

#endif
