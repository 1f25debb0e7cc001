/* C interface to the bellsim library.
 *
 * All objects are opaque handles created and released through this API.
 * Functions return BELLSIM_OK on success; on failure they return an error
 * code and leave a human-readable message retrievable (per thread) through
 * bellsim_last_error(). Strings returned through char** outputs are owned by
 * the caller and must be released with bellsim_string_free().
 */
#ifndef BELLSIM_C_H
#define BELLSIM_C_H

#include <stddef.h>

#if defined(_WIN32)
#define BELLSIM_API __declspec(dllexport)
#else
#define BELLSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bellsim_status {
  BELLSIM_OK = 0,
  BELLSIM_ERROR_INVALID_ARGUMENT = 1,
  BELLSIM_ERROR_CONFIG = 2,
  BELLSIM_ERROR_RUNTIME = 3,
  BELLSIM_ERROR_INTERNAL = 4
} bellsim_status;

typedef struct bellsim_state bellsim_state;
typedef struct bellsim_circuit bellsim_circuit;
typedef struct bellsim_distribution bellsim_distribution;
typedef struct bellsim_density_matrix bellsim_density_matrix;
typedef struct bellsim_result bellsim_result;

BELLSIM_API const char* bellsim_version(void);

/* Message for the most recent failure on the calling thread; empty string if
 * none. Valid until the next failing call on the same thread. */
BELLSIM_API const char* bellsim_last_error(void);

BELLSIM_API void bellsim_string_free(char* s);

/* -------------------------------------------------------------- states --- */

/* Named input state on the input paths of `circuit`: "phi+", "phi-", "psi+",
 * "psi-", "ghz+", "ghz-", or a per-party polarization string over HVDARL
 * such as "DD" or "DAD". */
BELLSIM_API bellsim_status bellsim_state_named(const bellsim_circuit* circuit,
                                               const char* name,
                                               bellsim_state** out_state);

BELLSIM_API bellsim_status bellsim_state_norm(const bellsim_state* state, double* out_norm);
BELLSIM_API bellsim_status bellsim_state_json(const bellsim_state* state, char** out_json);
BELLSIM_API void bellsim_state_free(bellsim_state* state);

/* ------------------------------------------------------------ circuits --- */

/* scheme: "standard", "symmetric" or "ghz". parties is ignored unless the
 * scheme is "ghz" (then parties >= 2). gamma is the wavepacket overlap. */
BELLSIM_API bellsim_status bellsim_circuit_create(const char* scheme, int parties,
                                                  double gamma,
                                                  bellsim_circuit** out_circuit);

BELLSIM_API bellsim_status bellsim_circuit_topology_json(const bellsim_circuit* circuit,
                                                         char** out_json);
BELLSIM_API void bellsim_circuit_free(bellsim_circuit* circuit);

/* ----------------------------------------------------------------- run --- */

/* Output state of the full interferometer for `input`. */
BELLSIM_API bellsim_status bellsim_circuit_run(const bellsim_circuit* circuit,
                                               const bellsim_state* input,
                                               bellsim_state** out_state);

/* Detector outcome distribution of the full interferometer for `input`. */
BELLSIM_API bellsim_status bellsim_measure(const bellsim_circuit* circuit,
                                           const bellsim_state* input,
                                           bellsim_distribution** out_distribution);

/* Probability of a named pattern such as "D13" or "D11"; 0 if absent. */
BELLSIM_API bellsim_status bellsim_distribution_probability(
    const bellsim_distribution* distribution, const char* pattern, double* out_probability);
BELLSIM_API bellsim_status bellsim_distribution_csv(const bellsim_distribution* distribution,
                                                    char** out_csv);
BELLSIM_API bellsim_status bellsim_distribution_json(const bellsim_distribution* distribution,
                                                     char** out_json);
BELLSIM_API void bellsim_distribution_free(bellsim_distribution* distribution);

/* Runs the preparation part of the interferometer, post-selects on one photon
 * per output path and returns the heralded polarization density matrix along
 * with the heralding probability. When the projection never succeeds,
 * *out_rho is NULL and *out_probability is 0. */
BELLSIM_API bellsim_status bellsim_herald(const bellsim_circuit* circuit,
                                          const bellsim_state* input,
                                          bellsim_density_matrix** out_rho,
                                          double* out_probability);

/* ------------------------------------------------------------- metrics --- */

/* target: "phi+", "phi-", "psi+", "psi-", "ghz+", "ghz-" (matching size). */
BELLSIM_API bellsim_status bellsim_density_matrix_fidelity(const bellsim_density_matrix* rho,
                                                           const char* target, double* out);
BELLSIM_API bellsim_status bellsim_density_matrix_concurrence(const bellsim_density_matrix* rho,
                                                              double* out);
BELLSIM_API bellsim_status bellsim_density_matrix_json(const bellsim_density_matrix* rho,
                                                       char** out_json);
BELLSIM_API void bellsim_density_matrix_free(bellsim_density_matrix* rho);

/* --------------------------------------------------------- experiments --- */

/* Runs a whole experiment from a JSON config document (see the library
 * documentation for the schema) and returns metrics plus named artifacts. */
BELLSIM_API bellsim_status bellsim_run_experiment(const char* config_json,
                                                  bellsim_result** out_result);

BELLSIM_API const char* bellsim_result_metrics_json(const bellsim_result* result);
BELLSIM_API size_t bellsim_result_artifact_count(const bellsim_result* result);
BELLSIM_API const char* bellsim_result_artifact_name(const bellsim_result* result, size_t index);
BELLSIM_API const char* bellsim_result_artifact_content(const bellsim_result* result,
                                                        size_t index);
BELLSIM_API void bellsim_result_free(bellsim_result* result);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BELLSIM_C_H */
