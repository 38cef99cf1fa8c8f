/* Copyright 2026 The vcem Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libvcem.
 *
 * Every function returns a vcem_status. On failure, vcem_last_error() returns a
 * message describing the most recent error raised on the calling thread; the
 * pointer stays valid until the next failing call on that thread. Objects are
 * opaque handles released with the matching *_destroy function; passing NULL
 * to a destroy function is a no-op.
 */

#ifndef VCEM_VCEM_H_
#define VCEM_VCEM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VCEM_API __declspec(dllexport)
#else
#define VCEM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vcem_status {
  VCEM_OK = 0,
  VCEM_ERR_INVALID_ARGUMENT = 1,
  VCEM_ERR_SIZE_MISMATCH = 2,
  VCEM_ERR_CONFIG = 3,
  VCEM_ERR_RESOURCE_LIMIT = 4,
  VCEM_ERR_NUMERIC = 5,
  VCEM_ERR_IO = 6,
  VCEM_ERR_INTERNAL = 7
} vcem_status;

typedef enum vcem_gradient_method {
  VCEM_GRADIENT_PARAMETER_SHIFT = 0,
  VCEM_GRADIENT_ADJOINT = 1
} vcem_gradient_method;

typedef enum vcem_ghz_variant {
  VCEM_GHZ_NOISELESS = 0,
  VCEM_GHZ_END_PAULI = 1,
  VCEM_GHZ_PER_MOMENT_DEPOL = 2,
  VCEM_GHZ_PER_MOMENT_PAULI = 3
} vcem_ghz_variant;

VCEM_API const char *vcem_version(void);
VCEM_API const char *vcem_last_error(void);
VCEM_API const char *vcem_status_name(vcem_status status);

/* ---- Graph-state circuits ---------------------------------------------- */

typedef struct vcem_circuit vcem_circuit;

/* Builds the native circuit preparing the graph state of `graph_spec`
 * ("line:N", "grid:RxC" or an edge-list path) with coherent errors drawn
 * uniformly from [-coh_mag, coh_mag]. The circuit starts noiseless. */
VCEM_API vcem_status vcem_circuit_create(const char *graph_spec, double coh_mag, uint64_t seed_coh,
                                         vcem_circuit **out);
VCEM_API void vcem_circuit_destroy(vcem_circuit *circuit);

VCEM_API vcem_status vcem_circuit_info(const vcem_circuit *circuit, size_t *num_qubits, size_t *num_params,
                                       size_t *num_moments);
/* Copies the coherent errors; `len` must equal the parameter count. */
VCEM_API vcem_status vcem_circuit_epsilons(const vcem_circuit *circuit, double *out, size_t len);
/* Replaces the coherent errors. */
VCEM_API vcem_status vcem_circuit_set_epsilons(vcem_circuit *circuit, const double *eps, size_t len);
/* Attaches incoherent noise, e.g. "pauli:m=1+2,mag=0.01", "depol:p=0.01",
 * "end:pauli:m=1,mag=0.05" or "none". */
VCEM_API vcem_status vcem_circuit_set_noise(vcem_circuit *circuit, const char *noise_spec, uint64_t seed_inc);

/* Cost of the circuit at theta (density-matrix path when noise is attached). */
VCEM_API vcem_status vcem_cost(const vcem_circuit *circuit, const double *theta, size_t len, double *out);
VCEM_API vcem_status vcem_gradient(const vcem_circuit *circuit, const double *theta, size_t len,
                                   vcem_gradient_method method, double *grad_out);
/* Noisy cost minus its effective end-channel prediction; needs Pauli noise. */
VCEM_API vcem_status vcem_delta_cost(const vcem_circuit *circuit, const double *theta, size_t len, double *out);

/* ---- Two-qubit GHZ closed forms ---------------------------------------- */

/* Closed-form cost with the built-in channel parameters. */
VCEM_API vcem_status vcem_ghz_analytic_cost(vcem_ghz_variant variant, double theta, double epsilon, double *out);
/* The same quantity from a density-matrix simulation. */
VCEM_API vcem_status vcem_ghz_simulated_cost(vcem_ghz_variant variant, double theta, double epsilon, double *out);

/* ---- Experiments --------------------------------------------------------- */

typedef struct vcem_config vcem_config;

/* `experiment` is one of "optimize", "delta-scaling", "ghz-landscape", "twirl-demo". */
VCEM_API vcem_status vcem_config_create(const char *experiment, vcem_config **out);
VCEM_API void vcem_config_destroy(vcem_config *config);
VCEM_API vcem_status vcem_config_set(vcem_config *config, const char *key, const char *value);
VCEM_API vcem_status vcem_config_load(vcem_config *config, const char *path);
/* Key = value text of the whole configuration; release with vcem_string_free. */
VCEM_API vcem_status vcem_config_text(const vcem_config *config, char **out);

typedef void (*vcem_progress_fn)(size_t iteration, double cost, double grad_norm, void *user);

/* Runs the experiment, writing its files into the configured output
 * directory, and returns a JSON summary (release with vcem_string_free).
 * `progress` may be NULL; it is only called by "optimize". */
VCEM_API vcem_status vcem_run(const vcem_config *config, vcem_progress_fn progress, void *user,
                              char **summary_json);

VCEM_API void vcem_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* VCEM_VCEM_H_ */
