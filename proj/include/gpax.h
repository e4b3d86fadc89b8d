/* SPDX-License-Identifier: Apache-2.0
 *
 * C API for the gpax library: sparse Legendre surrogates for Gaussian
 * processes and the predictive-control loop built on them. All objects
 * are opaque handles; every function returns a gpax_status and writes
 * results through out-parameters. Strings returned through char** are
 * owned by the caller and must be released with gpax_string_free().
 */
#ifndef GPAX_H
#define GPAX_H

#include <stdint.h>

#if defined(_WIN32)
#define GPAX_API __declspec(dllexport)
#else
#define GPAX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gpax_status {
  GPAX_OK = 0,
  GPAX_ERR_INVALID_ARGUMENT = 1,
  GPAX_ERR_IO = 2,
  GPAX_ERR_PARSE = 3,
  GPAX_ERR_NUMERIC = 4,
  GPAX_ERR_UNKNOWN_EXAMPLE = 5,
  GPAX_ERR_INTERNAL = 6
} gpax_status;

typedef struct gpax_model gpax_model;
typedef struct gpax_trace gpax_trace;

/* Static name of a status code. */
GPAX_API const char* gpax_status_name(gpax_status status);

/* Thread-local message for the most recent failing call. */
GPAX_API const char* gpax_last_error(void);

GPAX_API void gpax_string_free(char* s);

/* ---- models ---- */

GPAX_API gpax_status gpax_model_load(const char* path, gpax_model** out);
GPAX_API gpax_status gpax_model_save(const gpax_model* model,
                                     const char* path);
GPAX_API gpax_status gpax_model_from_json(const char* json, gpax_model** out);
GPAX_API gpax_status gpax_model_to_json(const gpax_model* model, char** out);
GPAX_API void gpax_model_free(gpax_model* model);

GPAX_API gpax_status gpax_model_dimension(const gpax_model* model, int* out);
GPAX_API gpax_status gpax_model_num_terms(const gpax_model* model, int* out);
GPAX_API gpax_status gpax_model_predict(const gpax_model* model,
                                        const double* x, int dim,
                                        double* y_out);

/* ---- fitting ---- */

/* Fits from a key-value config file (see the CLI docs for keys).
 * report_json may be NULL. */
GPAX_API gpax_status gpax_fit(const char* config_path, uint64_t seed,
                              gpax_model** model_out, char** report_json);

/* ---- control ---- */

typedef double (*gpax_plant_fn)(const double* x, int dim, void* user);

/* Runs the control loop from a key-value config file. plant may be
 * NULL (stopping then tests the model prediction), a callback, or the
 * named truth of a built-in example via plant_example. */
GPAX_API gpax_status gpax_control_run(const gpax_model* model,
                                      const char* config_path,
                                      gpax_plant_fn plant, void* user,
                                      const char* plant_example,
                                      gpax_trace** trace_out);

GPAX_API gpax_status gpax_trace_num_steps(const gpax_trace* trace, int* out);
GPAX_API gpax_status gpax_trace_termination(const gpax_trace* trace,
                                            const char** out);
GPAX_API gpax_status gpax_trace_to_csv(const gpax_trace* trace, char** out);
GPAX_API gpax_status gpax_trace_to_json(const gpax_trace* trace, char** out);
GPAX_API void gpax_trace_free(gpax_trace* trace);

/* ---- built-in examples ---- */

/* JSON array of example names. */
GPAX_API gpax_status gpax_example_list(char** names_json);

/* Runs one named example end to end. out_dir/format may be NULL
 * (no artifacts, CSV default). On success *report_json holds the run
 * report; the fitted or loaded model is returned when model_out is
 * non-NULL. */
GPAX_API gpax_status gpax_example_run(const char* name, uint64_t seed,
                                      const char* out_dir, const char* format,
                                      char** report_json,
                                      gpax_model** model_out);

#ifdef __cplusplus
}
#endif

#endif /* GPAX_H */
