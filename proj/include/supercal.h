/* C API of the supercaloric-function laboratory.
 *
 * All entry points return a status code; results travel through out
 * parameters. Heap objects come back as opaque handles with explicit
 * destructors, strings as malloc'd buffers released with sc_string_free.
 * sc_last_error_message() describes the most recent failure on the calling
 * thread.
 */
#ifndef SUPERCAL_H
#define SUPERCAL_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sc_status {
  SC_OK = 0,
  SC_ERR_INVALID_ARGUMENT,
  SC_ERR_NON_ITERABLE,
  SC_ERR_CAP_EXCEEDED,
  SC_ERR_UNDEFINED_POINT,
  SC_ERR_DEGENERATE_CONSTANT,
  SC_ERR_NONPOSITIVE_FACTOR,
  SC_ERR_QUADRATURE_FAILURE,
  SC_ERR_BRACKET_FAILURE,
  SC_ERR_STEP_TOO_LARGE,
  SC_ERR_PICARD_DIVERGENCE,
  SC_ERR_SINGULAR_DIFFUSIVITY,
  SC_ERR_GRID_MISMATCH,
  SC_ERR_PROJECTION_STALL,
  SC_ERR_PRECONDITION,
  SC_ERR_CONTAINMENT,
  SC_ERR_NOT_SOLUTION,
  SC_ERR_NOT_SUPERSOLUTION,
  SC_ERR_EMPTY_PROBE_LIST,
  SC_ERR_NON_EVALUABLE,
  SC_ERR_INCONSISTENT_VERDICTS,
  SC_ERR_IO,
  SC_ERR_BAD_CONFIG,
  SC_ERR_INTERNAL
} sc_status;

const char* sc_status_name(sc_status status);
const char* sc_last_error_message(void);
void sc_string_free(char* s);

/* ---- exponents ---- */

/* JSON: {lambda, q_barenblatt, q_gradient, s_critical, g_critical, ...}. */
sc_status sc_exponent_table_json(int n, double p, char** out_json);

/* JSON: {s0, steps, first_ge_one, closed_form_check}. */
sc_status sc_moser_trace_json(int n, double p, double s0, int cap, char** out_json);

/* ---- closed forms ---- */

typedef struct sc_family sc_family;

/* spec_json: {"family":"sbb|dbb|ips|power", "n":int, "p":num,
 *             "c":num?, "q":num?, "zero_extend":bool?} */
sc_status sc_family_create_json(const char* spec_json, sc_family** out_family);
void sc_family_destroy(sc_family* family);

typedef struct sc_eval_result {
  double value;
  double radial_gradient;
  double time_derivative;
  double flux_divergence;
  double residual;
  /* per-field tags: 0 finite, 1 +inf, 2 undefined (value fields above hold
   * garbage when the tag is nonzero) */
  uint8_t value_tag;
  uint8_t gradient_tag;
  uint8_t time_derivative_tag;
  uint8_t flux_divergence_tag;
  uint8_t residual_tag;
} sc_eval_result;

sc_status sc_family_evaluate(const sc_family* family, double radius, double t,
                             sc_eval_result* out);

sc_status sc_ips_constant(int n, double p, double* out);
sc_status sc_power_constant(int n, double p, double q, double* out);

/* JSON: {c, time_samples, masses, max_relative_spread}. */
sc_status sc_normalize_mass_json(int n, double p, double target, char** out_json);

sc_status sc_pde_residual_fd(const sc_family* family, double radius, double t, double h,
                             double* out);

/* ---- grid fields ---- */

typedef struct sc_field sc_field;

sc_status sc_field_load_csv(const char* csv_path, const char* sidecar_path, sc_field** out_field);
sc_status sc_field_save_csv(const sc_field* field, const char* csv_path,
                            const char* sidecar_path);
void sc_field_destroy(sc_field* field);

/* ---- config-driven commands (the CLI surface) ----
 *
 * command: exponents | moser | eval | solve | obstacle | scan | classify |
 * harnack. config_json must follow the schema documented in the README;
 * artifacts named in the config are written to disk and the report comes
 * back as JSON.
 */
sc_status sc_run_command(const char* command, const char* config_json, char** out_report_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SUPERCAL_H */
