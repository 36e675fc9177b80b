#ifndef CONSERVED_OPS_H
#define CONSERVED_OPS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum {
  CO_STATUS_OK = 0,
  CO_STATUS_NULL_POINTER = 1,
  CO_STATUS_INVALID_ARGUMENT = 2,
  CO_STATUS_CONFIG = 3,
  CO_STATUS_PARSE = 4,
  CO_STATUS_ALGEBRA = 5,
  CO_STATUS_GEOMETRY = 6,
  CO_STATUS_DOMAIN = 7,
  CO_STATUS_NYQUIST = 8,
  CO_STATUS_IO = 9,
  CO_STATUS_PANIC = 10,
} CoStatus;

/**
 * Opaque configuration handle.
 */
typedef struct CoConfig CoConfig;

/**
 * Opaque closed-form solution handle.
 */
typedef struct CoSolution CoSolution;

/**
 * Resistance bookkeeping for one `(dx, dt)` pair.
 */
typedef struct {
  double n_real;
  int64_t n;
  bool is_quantized;
  double voltage;
  double current;
  double resistance;
  double resistance_in_klitzing;
  double phase_re;
  double phase_im;
} CoQuantization;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. The pointer stays valid until
 * the next `co_*` call on the same thread.
 */
const char *co_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *co_version(void);

/**
 * Natural units with `m = q = E = B = 1`, `L = 10`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
CoStatus co_config_natural(CoConfig **out);

/**
 * Parses a JSON configuration document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` writable.
 */
CoStatus co_config_from_json(const char *json, CoConfig **out);

/**
 * Switches the geometry: 0 is the 1D electric field, 1 the parallel fields.
 *
 * # Safety
 * `cfg` must be a live handle.
 */
CoStatus co_config_set_geometry(CoConfig *cfg, uint32_t geometry);

/**
 * # Safety
 * `cfg` must be null or a handle from this library, freed at most once.
 */
void co_config_free(CoConfig *cfg);

/**
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
CoStatus co_cyclotron_frequency(const CoConfig *cfg, double *out);

/**
 * The resistance quantum `h/q^2` in the configured units.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
CoStatus co_von_klitzing(const CoConfig *cfg, double *out);

/**
 * The fundamental 1D solution.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
CoStatus co_solution_electric(const CoConfig *cfg, CoSolution **out);

/**
 * The 1D solution shifted in time by `dt`.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
CoStatus co_solution_electric_shifted(const CoConfig *cfg, double dt, CoSolution **out);

/**
 * `P_j phi` from the degeneracy ladder.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
CoStatus co_solution_ladder(const CoConfig *cfg, uint32_t j, CoSolution **out);

/**
 * Transverse Landau state. `family` is 0 for the y-family, 1 for the
 * z-family; `shift` is its centre.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
CoStatus co_solution_landau(const CoConfig *cfg,
                            uint32_t family,
                            uint32_t n,
                            double shift,
                            CoSolution **out);

/**
 * Evaluates a solution at one point.
 *
 * # Safety
 * `sol` must be a live handle; `re` and `im` writable.
 */
CoStatus co_solution_eval(const CoSolution *sol,
                          double x,
                          double y,
                          double z,
                          double t,
                          double *re,
                          double *im);

/**
 * # Safety
 * `sol` must be null or a handle from this library, freed at most once.
 */
void co_solution_free(CoSolution *sol);

/**
 * Quantization bookkeeping for displacements `(dx, dt)`.
 *
 * # Safety
 * `cfg` must be a live handle and `out` writable.
 */
CoStatus co_quantization_report(const CoConfig *cfg,
                                double dx,
                                double dt,
                                double tol,
                                CoQuantization *out);

/**
 * Heisenberg residual of operator `f` under Hamiltonian `h`, both in the
 * operator text grammar. Writes whether it vanishes and, if `text_out` is
 * non-null, its canonical text (release with [`co_string_free`]).
 *
 * # Safety
 * `f` and `h` must be nul-terminated; `is_zero` writable; `text_out` null or
 * writable.
 */
CoStatus co_heisenberg_residual(const char *f, const char *h, bool *is_zero, char **text_out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed at most once.
 */
void co_string_free(char *s);

/**
 * Runs verification suites. `suites` is a comma-separated list or null for
 * all of them.
 *
 * # Safety
 * `cfg` must be a live handle, `suites` null or nul-terminated, and the two
 * counters writable.
 */
CoStatus co_verify(const CoConfig *cfg, const char *suites, uint32_t *total, uint32_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONSERVED_OPS_H */
