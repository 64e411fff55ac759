#ifndef COVERING_H
#define COVERING_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CoveringStatus {
  COVERING_STATUS_OK = 0,
  COVERING_STATUS_NULL_POINTER = 1,
  COVERING_STATUS_INVALID_ARGUMENT = 2,
  // A verification step failed (regulator violated, form not positive definite, ...).
  COVERING_STATUS_REJECTED = 3,
  // Corrupt or inconsistent data.
  COVERING_STATUS_DATA_ERROR = 4,
  // The optimizer did not converge or a computation failed.
  COVERING_STATUS_COMPUTATION_FAILED = 5,
  COVERING_STATUS_PANIC = 6,
} CoveringStatus;

// E8 model with its diagonal classes and G-orbits.
typedef struct CoveringE8 CoveringE8;

typedef struct CoveringLeech CoveringLeech;

// Optimization problem of one triangulation (regulators and simplices).
typedef struct CoveringProblem CoveringProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *covering_last_error(void);

// Library version as a static NUL-terminated string.
const char *covering_version(void);

// # Safety
// `s` must be NULL or a string returned by this library.
void covering_string_free(char *s);

// # Safety
// `out` must be a valid pointer.
enum CoveringStatus covering_e8_new(struct CoveringE8 **out);

// # Safety
// `h` must be NULL or a handle from `covering_e8_new`, not used afterwards.
void covering_e8_free(struct CoveringE8 *h);

// Shell, class and simplex counts as JSON.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum CoveringStatus covering_e8_info_json(const struct CoveringE8 *h, char **out);

// Builds the optimization problem of triangulation `name` ("I1" or "I2").
//
// # Safety
// `h` must be a live handle, `name` a NUL-terminated string, `out` valid.
enum CoveringStatus covering_problem_new(const struct CoveringE8 *h,
                                         const char *name,
                                         struct CoveringProblem **out);

// # Safety
// `p` must be NULL or a handle from `covering_problem_new`, not used afterwards.
void covering_problem_free(struct CoveringProblem *p);

// Float optimum and its rationalization (denominator bound given as a
// decimal integer string) as JSON with fields `optimum`, `coordinates`, `q`.
//
// # Safety
// `p` must be a live handle, `bound` a NUL-terminated string, `out` valid.
enum CoveringStatus covering_optimize_json(const struct CoveringProblem *p,
                                           const char *bound,
                                           char **out);

// Certifies the form given as a JSON matrix of rational strings against
// the problem's triangulation, comparing the density with `threshold`.
// A violated regulator yields `COVERING_STATUS_REJECTED`.
//
// # Safety
// `p` must be a live handle, the strings NUL-terminated, `out` valid.
enum CoveringStatus covering_certify_json(const struct CoveringProblem *p,
                                          const char *q_json,
                                          const char *threshold,
                                          char **out);

// Loads and validates the Leech lattice generator.
//
// # Safety
// `out` must be a valid pointer.
enum CoveringStatus covering_leech_new(struct CoveringLeech **out);

// # Safety
// `h` must be NULL or a handle from `covering_leech_new`, not used afterwards.
void covering_leech_free(struct CoveringLeech *h);

// Moment-form lower bound report as JSON.
//
// # Safety
// `h` must be a live handle and `out` a valid pointer.
enum CoveringStatus covering_leech_bound_json(const struct CoveringLeech *h, char **out);

// Rigidity report for dimension `dim >= 2` as JSON.
//
// # Safety
// `out` must be a valid pointer.
enum CoveringStatus covering_rigidity_json(uint32_t dim, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COVERING_H */
