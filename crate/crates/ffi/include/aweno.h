#ifndef AWENO_H
#define AWENO_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

#define AWENO_BACKEND_CH_RI 0

#define AWENO_BACKEND_CH_CON 1

#define AWENO_BACKEND_CP_CON 2

typedef enum AwenoStatus {
  AWENO_STATUS_OK = 0,
  AWENO_STATUS_NULL_POINTER = 1,
  AWENO_STATUS_INVALID_ARGUMENT = 2,
  AWENO_STATUS_NUMERICAL_FAILURE = 3,
  AWENO_STATUS_UNKNOWN_PROBLEM = 4,
  AWENO_STATUS_IO = 5,
  AWENO_STATUS_BUFFER_TOO_SMALL = 6,
  AWENO_STATUS_PANIC = 7,
} AwenoStatus;

// Opaque solver handle.
typedef struct AwenoSolver AwenoSolver;

// Counters of a solver run.
typedef struct AwenoStats {
  uint64_t steps;
  uint64_t stages;
  double min_density;
  double min_pressure;
  uint64_t interp_limiter_activations;
  uint64_t flux_limiter_activations;
  uint64_t retries;
  uint64_t left_mults;
  uint64_t left_calls;
  uint64_t right_mults;
  double wall_seconds;
  double conservation_drift;
} AwenoStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf` (NUL terminated,
// truncated to `cap`). Returns the full message length excluding the NUL.
//
// # Safety
// `buf` must be NULL or point to `cap` writable bytes.
size_t aweno_last_error(char *buf, size_t cap);

// Creates a solver for catalog problem `problem` with order `k` and
// backend code `backend`. `nx`/`ny` of 0 select the problem defaults and
// `cfl <= 0` the default CFL number.
//
// # Safety
// `problem` must be a NUL-terminated string; `out` must be writable.
enum AwenoStatus aweno_solver_new(const char *problem,
                                  uint32_t k,
                                  uint32_t backend,
                                  size_t nx,
                                  size_t ny,
                                  double cfl,
                                  struct AwenoSolver **out);

// Releases a solver. NULL is ignored.
//
// # Safety
// `s` must be NULL or a handle from [`aweno_solver_new`] not yet freed.
void aweno_solver_free(struct AwenoSolver *s);

// One time step, clipped to the problem end time. The step size is written
// to `dt` when it is not NULL.
//
// # Safety
// `s` must be a live handle; `dt` NULL or writable.
enum AwenoStatus aweno_solver_step(struct AwenoSolver *s, double *dt);

// Advances to `t_end`; a negative value means the problem end time.
//
// # Safety
// `s` must be a live handle.
enum AwenoStatus aweno_solver_advance(struct AwenoSolver *s, double t_end);

// Current time.
//
// # Safety
// `s` must be a live handle; `t` writable.
enum AwenoStatus aweno_solver_time(const struct AwenoSolver *s, double *t);

// Grid size and number of primitive variables per cell (3 in 1D, 4 in 2D).
//
// # Safety
// `s` must be a live handle; the outputs writable.
enum AwenoStatus aweno_solver_dims(const struct AwenoSolver *s,
                                   size_t *nx,
                                   size_t *ny,
                                   size_t *nvars);

// Writes primitive states `(rho, u, [v,] p)` per cell, x fastest, into
// `buf` of length `len` (in doubles).
//
// # Safety
// `s` must be a live handle; `buf` must hold `len` doubles.
enum AwenoStatus aweno_solver_copy_primitives(const struct AwenoSolver *s, double *buf, size_t len);

// Run counters.
//
// # Safety
// `s` must be a live handle; `out` writable.
enum AwenoStatus aweno_solver_stats(const struct AwenoSolver *s, struct AwenoStats *out);

// WENO interpolation at the right face of the centre of a `2r - 1` point
// window, `r = (k + 1) / 2`.
//
// # Safety
// `window` must hold `len` doubles; `out` writable.
enum AwenoStatus aweno_weno_interpolate(const double *window,
                                        size_t len,
                                        uint32_t k,
                                        double eps,
                                        double *out);

// Exact 1D Riemann solution sampled at `xi = x / t`. States are
// `(rho, u, p)`. `vacuum` (optional) reports whether a vacuum forms.
//
// # Safety
// `left`, `right` must hold 3 doubles, `out` 3 writable doubles; `vacuum`
// NULL or writable.
enum AwenoStatus aweno_exact_riemann(const double *left,
                                     const double *right,
                                     double gamma,
                                     double xi,
                                     double *out,
                                     bool *vacuum);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AWENO_H */
