#ifndef OSCMAP_H
#define OSCMAP_H

/* Generated by cbindgen from the oscmap-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum OscmapStatus {
  OSCMAP_STATUS_OK = 0,
  // A required pointer argument was null.
  OSCMAP_STATUS_NULL_POINTER = 1,
  // Arguments violate a precondition (bad dimension, bad parameter).
  OSCMAP_STATUS_INVALID_ARGUMENT = 2,
  // The operation hit a singular matrix.
  OSCMAP_STATUS_SINGULAR = 3,
  // The eigensolver did not converge (corrupted input).
  OSCMAP_STATUS_NO_CONVERGENCE = 4,
  // Unexpected internal failure.
  OSCMAP_STATUS_INTERNAL = 5,
} OscmapStatus;

// Propagation method selector for [`oscmap_evolve`].
typedef enum OscmapMethod {
  // Exact spectral propagation of the quantum amplitudes.
  OSCMAP_METHOD_QUANTUM_SPECTRAL = 0,
  // Fixed-step RK4 on the quantum equations.
  OSCMAP_METHOD_QUANTUM_ODE = 1,
  // Position/momentum-coupled oscillators integrated with RK4.
  OSCMAP_METHOD_CLASSICAL_EXACT = 2,
  // Bare position-coupled oscillators (weak-coupling approximation).
  OSCMAP_METHOD_CLASSICAL_RCA = 3,
  // Spring-form position-coupled oscillators.
  OSCMAP_METHOD_CLASSICAL_RCA_SPRING = 4,
} OscmapMethod;

// Opaque validated Hamiltonian handle.
typedef struct OscmapHamiltonian OscmapHamiltonian;

// Opaque trajectory handle: complex amplitudes on a snapped time grid.
typedef struct OscmapTrajectory OscmapTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static, NUL-terminated name of a status code; never needs freeing.
const char *oscmap_status_name(enum OscmapStatus status);

// Library version as a static NUL-terminated string.
const char *oscmap_version(void);

// Build the two-site Hamiltonian `[[ε, V], [V, ε]]`.
//
// # Safety
// `out` must be a valid pointer to a handle slot.
enum OscmapStatus oscmap_hamiltonian_dimer(double epsilon,
                                           double v,
                                           struct OscmapHamiltonian **out);

// Build the N-site ring Hamiltonian with nearest-neighbour coupling.
//
// # Safety
// `out` must be a valid pointer to a handle slot.
enum OscmapStatus oscmap_hamiltonian_ring(size_t sites,
                                          double epsilon,
                                          double v,
                                          struct OscmapHamiltonian **out);

// Build a Hamiltonian from a dense row-major `dim × dim` array.
//
// # Safety
// `entries` must point to `dim * dim` readable doubles; `out` must be a
// valid pointer to a handle slot.
enum OscmapStatus oscmap_hamiltonian_dense(size_t dim,
                                           const double *entries,
                                           struct OscmapHamiltonian **out);

// Free a Hamiltonian handle; null is ignored.
//
// # Safety
// `h` must be a handle from one of the constructors, not yet freed.
void oscmap_hamiltonian_free(struct OscmapHamiltonian *h);

// Number of sites; 0 for a null handle.
//
// # Safety
// `h` must be a live handle or null.
size_t oscmap_hamiltonian_dim(const struct OscmapHamiltonian *h);

// Eigenvalues, ascending, written to a caller buffer of length `dim`.
//
// # Safety
// `h` must be a live handle; `out` must hold `oscmap_hamiltonian_dim(h)`
// writable doubles.
enum OscmapStatus oscmap_eigenvalues(const struct OscmapHamiltonian *h, double *out);

// The weak-coupling validity ratio max|V| / ω̄.
//
// # Safety
// `h` must be a live handle; `out` must be writable.
enum OscmapStatus oscmap_rca_coupling_ratio(const struct OscmapHamiltonian *h, double *out);

// Propagate an initial amplitude vector with the chosen method over
// `samples` evenly spaced outputs on `[0, t_end]`, stepping with `dt`
// (pass `dt <= 0` to pick a step automatically). Returns a trajectory
// handle through `out`.
//
// # Safety
// `re0` and `im0` must each hold `dim` readable doubles; `out` must be a
// valid pointer to a handle slot; `h` must be a live handle.
enum OscmapStatus oscmap_evolve(const struct OscmapHamiltonian *h,
                                enum OscmapMethod method,
                                const double *re0,
                                const double *im0,
                                double dt,
                                double t_end,
                                size_t samples,
                                struct OscmapTrajectory **out);

// Number of samples in a trajectory; 0 for null.
//
// # Safety
// `t` must be a live handle or null.
size_t oscmap_trajectory_len(const struct OscmapTrajectory *t);

// Number of sites per sample; 0 for null.
//
// # Safety
// `t` must be a live handle or null.
size_t oscmap_trajectory_dim(const struct OscmapTrajectory *t);

// Copy the sample times into a caller buffer of length
// `oscmap_trajectory_len(t)`.
//
// # Safety
// `t` must be a live handle; `out` must hold `len` writable doubles.
enum OscmapStatus oscmap_trajectory_times(const struct OscmapTrajectory *t, double *out);

// Copy amplitudes into caller buffers of length `len * dim`, row-major in
// the sample index.
//
// # Safety
// `t` must be a live handle; `out_re` and `out_im` must each hold
// `len * dim` writable doubles.
enum OscmapStatus oscmap_trajectory_amplitudes(const struct OscmapTrajectory *t,
                                               double *out_re,
                                               double *out_im);

// Copy site populations |z|² into a caller buffer of length `len * dim`.
//
// # Safety
// `t` must be a live handle; `out` must hold `len * dim` writable doubles.
enum OscmapStatus oscmap_trajectory_populations(const struct OscmapTrajectory *t, double *out);

// Free a trajectory handle; null is ignored.
//
// # Safety
// `t` must be a handle from [`oscmap_evolve`], not yet freed.
void oscmap_trajectory_free(struct OscmapTrajectory *t);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OSCMAP_H */
