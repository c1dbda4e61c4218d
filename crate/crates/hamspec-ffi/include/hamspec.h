#ifndef HAMSPEC_H
#define HAMSPEC_H

/* Generated by cbindgen from hamspec-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code for every fallible entry point. `HS_STATUS_OK` is zero; any
// other value indicates failure and leaves a message for `hs_last_error`.
typedef enum HsStatus {
  HS_STATUS_OK = 0,
  // A required pointer argument was null.
  HS_STATUS_NULL_POINTER = 1,
  // Rows/columns inconsistent with the operation.
  HS_STATUS_DIMENSION = 2,
  // Text input could not be parsed.
  HS_STATUS_PARSE = 3,
  // A spectrum is not closed under negation and conjugation.
  HS_STATUS_CLOSURE = 4,
  // An operation needed an even dimension.
  HS_STATUS_PARITY = 5,
  // A matrix did not have full column rank.
  HS_STATUS_RANK = 6,
  // A requested value is not an eigenvalue of the matrix.
  HS_STATUS_NOT_AN_EIGENVALUE = 7,
  // Supplied eigenpairs do not satisfy their defining equation.
  HS_STATUS_EIGEN_RESIDUAL = 8,
  // An iterative routine failed to converge.
  HS_STATUS_NON_CONVERGENCE = 9,
  // Input outside the operation's domain.
  HS_STATUS_DOMAIN = 10,
  // A structural precondition (e.g. Hamiltonian form) failed.
  HS_STATUS_STRUCTURE = 11,
  // Input exceeds a documented size cap.
  HS_STATUS_SIZE_CAP = 12,
  // A bisection bracket could not be established.
  HS_STATUS_BRACKET = 13,
  // Internal cross-check disagreement; indicates a numerical pathology.
  HS_STATUS_INCONSISTENCY = 14,
  // File system failure.
  HS_STATUS_IO = 15,
  // A C string was not valid UTF-8.
  HS_STATUS_UTF8 = 16,
} HsStatus;

// Opaque dense real matrix handle.
typedef struct HsMatrix HsMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread, as a NUL-terminated
// UTF-8 string. The pointer stays valid until the next failing call on the
// same thread; never free it. Returns an empty string if nothing failed.
const char *hs_last_error(void);

// Create a matrix from a row-major buffer of `rows * cols` doubles.
//
// # Safety
// `data` must point to at least `rows * cols` readable doubles and `out`
// must be a valid location to store the new handle.
enum HsStatus hs_matrix_new(size_t rows, size_t cols, const double *data, struct HsMatrix **out);

// Deep-copy a matrix handle.
//
// # Safety
// `m` must be a live handle and `out` a valid store location.
enum HsStatus hs_matrix_copy(const struct HsMatrix *m, struct HsMatrix **out);

// Release a handle produced by this library. Null is a no-op.
//
// # Safety
// `m` must be null or a handle not yet freed.
void hs_matrix_free(struct HsMatrix *m);

// Number of rows, or 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle.
size_t hs_matrix_rows(const struct HsMatrix *m);

// Number of columns, or 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle.
size_t hs_matrix_cols(const struct HsMatrix *m);

// Read one entry.
//
// # Safety
// `m` must be a live handle and `out` writable.
enum HsStatus hs_matrix_get(const struct HsMatrix *m, size_t row, size_t col, double *out);

// Copy all entries row-major into `out`, which must hold rows*cols doubles.
//
// # Safety
// `m` must be a live handle; `out` must have space for rows*cols doubles.
enum HsStatus hs_matrix_data(const struct HsMatrix *m, double *out);

// Read a matrix from a headerless CSV file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid store location.
enum HsStatus hs_matrix_read_csv(const char *path, struct HsMatrix **out);

// Write a matrix as headerless CSV with round-trip-exact number formatting.
//
// # Safety
// `path` must be a NUL-terminated string and `m` a live handle.
enum HsStatus hs_matrix_write_csv(const char *path, const struct HsMatrix *m);

// The 2n x 2n block matrix [[0, I], [-I, 0]].
//
// # Safety
// `out` must be a valid store location.
enum HsStatus hs_build_j(size_t half_dim, struct HsMatrix **out);

// The symplectic transpose J A^T J (both dimensions must be even).
//
// # Safety
// `m` must be a live handle and `out` a valid store location.
enum HsStatus hs_h_transpose(const struct HsMatrix *m, struct HsMatrix **out);

// The structure residual ||A^T J + J A||_F (zero exactly for Hamiltonian A).
//
// # Safety
// `m` must be a live handle and `out` writable.
enum HsStatus hs_hamiltonian_residual(const struct HsMatrix *m, double *out);

// Scale-aware default tolerance for the structure test, or NaN for a null
// handle.
//
// # Safety
// `m` must be null or a live handle.
double hs_default_ham_tol(const struct HsMatrix *m);

// Structure test: writes 1 or 0 to `out_is` and the residual to
// `out_residual` (either may be null to skip it). Pass a negative `tol` to
// use the scale-aware default, as with `hs_has_imaginary_axis_eigenvalue`.
//
// # Safety
// `m` must be a live handle; non-null out-pointers must be writable.
enum HsStatus hs_is_hamiltonian(const struct HsMatrix *m,
                                double tol,
                                int32_t *out_is,
                                double *out_residual);

// Eigenvalues of a square matrix. `out_re` and `out_im` must each hold
// `hs_matrix_rows(m)` doubles; entry k of each receives the k-th eigenvalue.
//
// # Safety
// `m` must be a live handle; both out-arrays must have row-count capacity.
enum HsStatus hs_eigenvalues(const struct HsMatrix *m, double *out_re, double *out_im);

// Build a Hamiltonian matrix whose spectrum is the given values (closed
// under negation and conjugation; `len` must be even).
//
// # Safety
// `re` and `im` must point to `len` readable doubles; `out` must be a valid
// store location.
enum HsStatus hs_realize_spectrum(const double *re,
                                  const double *im,
                                  size_t len,
                                  struct HsMatrix **out);

// Apply the structured update A + X C X^H. `a` and `core` must be
// Hamiltonian; the columns of `x` must solve A X = X Omega.
//
// # Safety
// All four input handles must be live; `out` must be a valid store
// location.
enum HsStatus hs_apply_rado(const struct HsMatrix *a,
                            const struct HsMatrix *x,
                            const struct HsMatrix *omega,
                            const struct HsMatrix *core,
                            struct HsMatrix **out);

// Assemble the augmented test matrix [[A, -alpha I], [alpha I, -A^T]].
//
// # Safety
// `a` must be a live handle and `out` a valid store location.
enum HsStatus hs_build_h_alpha(const struct HsMatrix *a, double alpha, struct HsMatrix **out);

// Does the (Hamiltonian) matrix have an eigenvalue with |Re| <= tol?
// Pass a negative `tol` to use the scale-aware default. Writes 1/0 to
// `out_has` and the smallest |Re| found to `out_min_abs_real` (either may
// be null to skip it).
//
// # Safety
// `h` must be a live handle; non-null out-pointers must be writable.
enum HsStatus hs_has_imaginary_axis_eigenvalue(const struct HsMatrix *h,
                                               double tol,
                                               int32_t *out_has,
                                               double *out_min_abs_real);

// Bracket the stability radius by bisection. Pass `alpha_max <= 0` to grow
// the upper endpoint automatically. A spectrum already touching the axis is
// reported as `HS_STATUS_DOMAIN` (the radius is zero).
//
// # Safety
// `a` must be a live handle; non-null out-pointers must be writable.
enum HsStatus hs_stability_radius(const struct HsMatrix *a,
                                  double tol,
                                  double alpha_max,
                                  double *out_lower,
                                  double *out_upper,
                                  size_t *out_iterations);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HAMSPEC_H */
