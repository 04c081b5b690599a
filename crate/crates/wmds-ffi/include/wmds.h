#ifndef WMDS_H
#define WMDS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes for every fallible entry point.
 */
typedef enum WmdsStatus {
  WmdsStatus_Ok = 0,
  WmdsStatus_NullArgument = 1,
  WmdsStatus_InvalidRootSystem = 2,
  WmdsStatus_CapExceeded = 3,
  WmdsStatus_BudgetExceeded = 4,
  WmdsStatus_NotExact = 5,
  WmdsStatus_DegreeShortfall = 6,
  WmdsStatus_BadModulus = 7,
  WmdsStatus_CheckFailure = 8,
  WmdsStatus_Internal = 9,
} WmdsStatus;

/**
 * Opaque handle to a built invariant function together with a lazily grown
 * coefficient table.
 */
typedef struct WmdsInvariant WmdsInvariant;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build the invariant function for family `'A'`, `'D'`, or `'E'` and the
 * given rank. `weyl_cap` and `term_budget` of zero select the defaults.
 *
 * # Safety
 * `out` must point to writable storage for one pointer.
 */
enum WmdsStatus wmds_build(char family,
                           uint32_t rank,
                           uint64_t weyl_cap,
                           uint64_t term_budget,
                           struct WmdsInvariant **out);

/**
 * Release a handle created by `wmds_build`.
 *
 * # Safety
 * `handle` must be null or a pointer previously returned by `wmds_build`.
 */
void wmds_invariant_free(struct WmdsInvariant *handle);

/**
 * Release a string returned through a `char **` out-parameter.
 *
 * # Safety
 * `s` must be null or a pointer previously handed out by this library.
 */
void wmds_string_free(char *s);

/**
 * # Safety
 * `handle` must be a live handle.
 */
uint32_t wmds_rank(const struct WmdsInvariant *handle);

/**
 * # Safety
 * `handle` must be a live handle; `out` must be writable.
 */
enum WmdsStatus wmds_weyl_order(const struct WmdsInvariant *handle, uint64_t *out);

/**
 * Whether the build kept the exact rational function (1) or degraded to
 * series mode (0).
 *
 * # Safety
 * `handle` must be a live handle.
 */
int32_t wmds_is_exact(const struct WmdsInvariant *handle);

/**
 * Number of terms of the p-part polynomial `f * D`.
 *
 * # Safety
 * `handle` must be a live handle; `out` must be writable.
 */
enum WmdsStatus wmds_ppart_terms(const struct WmdsInvariant *handle, uint64_t *out);

/**
 * The coefficient `a(k_1, ..., k_r; q)` as a decimal-coefficient polynomial
 * string in `q`, or its integer value when `q > 0` is supplied.
 *
 * # Safety
 * `handle` live; `ks` points to `len` values; `out` writable.
 */
enum WmdsStatus wmds_coefficient(struct WmdsInvariant *handle,
                                 const uint32_t *ks,
                                 uintptr_t len,
                                 int64_t q,
                                 char **out);

/**
 * The global coefficient `H(m_1, ..., m_r)` for odd positive arguments, as
 * a decimal string.
 *
 * # Safety
 * `handle` live; `ms` points to `len` values; `out` writable.
 */
enum WmdsStatus wmds_h_coefficient(struct WmdsInvariant *handle,
                                   const uint64_t *ms,
                                   uintptr_t len,
                                   char **out);

/**
 * Jacobi symbol `(a/n)` for odd positive `n`.
 *
 * # Safety
 * `out` must be writable.
 */
enum WmdsStatus wmds_jacobi(int64_t a, uint64_t n, int32_t *out);

/**
 * Run the verification battery; `failures` receives the number of failing
 * checks. Returns `CheckFailure` when any check fails.
 *
 * # Safety
 * `handle` must be a live handle; `failures` must be writable.
 */
enum WmdsStatus wmds_verify(const struct WmdsInvariant *handle,
                            uint64_t budget_secs,
                            uint32_t *failures);

/**
 * The p-part polynomial in the interchange text format.
 *
 * # Safety
 * `handle` live; `out` writable.
 */
enum WmdsStatus wmds_ppart_text(const struct WmdsInvariant *handle, char **out);

/**
 * Library version as a static string (not to be freed).
 */
const char *wmds_version(void);

/**
 * Parse helper so C callers can map family names; returns 1 on success.
 *
 * # Safety
 * `name` must be a valid NUL-terminated string.
 */
int32_t wmds_family_valid(const char *name);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WMDS_H */
