#ifndef KCHAOS_H
#define KCHAOS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; values 1 to 3 match the command-line exit codes.
typedef enum {
  KC_STATUS_OK = 0,
  KC_STATUS_IO = 1,
  KC_STATUS_INVALID_ARGUMENT = 2,
  KC_STATUS_PRECISION = 3,
  KC_STATUS_NULL_POINTER = 4,
  KC_STATUS_PANIC = 5,
} KcStatus;

typedef enum {
  KC_VERDICT_KIND_CHAOTIC = 0,
  KC_VERDICT_KIND_NON_CHAOTIC = 1,
  KC_VERDICT_KIND_BOUNDARY = 2,
} KcVerdictKind;

// Opaque eigenphase pair.
typedef struct KcPair KcPair;

// Opaque per-order chaoticity table.
typedef struct KcReport KcReport;

typedef struct {
  KcVerdictKind kind;
  double trace_mag;
  // Distance of the trace magnitude from √2; zero on the boundary.
  double margin;
} KcVerdict;

typedef struct {
  uint64_t k;
  double theta;
  double entropy;
  double trace_mag;
  KcVerdictKind verdict;
} KcRecord;

// `e^{iπ·gm/gp}·Diag(e^{iπ·m1/p1}, e^{iπ·m2/p2})`.
typedef struct {
  int64_t m1;
  int64_t p1;
  int64_t m2;
  int64_t p2;
  int64_t gm;
  int64_t gp;
} KcRationalSpec;

typedef struct {
  uint64_t n;
  uint64_t chaotic_count;
  double fraction;
  double half_width_3sigma;
} KcCensus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next failing call on the same thread.
const char *kc_last_error_message(void);

// Library version as a static nul-terminated string.
const char *kc_version(void);

// Pair with eigenphases `phi`, `psi` in radians, reduced to `[0, 2π)`.
//
// # Safety
// `out` must be valid for writes.
KcStatus kc_pair_new(double phi, double psi, KcPair **out);

// SU(2) pair `(−psi, psi)`.
//
// # Safety
// `out` must be valid for writes.
KcStatus kc_pair_su2(double psi, KcPair **out);

// Eigenphases of `x² + a·x + b` roots raised to `t`; `precision_bits = 0`
// picks the working precision automatically.
//
// # Safety
// `out` must be valid for writes.
KcStatus kc_pair_quadratic(int64_t a, int64_t b, uint64_t t, uint32_t precision_bits, KcPair **out);

// Pair of `U^k`.
//
// # Safety
// `pair` must be a live handle and `out` valid for writes.
KcStatus kc_pair_power(const KcPair *pair, uint64_t k, KcPair **out);

// Releases a pair; null is ignored.
//
// # Safety
// `pair` must be null or a handle not yet freed.
void kc_pair_free(KcPair *pair);

// # Safety
// `pair` must be a live handle; `phi` and `psi` valid for writes.
KcStatus kc_pair_phases(const KcPair *pair, double *phi, double *psi);

// `|tr U| = 2|cos((φ − ψ)/2)|`.
//
// # Safety
// `pair` must be a live handle and `out` valid for writes.
KcStatus kc_pair_trace_magnitude(const KcPair *pair, double *out);

// Circular distance between the eigenphases, in `[0, π]`.
//
// # Safety
// `pair` must be a live handle and `out` valid for writes.
KcStatus kc_pair_theta(const KcPair *pair, double *out);

// Maximal measurement entropy in bits (closed form).
//
// # Safety
// `pair` must be a live handle and `out` valid for writes.
KcStatus kc_pair_entropy(const KcPair *pair, double *out);

// Chaoticity verdict of `U^k`.
//
// # Safety
// `pair` must be a live handle and `out` valid for writes.
KcStatus kc_pair_verdict_at_order(const KcPair *pair, uint64_t k, KcVerdict *out);

// Verdicts for `K = 1..=k_max`.
//
// # Safety
// `pair` must be a live handle and `out` valid for writes.
KcStatus kc_scan(const KcPair *pair, uint64_t k_max, KcReport **out);

// Number of rows; zero for a null report.
//
// # Safety
// `report` must be null or a live handle.
uintptr_t kc_report_len(const KcReport *report);

// # Safety
// `report` must be a live handle and `out` valid for writes.
KcStatus kc_report_row(const KcReport *report, uintptr_t index, KcRecord *out);

// Releases a report; null is ignored.
//
// # Safety
// `report` must be null or a handle not yet freed.
void kc_report_free(KcReport *report);

// Smallest `n` with `U^n = I` exactly, global phase included.
//
// # Safety
// `spec` must be valid for reads and `out` for writes.
KcStatus kc_rational_idempotency_order(const KcRationalSpec *spec, uint64_t *out);

// Exact verdict of `U^k` for a rational spec.
//
// # Safety
// `spec` must be valid for reads and `out` for writes.
KcStatus kc_rational_verdict_at_order(const KcRationalSpec *spec, uint64_t k, KcVerdict *out);

// SU(2) unitary that is chaotic at order `k`.
//
// # Safety
// `out` must be valid for writes.
KcStatus kc_chaotic_order_k(uint64_t k, KcRationalSpec *out);

// Monte Carlo fraction of chaotic SU(2) elements.
//
// # Safety
// `out` must be valid for writes.
KcStatus kc_census(uint64_t n, uint64_t seed, KcCensus *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KCHAOS_H */
