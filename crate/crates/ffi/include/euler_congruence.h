#ifndef EULER_CONGRUENCE_H
#define EULER_CONGRUENCE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes; the numeric values match the command-line exit codes.
 */
typedef enum EcStatus {
  EC_STATUS_OK = 0,
  EC_STATUS_HYPOTHESIS_FAILED = 2,
  EC_STATUS_INCONSISTENT_INPUT = 3,
  EC_STATUS_VERDICT_VIOLATION = 4,
  EC_STATUS_SCHEMA_ERROR = 5,
  EC_STATUS_NULL_ARGUMENT = 6,
  EC_STATUS_PANIC = 7,
} EcStatus;

/**
 * A validated curve with its arithmetic inputs.
 */
typedef struct EcCurve EcCurve;

/**
 * A JSON-serializable analysis report.
 */
typedef struct EcReport EcReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *ec_last_error(void);

/**
 * Looks up one of the embedded curves by label.
 *
 * # Safety
 * `label` must be a nul-terminated string and `out` a valid pointer.
 */
enum EcStatus ec_curve_from_label(const char *label, struct EcCurve **out);

/**
 * Parses a single JSON curve record.
 *
 * # Safety
 * `record` must be a nul-terminated string and `out` a valid pointer.
 */
enum EcStatus ec_curve_from_json(const char *record, struct EcCurve **out);

/**
 * # Safety
 * `curve` must come from this library and not be used afterwards.
 */
void ec_curve_free(struct EcCurve *curve);

/**
 * `l + β(l) - a_l` at any prime `l`.
 *
 * # Safety
 * `curve` must be a live handle and `out` a valid pointer.
 */
enum EcStatus ec_local_term(const struct EcCurve *curve, uint64_t l, int64_t *out);

/**
 * Valuation of Φ over the curve's own bad primes.
 *
 * # Safety
 * `curve` must be a live handle and `out` a valid pointer.
 */
enum EcStatus ec_phi_valuation(const struct EcCurve *curve, uint64_t p, uint32_t *out);

/**
 * Valuation of the truncated Euler characteristic over the cyclotomic extension.
 *
 * # Safety
 * `curve` must be a live handle and `out` a valid pointer.
 */
enum EcStatus ec_chi_gamma_valuation(const struct EcCurve *curve, uint64_t p, uint32_t *out);

/**
 * Per-curve report.
 *
 * # Safety
 * `curve` must be a live handle and `out` a valid pointer.
 */
enum EcStatus ec_analyze(const struct EcCurve *curve, uint64_t p, struct EcReport **out);

/**
 * Pair report. `false_tate_m = 0` skips the false-Tate verdict and
 * `scan_bound = 0` uses the default bound. The report is produced for
 * refused pairs and violated verdicts too; the status tells them apart.
 *
 * # Safety
 * `c1`, `c2` must be live handles and `out` a valid pointer.
 */
enum EcStatus ec_pair(const struct EcCurve *c1,
                      const struct EcCurve *c2,
                      uint64_t p,
                      uint64_t false_tate_m,
                      bool gl2,
                      uint64_t scan_bound,
                      struct EcReport **out);

/**
 * Exit code the command-line tool would return for this report.
 *
 * # Safety
 * `report` must be a live handle.
 */
int32_t ec_report_exit_code(const struct EcReport *report);

/**
 * The report as JSON; release with [`ec_string_free`]. Null on failure.
 *
 * # Safety
 * `report` must be a live handle.
 */
char *ec_report_json(const struct EcReport *report);

/**
 * # Safety
 * `report` must come from this library and not be used afterwards.
 */
void ec_report_free(struct EcReport *report);

/**
 * # Safety
 * `s` must come from [`ec_report_json`] and not be used afterwards.
 */
void ec_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* EULER_CONGRUENCE_H */
