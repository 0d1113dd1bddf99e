#ifndef FUNDGAP_H
#define FUNDGAP_H

#include <stddef.h>
#include <stdint.h>

// Status codes. 2, 3 and 4 match the exit codes of the command line tool.
typedef enum FgStatus {
  FG_STATUS_OK = 0,
  // Null pointer or an argument outside its enumeration.
  FG_STATUS_INVALID_ARGUMENT = 1,
  // Parameters outside the model's domain, or a hypothesis not met.
  FG_STATUS_DOMAIN = 2,
  // An iteration or the flow did not converge.
  FG_STATUS_CONVERGENCE = 3,
  // No bracket, incomplete coverage or blow-up.
  FG_STATUS_BRACKET = 4,
  // Output buffer too short; the required size was still written.
  FG_STATUS_BUFFER_TOO_SMALL = 5,
  FG_STATUS_PANIC = 6,
} FgStatus;

typedef enum FgMethod {
  FG_METHOD_SHOOTING = 0,
  FG_METHOD_FINITE_DIFFERENCE = 1,
} FgMethod;

// Which series: the first eigenvalue, the second, or their difference.
typedef enum FgSeriesKind {
  FG_SERIES_KIND_FIRST = 1,
  FG_SERIES_KIND_SECOND = 2,
  FG_SERIES_KIND_GAP = 3,
} FgSeriesKind;

// Validated (n, K, D).
typedef struct FgParams FgParams;

// Exact series coefficients for both eigenvalues up to a fixed order.
typedef struct FgSeries FgSeries;

typedef struct FgEigen {
  double eigenvalue;
  double error_estimate;
} FgEigen;

typedef struct FgGap {
  double lambda1;
  double lambda2;
  double gap;
  // gap - 3π²/D².
  double excess;
  double error_estimate;
} FgGap;

typedef struct FgBounds {
  // NaN when no lower bound applies.
  double lower;
  double upper;
} FgBounds;

typedef struct FgFlowResult {
  double distance;
  // Riccati residual of the final state, absolute and relative.
  double residual;
  double residual_relative;
  double t;
  uint64_t steps;
} FgFlowResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *fg_version(void);

// Copies the last error message of this thread into `buf`.
//
// # Safety
// `buf` must be null or point to `len` writable bytes; `needed` must be null or writable.
enum FgStatus fg_last_error(char *buf, size_t len, size_t *needed);

// Validates (n, K, D) and allocates a handle.
//
// # Safety
// `out` must be writable.
enum FgStatus fg_params_new(uint32_t n, double k, double d, struct FgParams **out);

// # Safety
// `p` must be null or come from [`fg_params_new`] and not have been freed.
void fg_params_free(struct FgParams *p);

// λ̄₁ or λ̄₂ of the model operator; `method` is an [`FgMethod`].
//
// # Safety
// `p` must be a live handle and `out` writable.
enum FgStatus fg_eigenvalue(const struct FgParams *p,
                            uint8_t index,
                            uint32_t method,
                            struct FgEigen *out);

// # Safety
// `p` must be a live handle and `out` writable.
enum FgStatus fg_gap(const struct FgParams *p, struct FgGap *out);

// Robin constant c_k for the boundary condition ψ(±D/2) = ∓k.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum FgStatus fg_robin_constant(const struct FgParams *p, double k, double *out);

// Lower and upper bounds for λ̄₁ or λ̄₂ (K > 0).
//
// # Safety
// `p` must be a live handle and `out` writable.
enum FgStatus fg_bounds(const struct FgParams *p, uint8_t index, struct FgBounds *out);

// Runs the parabolic flow from the supersolution with shift `s` until the sup distance to
// the stationary solution drops below `tol`. `cells` = 0 uses the default grid.
//
// # Safety
// `p` must be a live handle and `out` writable.
enum FgStatus fg_flow(const struct FgParams *p,
                      double k,
                      double s,
                      double tol,
                      size_t cells,
                      struct FgFlowResult *out);

// Computes exact series coefficients through `order` (at least 1).
//
// # Safety
// `out` must be writable.
enum FgStatus fg_series_new(uint32_t order, struct FgSeries **out);

// # Safety
// `s` must be null or come from [`fg_series_new`] and not have been freed.
void fg_series_free(struct FgSeries *s);

// Highest order held by the handle, or 0 for null.
//
// # Safety
// `s` must be null or a live handle.
uint32_t fg_series_order(const struct FgSeries *s);

// Truncated series at (n, K, D), summed through `order`; `kind` is an [`FgSeriesKind`].
//
// # Safety
// `s` and `p` must be live handles and `out` writable.
enum FgStatus fg_series_eval(const struct FgSeries *s,
                             uint32_t kind,
                             const struct FgParams *p,
                             uint32_t order,
                             double *out);

// Exact coefficient of κ^m in D²λ̄ as text, a polynomial in n with coefficients in ℚ[π, 1/π].
//
// # Safety
// `s` must be a live handle, `buf` null or `len` writable bytes, `needed` null or writable.
enum FgStatus fg_series_coefficient(const struct FgSeries *s,
                                    uint32_t kind,
                                    uint32_t m,
                                    char *buf,
                                    size_t len,
                                    size_t *needed);

// Exact coefficient of κ^m evaluated at dimension n, as a double.
//
// # Safety
// `s` must be a live handle and `out` writable.
enum FgStatus fg_series_coefficient_at(const struct FgSeries *s,
                                       uint32_t kind,
                                       uint32_t m,
                                       uint32_t n,
                                       double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FUNDGAP_H */
