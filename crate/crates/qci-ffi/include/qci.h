#ifndef QCI_H
#define QCI_H

/* Generated by cbindgen from the qci-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes for every fallible call.
typedef enum QciStatus {
  QCI_STATUS_OK = 0,
  QCI_STATUS_NULL_ARGUMENT = 1,
  QCI_STATUS_INVALID_ARGUMENT = 2,
  QCI_STATUS_UTF8 = 3,
  QCI_STATUS_OUT_OF_BAND = 4,
  QCI_STATUS_BOUNDARY_TIE = 5,
  QCI_STATUS_DOMAIN_ERROR = 6,
  QCI_STATUS_NUMERIC_ERROR = 7,
  QCI_STATUS_INCOMPLETE_SPECTRUM = 8,
  QCI_STATUS_MEMORY_BUDGET = 9,
  QCI_STATUS_IO_ERROR = 10,
  QCI_STATUS_PARSE_ERROR = 11,
} QciStatus;

// Opaque cutoff handle.
typedef struct QciCutoff QciCutoff;

// Opaque mollifier handle.
typedef struct QciMollifier QciMollifier;

// Opaque profile handle.
typedef struct QciProfile QciProfile;

// Opaque joint-spectrum handle.
typedef struct QciSpectrum QciSpectrum;

// Opaque model-system handle.
typedef struct QciSystem QciSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Static message for a status code.
const char *qci_status_message(enum QciStatus status);

// Library version string.
const char *qci_version(void);

// Build a built-in profile ("sphere", "ellipsoid", "bump").
//
// # Safety
// `name` must be a NUL-terminated string; `params` must point to
// `n_params` doubles (may be NULL when `n_params` is 0); `out` must be a
// valid pointer. The returned handle must be released with
// [`qci_profile_free`].
enum QciStatus qci_profile_builtin(const char *name,
                                   const double *params,
                                   size_t n_params,
                                   size_t grid_size,
                                   struct QciProfile **out);

// # Safety
// `p` must be a handle from [`qci_profile_builtin`], not yet freed, or NULL.
void qci_profile_free(struct QciProfile *p);

// Flat torus of dimension 1..=4.
//
// # Safety
// `out` must be valid; release the handle with [`qci_system_free`].
enum QciStatus qci_system_torus(size_t dim, struct QciSystem **out);

// Surface of revolution over a profile (the profile is copied).
//
// # Safety
// `profile` must be a live profile handle; `out` must be valid.
enum QciStatus qci_system_surface(const struct QciProfile *profile, struct QciSystem **out);

// # Safety
// `s` must be a system handle or NULL.
void qci_system_free(struct QciSystem *s);

// Number of commuting symbols.
//
// # Safety
// `s` must be a live system handle.
enum QciStatus qci_system_dim(const struct QciSystem *s, size_t *out);

// Moment map p̄(x, ξ); `x`, `xi`, `out` each hold `dim` doubles.
//
// # Safety
// Pointers must reference buffers of length `qci_system_dim`.
enum QciStatus qci_system_moment_map(const struct QciSystem *s,
                                     const double *x,
                                     const double *xi,
                                     double *out);

// Numerical fiber rank of the moment map at `(x, ξ)`.
//
// # Safety
// As for [`qci_system_moment_map`].
enum QciStatus qci_fiber_rank(const struct QciSystem *s,
                              const double *x,
                              const double *xi,
                              size_t *out);

// Joint spectrum of a surface of revolution up to `lam_max`.
//
// # Safety
// `profile` must be live; `out` valid; free with [`qci_spectrum_free`].
enum QciStatus qci_spectrum_build_sor(const struct QciProfile *profile,
                                      double lam_max,
                                      size_t grid_size,
                                      struct QciSpectrum **out);

// Torus joint spectrum: all of ℤⁿ inside the ball of the given radius.
//
// # Safety
// `out` must be valid; free with [`qci_spectrum_free`].
enum QciStatus qci_spectrum_build_torus_ball(size_t dim, double radius, struct QciSpectrum **out);

// # Safety
// `s` must be a spectrum handle or NULL.
void qci_spectrum_free(struct QciSpectrum *s);

// Number of joint eigenvalues.
//
// # Safety
// `s` must be a live spectrum handle.
enum QciStatus qci_spectrum_len(const struct QciSpectrum *s, size_t *out);

// Fetch pair `index`: λ̄ components, quantum numbers, norm certificate.
// `lam_out` and `q_out` hold `dim` entries each.
//
// # Safety
// Buffers must be large enough; `index` is bounds-checked.
enum QciStatus qci_spectrum_get(const struct QciSpectrum *s,
                                size_t index,
                                double *lam_out,
                                int64_t *q_out,
                                double *cert_out);

// Count joint eigenvalues in the box `I(λ, c̄)`; fails on boundary ties.
//
// # Safety
// `c` holds `dim` doubles.
enum QciStatus qci_spectrum_count_box(const struct QciSpectrum *s,
                                      double lambda,
                                      const double *c,
                                      size_t *out);

// Plateau mollifier with ρ̂ support radius `delta0`.
//
// # Safety
// `out` must be valid; free with [`qci_mollifier_free`].
enum QciStatus qci_mollifier_new(double delta0, struct QciMollifier **out);

// Nonnegative Fejér-type variant with β̂ supported in `[-delta, delta]`.
//
// # Safety
// As for [`qci_mollifier_new`].
enum QciStatus qci_mollifier_fejer(double delta, struct QciMollifier **out);

// ρ(s).
//
// # Safety
// `m` must be a live mollifier handle.
enum QciStatus qci_mollifier_eval(const struct QciMollifier *m, double s, double *out);

// `W(τ; Λ) = ∫_{τ-Λ}^{τ+Λ} ρ`.
//
// # Safety
// `m` must be a live mollifier handle.
enum QciStatus qci_mollifier_box_weight(const struct QciMollifier *m,
                                        double tau,
                                        double half_width,
                                        double *out);

// # Safety
// `m` must be a mollifier handle or NULL.
void qci_mollifier_free(struct QciMollifier *m);

// Trivial cutoff Ψ = I.
//
// # Safety
// `out` must be valid; free with [`qci_cutoff_free`].
enum QciStatus qci_cutoff_unity(struct QciCutoff **out);

// Surface-of-revolution ratio cutoff χ₀(p₂/p₁).
//
// # Safety
// `out` must be valid.
enum QciStatus qci_cutoff_sor(double c_min, double c_max, double width, struct QciCutoff **out);

// Torus direction cutoff around `axis` (dim doubles).
//
// # Safety
// `axis` must hold `dim` doubles; `out` must be valid.
enum QciStatus qci_cutoff_torus(const double *axis,
                                size_t dim,
                                double inner_angle,
                                double outer_angle,
                                struct QciCutoff **out);

// # Safety
// `c` must be a cutoff handle or NULL.
void qci_cutoff_free(struct QciCutoff *c);

// Diagonal rough-projector value `ΨΠ_{I(λ,c̄)}Ψ*(x, x)`.
//
// # Safety
// `c` and `x` hold `dim` doubles each; handles must be live.
enum QciStatus qci_projector_diag(const struct QciSpectrum *s,
                                  double lambda,
                                  const double *c,
                                  const struct QciCutoff *cutoff,
                                  const double *x,
                                  double *out);

// Predicted diagonal leading term. Pass `band_lo = band_hi = NAN` for no
// band restriction.
//
// # Safety
// `c` and `x` hold `dim` doubles each; handles must be live.
enum QciStatus qci_leading_diag(const struct QciSystem *s,
                                const struct QciCutoff *cutoff,
                                double lambda,
                                const double *c,
                                const double *x,
                                double band_lo,
                                double band_hi,
                                double *out);

// Tauberian discrepancy |rough − smoothed| on the diagonal.
//
// # Safety
// `c` and `x` hold `dim` doubles each; handles must be live.
enum QciStatus qci_tauberian_gap_diag(const struct QciSpectrum *s,
                                      double lambda,
                                      const double *c,
                                      const struct QciMollifier *mol,
                                      const struct QciCutoff *cutoff,
                                      const double *x,
                                      double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QCI_H */
