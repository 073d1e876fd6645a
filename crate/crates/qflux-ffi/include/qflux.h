#ifndef QFLUX_H
#define QFLUX_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum {
  QfluxStatus_Ok = 0,
  QfluxStatus_NullArgument = 1,
  QfluxStatus_InvalidArgument = 2,
  QfluxStatus_NumericalError = 3,
} QfluxStatus;

/**
 * Opaque wavefield handle.
 */
typedef struct QfluxField QfluxField;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message for the calling thread into `buf` (NUL
 * terminated, truncated to `cap` bytes) and return the full message length.
 * `buf` may be null to query the length alone.
 *
 * # Safety
 * `buf`, when non-null, must point to `cap` writable bytes.
 */
uintptr_t qflux_last_error(char *buf, uintptr_t cap);

/**
 * Build a wavefield on a uniform grid over [x_min, x_max] with n points.
 * `periodic` nonzero selects periodic boundaries, zero selects hard walls.
 * `re` and `im` are arrays of n samples; the new handle is written to `out`.
 *
 * # Safety
 * `re` and `im` must point to n readable doubles; `out` must be writable.
 */
QfluxStatus qflux_field_create(double x_min,
                               double x_max,
                               uintptr_t n,
                               int32_t periodic,
                               double hbar,
                               double mass,
                               const double *re,
                               const double *im,
                               QfluxField **out);

/**
 * Release a handle created by qflux_field_create. Null is a no-op.
 *
 * # Safety
 * `field` must be a pointer previously returned by qflux_field_create and
 * not yet freed.
 */
void qflux_field_free(QfluxField *field);

/**
 * Total probability (squared L2 norm) of the field.
 *
 * # Safety
 * `field` must be a live handle; `out` must be writable.
 */
QfluxStatus qflux_field_norm(const QfluxField *field, double *out);

/**
 * Extract the hydrodynamic fields. Each output array may be null to skip it;
 * non-null arrays receive n values. Cells where the density is below the
 * resolvable floor are written as NaN in `osmotic_u` and `phase_s`.
 *
 * # Safety
 * `field` must be a live handle; non-null output arrays must hold n doubles.
 */
QfluxStatus qflux_hydro_extract(const QfluxField *field,
                                double *rho,
                                double *flux_j,
                                double *diff_d,
                                double *osmotic_u,
                                double *phase_s);

/**
 * Kinetic energy split of a normalized field: flow part from the probability
 * flux, diffusion part from the density gradient.
 *
 * # Safety
 * `field` must be a live handle; `e_flow` and `e_diff` must be writable.
 */
QfluxStatus qflux_energy_split(const QfluxField *field, double *e_flow, double *e_diff);

/**
 * Faddeeva function w(z) = exp(-z^2) erfc(-iz) at z = re + i im.
 *
 * # Safety
 * `out_re` and `out_im` must be writable.
 */
QfluxStatus qflux_faddeeva(double re, double im, double *out_re, double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QFLUX_H */
