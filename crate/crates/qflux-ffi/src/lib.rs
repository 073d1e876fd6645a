//! C ABI for the qflux core: opaque wavefield handles, status codes, and a
//! thread-local last-error message. All array arguments are caller-allocated
//! with the grid's point count; the header is generated by cbindgen at build
//! time into include/qflux.h.

use num_complex::Complex64;
use qflux::field::{Boundary, Grid1D, PhysConstants, WaveField};
use qflux::hydro;
use std::cell::RefCell;
use std::os::raw::c_char;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QfluxStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    NumericalError = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: QfluxStatus, msg: impl Into<String>) -> QfluxStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
    status
}

/// Opaque wavefield handle.
pub struct QfluxField {
    inner: WaveField,
}

/// Copy the last error message for the calling thread into `buf` (NUL
/// terminated, truncated to `cap` bytes) and return the full message length.
/// `buf` may be null to query the length alone.
///
/// # Safety
/// `buf`, when non-null, must point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn qflux_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Build a wavefield on a uniform grid over [x_min, x_max] with n points.
/// `periodic` nonzero selects periodic boundaries, zero selects hard walls.
/// `re` and `im` are arrays of n samples; the new handle is written to `out`.
///
/// # Safety
/// `re` and `im` must point to n readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qflux_field_create(
    x_min: f64,
    x_max: f64,
    n: usize,
    periodic: i32,
    hbar: f64,
    mass: f64,
    re: *const f64,
    im: *const f64,
    out: *mut *mut QfluxField,
) -> QfluxStatus {
    if re.is_null() || im.is_null() || out.is_null() {
        return fail(QfluxStatus::NullArgument, "null pointer argument");
    }
    let constants = match PhysConstants::new(hbar, mass) {
        Ok(c) => c,
        Err(e) => return fail(QfluxStatus::InvalidArgument, e.to_string()),
    };
    let boundary = if periodic != 0 {
        Boundary::Periodic
    } else {
        Boundary::Dirichlet
    };
    let grid = match Grid1D::new(x_min, x_max, n, boundary) {
        Ok(g) => g,
        Err(e) => return fail(QfluxStatus::InvalidArgument, e.to_string()),
    };
    let re = std::slice::from_raw_parts(re, n);
    let im = std::slice::from_raw_parts(im, n);
    let values: Vec<Complex64> = re
        .iter()
        .zip(im)
        .map(|(&r, &i)| Complex64::new(r, i))
        .collect();
    match WaveField::new(grid, values, constants) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(QfluxField { inner }));
            QfluxStatus::Ok
        }
        Err(e) => fail(QfluxStatus::InvalidArgument, e.to_string()),
    }
}

/// Release a handle created by qflux_field_create. Null is a no-op.
///
/// # Safety
/// `field` must be a pointer previously returned by qflux_field_create and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qflux_field_free(field: *mut QfluxField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Total probability (squared L2 norm) of the field.
///
/// # Safety
/// `field` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qflux_field_norm(field: *const QfluxField, out: *mut f64) -> QfluxStatus {
    if field.is_null() || out.is_null() {
        return fail(QfluxStatus::NullArgument, "null pointer argument");
    }
    *out = (*field).inner.norm();
    QfluxStatus::Ok
}

/// Extract the hydrodynamic fields. Each output array may be null to skip it;
/// non-null arrays receive n values. Cells where the density is below the
/// resolvable floor are written as NaN in `osmotic_u` and `phase_s`.
///
/// # Safety
/// `field` must be a live handle; non-null output arrays must hold n doubles.
#[no_mangle]
pub unsafe extern "C" fn qflux_hydro_extract(
    field: *const QfluxField,
    rho: *mut f64,
    flux_j: *mut f64,
    diff_d: *mut f64,
    osmotic_u: *mut f64,
    phase_s: *mut f64,
) -> QfluxStatus {
    if field.is_null() {
        return fail(QfluxStatus::NullArgument, "null field handle");
    }
    let psi = &(*field).inner;
    let fields = match hydro::extract_fields(psi, None) {
        Ok(f) => f,
        Err(e) => return fail(QfluxStatus::NumericalError, e.to_string()),
    };
    let n = psi.grid().len();
    let copy = |src: &[f64], dst: *mut f64| {
        if !dst.is_null() {
            std::ptr::copy_nonoverlapping(src.as_ptr(), dst, n);
        }
    };
    copy(&fields.rho, rho);
    copy(&fields.flux_j, flux_j);
    copy(&fields.diff_d, diff_d);
    copy(&fields.osmotic_u, osmotic_u);
    copy(&fields.phase_s, phase_s);
    QfluxStatus::Ok
}

/// Kinetic energy split of a normalized field: flow part from the probability
/// flux, diffusion part from the density gradient.
///
/// # Safety
/// `field` must be a live handle; `e_flow` and `e_diff` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qflux_energy_split(
    field: *const QfluxField,
    e_flow: *mut f64,
    e_diff: *mut f64,
) -> QfluxStatus {
    if field.is_null() || e_flow.is_null() || e_diff.is_null() {
        return fail(QfluxStatus::NullArgument, "null pointer argument");
    }
    match hydro::kinetic_energy_split(&(*field).inner, None) {
        Ok(es) => {
            *e_flow = es.e_flow;
            *e_diff = es.e_diff;
            QfluxStatus::Ok
        }
        Err(e) => fail(QfluxStatus::NumericalError, e.to_string()),
    }
}

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz) at z = re + i im.
///
/// # Safety
/// `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qflux_faddeeva(
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> QfluxStatus {
    if out_re.is_null() || out_im.is_null() {
        return fail(QfluxStatus::NullArgument, "null pointer argument");
    }
    match qflux::specfun::faddeeva(Complex64::new(re, im)) {
        Ok(w) => {
            *out_re = w.re;
            *out_im = w.im;
            QfluxStatus::Ok
        }
        Err(e) => fail(QfluxStatus::NumericalError, e.to_string()),
    }
}
