//! C ABI for the qci joint-spectral-asymptotics library.
//!
//! Objects cross the boundary as opaque handles created by `qci_*_new`-style
//! constructors and destroyed by the matching `qci_*_free`. Every fallible
//! call returns a [`QciStatus`] code and writes results through out
//! pointers; `qci_status_message` maps codes to static strings.
//!
//! The generated header lives at `include/qci.h` (see `build.rs`).

use std::ffi::{c_char, CStr};

use qci_core::geometry::{fiber_rank, SpectralRegion};
use qci_core::kernels::{
    make_fejer, make_mollifier, projector_kernel, tauberian_gap, CutoffSymbol, Mollifier,
};
use qci_core::models::{
    builtin_profile, make_surface_of_revolution, make_torus, ModelSystem, ProfileMetric,
    SymbolSystem,
};
use qci_core::spectrum::{build_sor_spectrum, enumerate_torus, JointSpectrum};
use qci_core::weyl::leading_term_diagonal;
use qci_core::QciError;

/// Status codes for every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QciStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    Utf8 = 3,
    OutOfBand = 4,
    BoundaryTie = 5,
    DomainError = 6,
    NumericError = 7,
    IncompleteSpectrum = 8,
    MemoryBudget = 9,
    IoError = 10,
    ParseError = 11,
}

fn status_of(err: &QciError) -> QciStatus {
    match err {
        QciError::Config(_) => QciStatus::InvalidArgument,
        QciError::OutOfBand(_) => QciStatus::OutOfBand,
        QciError::BoundaryTie { .. } => QciStatus::BoundaryTie,
        QciError::Domain(_) => QciStatus::DomainError,
        QciError::Numeric { .. } => QciStatus::NumericError,
        QciError::IncompleteSpectrum(_) => QciStatus::IncompleteSpectrum,
        QciError::MemoryBudget(_) => QciStatus::MemoryBudget,
        QciError::Io(_) => QciStatus::IoError,
        QciError::Parse(_) => QciStatus::ParseError,
    }
}

/// Opaque profile handle.
pub struct QciProfile(ProfileMetric);
/// Opaque model-system handle.
pub struct QciSystem(ModelSystem);
/// Opaque joint-spectrum handle.
pub struct QciSpectrum(JointSpectrum);
/// Opaque mollifier handle.
pub struct QciMollifier(Mollifier);
/// Opaque cutoff handle.
pub struct QciCutoff(CutoffSymbol);

/// Static message for a status code.
#[no_mangle]
pub extern "C" fn qci_status_message(status: QciStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        QciStatus::Ok => b"ok\0",
        QciStatus::NullArgument => b"null argument\0",
        QciStatus::InvalidArgument => b"invalid argument\0",
        QciStatus::Utf8 => b"invalid utf-8 in string argument\0",
        QciStatus::OutOfBand => b"evaluation outside the admissible band\0",
        QciStatus::BoundaryTie => b"region boundary within 1e-9 of a spectrum point\0",
        QciStatus::DomainError => b"argument outside the operation domain\0",
        QciStatus::NumericError => b"numeric routine failed to converge\0",
        QciStatus::IncompleteSpectrum => b"spectrum does not cover the request\0",
        QciStatus::MemoryBudget => b"enumeration exceeds the memory budget\0",
        QciStatus::IoError => b"i/o error\0",
        QciStatus::ParseError => b"parse error\0",
    };
    msg.as_ptr() as *const c_char
}

/// Library version string.
#[no_mangle]
pub extern "C" fn qci_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

macro_rules! nonnull {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(v) => v,
            None => return QciStatus::NullArgument,
        }
    };
}

macro_rules! out_write {
    ($out:expr, $value:expr) => {
        match unsafe { $out.as_mut() } {
            Some(slot) => *slot = $value,
            None => return QciStatus::NullArgument,
        }
    };
}

unsafe fn slice_arg<'a>(ptr: *const f64, len: usize) -> Option<&'a [f64]> {
    if ptr.is_null() {
        None
    } else {
        Some(std::slice::from_raw_parts(ptr, len))
    }
}

// ───────────────────────── profiles ─────────────────────────

/// Build a built-in profile ("sphere", "ellipsoid", "bump").
///
/// # Safety
/// `name` must be a NUL-terminated string; `params` must point to
/// `n_params` doubles (may be NULL when `n_params` is 0); `out` must be a
/// valid pointer. The returned handle must be released with
/// [`qci_profile_free`].
#[no_mangle]
pub unsafe extern "C" fn qci_profile_builtin(
    name: *const c_char,
    params: *const f64,
    n_params: usize,
    grid_size: usize,
    out: *mut *mut QciProfile,
) -> QciStatus {
    if name.is_null() || out.is_null() {
        return QciStatus::NullArgument;
    }
    let name = match unsafe { CStr::from_ptr(name) }.to_str() {
        Ok(s) => s,
        Err(_) => return QciStatus::Utf8,
    };
    let params = if n_params == 0 {
        &[][..]
    } else {
        match unsafe { slice_arg(params, n_params) } {
            Some(s) => s,
            None => return QciStatus::NullArgument,
        }
    };
    match builtin_profile(name, params, grid_size) {
        Ok(p) => {
            out_write!(out, Box::into_raw(Box::new(QciProfile(p))));
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `p` must be a handle from [`qci_profile_builtin`], not yet freed, or NULL.
#[no_mangle]
pub unsafe extern "C" fn qci_profile_free(p: *mut QciProfile) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

// ───────────────────────── systems ─────────────────────────

/// Flat torus of dimension 1..=4.
///
/// # Safety
/// `out` must be valid; release the handle with [`qci_system_free`].
#[no_mangle]
pub unsafe extern "C" fn qci_system_torus(dim: usize, out: *mut *mut QciSystem) -> QciStatus {
    if out.is_null() {
        return QciStatus::NullArgument;
    }
    match make_torus(dim) {
        Ok(s) => {
            out_write!(out, Box::into_raw(Box::new(QciSystem(s))));
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Surface of revolution over a profile (the profile is copied).
///
/// # Safety
/// `profile` must be a live profile handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qci_system_surface(
    profile: *const QciProfile,
    out: *mut *mut QciSystem,
) -> QciStatus {
    let profile = nonnull!(profile);
    if out.is_null() {
        return QciStatus::NullArgument;
    }
    match make_surface_of_revolution(profile.0.clone()) {
        Ok(s) => {
            out_write!(out, Box::into_raw(Box::new(QciSystem(s))));
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `s` must be a system handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn qci_system_free(s: *mut QciSystem) {
    if !s.is_null() {
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Number of commuting symbols.
///
/// # Safety
/// `s` must be a live system handle.
#[no_mangle]
pub unsafe extern "C" fn qci_system_dim(s: *const QciSystem, out: *mut usize) -> QciStatus {
    let sys = nonnull!(s);
    out_write!(out, sys.0.dim());
    QciStatus::Ok
}

/// Moment map p̄(x, ξ); `x`, `xi`, `out` each hold `dim` doubles.
///
/// # Safety
/// Pointers must reference buffers of length `qci_system_dim`.
#[no_mangle]
pub unsafe extern "C" fn qci_system_moment_map(
    s: *const QciSystem,
    x: *const f64,
    xi: *const f64,
    out: *mut f64,
) -> QciStatus {
    let sys = nonnull!(s);
    let n = sys.0.dim();
    let (Some(x), Some(xi)) = (unsafe { slice_arg(x, n) }, unsafe { slice_arg(xi, n) }) else {
        return QciStatus::NullArgument;
    };
    if out.is_null() {
        return QciStatus::NullArgument;
    }
    let p = sys.0.moment_map(x, xi);
    unsafe { std::ptr::copy_nonoverlapping(p.as_ptr(), out, n) };
    QciStatus::Ok
}

/// Numerical fiber rank of the moment map at `(x, ξ)`.
///
/// # Safety
/// As for [`qci_system_moment_map`].
#[no_mangle]
pub unsafe extern "C" fn qci_fiber_rank(
    s: *const QciSystem,
    x: *const f64,
    xi: *const f64,
    out: *mut usize,
) -> QciStatus {
    let sys = nonnull!(s);
    let n = sys.0.dim();
    let (Some(x), Some(xi)) = (unsafe { slice_arg(x, n) }, unsafe { slice_arg(xi, n) }) else {
        return QciStatus::NullArgument;
    };
    match fiber_rank(&sys.0, x, xi) {
        Ok(r) => {
            out_write!(out, r);
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

// ───────────────────────── spectra ─────────────────────────

/// Joint spectrum of a surface of revolution up to `lam_max`.
///
/// # Safety
/// `profile` must be live; `out` valid; free with [`qci_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn qci_spectrum_build_sor(
    profile: *const QciProfile,
    lam_max: f64,
    grid_size: usize,
    out: *mut *mut QciSpectrum,
) -> QciStatus {
    let profile = nonnull!(profile);
    if out.is_null() {
        return QciStatus::NullArgument;
    }
    match build_sor_spectrum(&profile.0, lam_max, grid_size) {
        Ok(s) => {
            out_write!(out, Box::into_raw(Box::new(QciSpectrum(s))));
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Torus joint spectrum: all of ℤⁿ inside the ball of the given radius.
///
/// # Safety
/// `out` must be valid; free with [`qci_spectrum_free`].
#[no_mangle]
pub unsafe extern "C" fn qci_spectrum_build_torus_ball(
    dim: usize,
    radius: f64,
    out: *mut *mut QciSpectrum,
) -> QciStatus {
    if out.is_null() {
        return QciStatus::NullArgument;
    }
    match enumerate_torus(dim, &SpectralRegion::ball(dim, radius)) {
        Ok(s) => {
            out_write!(out, Box::into_raw(Box::new(QciSpectrum(s))));
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `s` must be a spectrum handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn qci_spectrum_free(s: *mut QciSpectrum) {
    if !s.is_null() {
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Number of joint eigenvalues.
///
/// # Safety
/// `s` must be a live spectrum handle.
#[no_mangle]
pub unsafe extern "C" fn qci_spectrum_len(s: *const QciSpectrum, out: *mut usize) -> QciStatus {
    let spec = nonnull!(s);
    out_write!(out, spec.0.pairs.len());
    QciStatus::Ok
}

/// Fetch pair `index`: λ̄ components, quantum numbers, norm certificate.
/// `lam_out` and `q_out` hold `dim` entries each.
///
/// # Safety
/// Buffers must be large enough; `index` is bounds-checked.
#[no_mangle]
pub unsafe extern "C" fn qci_spectrum_get(
    s: *const QciSpectrum,
    index: usize,
    lam_out: *mut f64,
    q_out: *mut i64,
    cert_out: *mut f64,
) -> QciStatus {
    let spec = nonnull!(s);
    let Some(pair) = spec.0.pairs.get(index) else {
        return QciStatus::InvalidArgument;
    };
    if lam_out.is_null() || q_out.is_null() || cert_out.is_null() {
        return QciStatus::NullArgument;
    }
    unsafe {
        std::ptr::copy_nonoverlapping(pair.lam.as_ptr(), lam_out, pair.lam.len());
        std::ptr::copy_nonoverlapping(
            pair.quantum_numbers.as_ptr(),
            q_out,
            pair.quantum_numbers.len(),
        );
        *cert_out = pair.norm_cert;
    }
    QciStatus::Ok
}

/// Count joint eigenvalues in the box `I(λ, c̄)`; fails on boundary ties.
///
/// # Safety
/// `c` holds `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn qci_spectrum_count_box(
    s: *const QciSpectrum,
    lambda: f64,
    c: *const f64,
    out: *mut usize,
) -> QciStatus {
    let spec = nonnull!(s);
    let n = spec.0.dim();
    let Some(c) = (unsafe { slice_arg(c, n) }) else {
        return QciStatus::NullArgument;
    };
    let region = match SpectralRegion::bx(lambda, c) {
        Ok(r) => r,
        Err(e) => return status_of(&e),
    };
    match spec.0.count_region(&region) {
        Ok(count) => {
            out_write!(out, count);
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

// ───────────────────────── mollifiers ─────────────────────────

/// Plateau mollifier with ρ̂ support radius `delta0`.
///
/// # Safety
/// `out` must be valid; free with [`qci_mollifier_free`].
#[no_mangle]
pub unsafe extern "C" fn qci_mollifier_new(delta0: f64, out: *mut *mut QciMollifier) -> QciStatus {
    if out.is_null() {
        return QciStatus::NullArgument;
    }
    match make_mollifier(delta0) {
        Ok(m) => {
            out_write!(out, Box::into_raw(Box::new(QciMollifier(m))));
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Nonnegative Fejér-type variant with β̂ supported in `[-delta, delta]`.
///
/// # Safety
/// As for [`qci_mollifier_new`].
#[no_mangle]
pub unsafe extern "C" fn qci_mollifier_fejer(
    delta: f64,
    out: *mut *mut QciMollifier,
) -> QciStatus {
    if out.is_null() {
        return QciStatus::NullArgument;
    }
    match make_fejer(delta) {
        Ok(m) => {
            out_write!(out, Box::into_raw(Box::new(QciMollifier(m))));
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// ρ(s).
///
/// # Safety
/// `m` must be a live mollifier handle.
#[no_mangle]
pub unsafe extern "C" fn qci_mollifier_eval(
    m: *const QciMollifier,
    s: f64,
    out: *mut f64,
) -> QciStatus {
    let mol = nonnull!(m);
    out_write!(out, mol.0.eval(s));
    QciStatus::Ok
}

/// `W(τ; Λ) = ∫_{τ-Λ}^{τ+Λ} ρ`.
///
/// # Safety
/// `m` must be a live mollifier handle.
#[no_mangle]
pub unsafe extern "C" fn qci_mollifier_box_weight(
    m: *const QciMollifier,
    tau: f64,
    half_width: f64,
    out: *mut f64,
) -> QciStatus {
    let mol = nonnull!(m);
    out_write!(out, mol.0.box_weight(tau, half_width));
    QciStatus::Ok
}

/// # Safety
/// `m` must be a mollifier handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn qci_mollifier_free(m: *mut QciMollifier) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

// ───────────────────────── cutoffs ─────────────────────────

/// Trivial cutoff Ψ = I.
///
/// # Safety
/// `out` must be valid; free with [`qci_cutoff_free`].
#[no_mangle]
pub unsafe extern "C" fn qci_cutoff_unity(out: *mut *mut QciCutoff) -> QciStatus {
    if out.is_null() {
        return QciStatus::NullArgument;
    }
    out_write!(out, Box::into_raw(Box::new(QciCutoff(CutoffSymbol::unity()))));
    QciStatus::Ok
}

/// Surface-of-revolution ratio cutoff χ₀(p₂/p₁).
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qci_cutoff_sor(
    c_min: f64,
    c_max: f64,
    width: f64,
    out: *mut *mut QciCutoff,
) -> QciStatus {
    if out.is_null() {
        return QciStatus::NullArgument;
    }
    match CutoffSymbol::sor_ratio(c_min, c_max, width) {
        Ok(c) => {
            out_write!(out, Box::into_raw(Box::new(QciCutoff(c))));
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Torus direction cutoff around `axis` (dim doubles).
///
/// # Safety
/// `axis` must hold `dim` doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn qci_cutoff_torus(
    axis: *const f64,
    dim: usize,
    inner_angle: f64,
    outer_angle: f64,
    out: *mut *mut QciCutoff,
) -> QciStatus {
    let Some(axis) = (unsafe { slice_arg(axis, dim) }) else {
        return QciStatus::NullArgument;
    };
    if out.is_null() {
        return QciStatus::NullArgument;
    }
    match CutoffSymbol::torus_cone(axis, inner_angle, outer_angle) {
        Ok(c) => {
            out_write!(out, Box::into_raw(Box::new(QciCutoff(c))));
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// # Safety
/// `c` must be a cutoff handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn qci_cutoff_free(c: *mut QciCutoff) {
    if !c.is_null() {
        drop(unsafe { Box::from_raw(c) });
    }
}

// ──────────────────── kernels and predictions ────────────────────

/// Diagonal rough-projector value `ΨΠ_{I(λ,c̄)}Ψ*(x, x)`.
///
/// # Safety
/// `c` and `x` hold `dim` doubles each; handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qci_projector_diag(
    s: *const QciSpectrum,
    lambda: f64,
    c: *const f64,
    cutoff: *const QciCutoff,
    x: *const f64,
    out: *mut f64,
) -> QciStatus {
    let spec = nonnull!(s);
    let cut = nonnull!(cutoff);
    let n = spec.0.dim();
    let (Some(c), Some(x)) = (unsafe { slice_arg(c, n) }, unsafe { slice_arg(x, n) }) else {
        return QciStatus::NullArgument;
    };
    let region = match SpectralRegion::bx(lambda, c) {
        Ok(r) => r,
        Err(e) => return status_of(&e),
    };
    match projector_kernel(&spec.0, &region, &cut.0, x, x) {
        Ok(v) => {
            out_write!(out, v.re);
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Predicted diagonal leading term. Pass `band_lo = band_hi = NAN` for no
/// band restriction.
///
/// # Safety
/// `c` and `x` hold `dim` doubles each; handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qci_leading_diag(
    s: *const QciSystem,
    cutoff: *const QciCutoff,
    lambda: f64,
    c: *const f64,
    x: *const f64,
    band_lo: f64,
    band_hi: f64,
    out: *mut f64,
) -> QciStatus {
    let sys = nonnull!(s);
    let cut = nonnull!(cutoff);
    let n = sys.0.dim();
    let (Some(c), Some(x)) = (unsafe { slice_arg(c, n) }, unsafe { slice_arg(x, n) }) else {
        return QciStatus::NullArgument;
    };
    let band = if band_lo.is_nan() || band_hi.is_nan() {
        None
    } else {
        Some((band_lo, band_hi))
    };
    match leading_term_diagonal(&sys.0, &cut.0, lambda, c, x, band) {
        Ok(v) => {
            out_write!(out, v);
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Tauberian discrepancy |rough − smoothed| on the diagonal.
///
/// # Safety
/// `c` and `x` hold `dim` doubles each; handles must be live.
#[no_mangle]
pub unsafe extern "C" fn qci_tauberian_gap_diag(
    s: *const QciSpectrum,
    lambda: f64,
    c: *const f64,
    mol: *const QciMollifier,
    cutoff: *const QciCutoff,
    x: *const f64,
    out: *mut f64,
) -> QciStatus {
    let spec = nonnull!(s);
    let mol = nonnull!(mol);
    let cut = nonnull!(cutoff);
    let n = spec.0.dim();
    let (Some(c), Some(x)) = (unsafe { slice_arg(c, n) }, unsafe { slice_arg(x, n) }) else {
        return QciStatus::NullArgument;
    };
    match tauberian_gap(&spec.0, lambda, c, &mol.0, &cut.0, x, x) {
        Ok(g) => {
            out_write!(out, g.gap);
            QciStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}
