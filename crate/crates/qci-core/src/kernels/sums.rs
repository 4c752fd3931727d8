//! The microlocalized spectral sums.
//!
//! Every kernel is a weighted sum over the joint spectrum,
//!
//! ```text
//! K(x, y) = Σ_j  W(λ̄_j) · w_j² · φ_j(x) · conj(φ_j(y)),
//! ```
//!
//! with `w_j` the multiplier-cutoff weight and `W` the region indicator, the
//! per-factor mollifier product `∏ ρ(λ_j^(k) − μ_k)`, or the box-convolution
//! weights `∏ ∫_{τ−Λ}^{τ+Λ} ρ`. Sums use compensated summation in the fixed
//! deterministic pair order of the spectrum.

use num_complex::Complex64;

use crate::error::QciError;
use crate::geometry::SpectralRegion;
use crate::kernels::{CutoffSymbol, Mollifier};
use crate::models::ModelKind;
use crate::numerics::interp::cubic_uniform;
use crate::numerics::kahan::{KahanComplex, KahanSum};
use crate::spectrum::{JointEigenpair, JointSpectrum};
use crate::Result;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
/// Eigenvalues whose largest mollifier factor certifies below this floor are
/// truncated (and accounted in the reported bound).
const INCLUDE_FLOOR: f64 = 1e-14;

/// A kernel value with its certified/estimated truncation residual.
#[derive(Debug, Clone, Copy)]
pub struct KernelValue {
    pub value: Complex64,
    pub truncation_bound: f64,
}

/// φ_j(x)·conj(φ_j(y)) for one eigenpair.
fn pair_product(
    spec: &JointSpectrum,
    pair: &JointEigenpair,
    x: &[f64],
    y: &[f64],
) -> Result<Complex64> {
    match &spec.system.kind {
        ModelKind::FlatTorus { n } => {
            let mut phase = 0.0;
            for i in 0..*n {
                phase += pair.lam[i] * (x[i] - y[i]);
            }
            Ok(Complex64::from_polar(TWO_PI.powi(-(*n as i32)), phase))
        }
        ModelKind::SurfaceOfRevolution { profile } => {
            for p in [x, y] {
                if !(0.0..=profile.length).contains(&p[0]) {
                    return Err(QciError::Domain(format!(
                        "σ = {} outside [0, {}]",
                        p[0], profile.length
                    )));
                }
            }
            if pair.radial_samples.is_empty() {
                return Err(QciError::Domain(format!(
                    "radial samples not retained for (m, k) = ({}, {})",
                    pair.quantum_numbers[0], pair.quantum_numbers[1]
                )));
            }
            let fx = cubic_uniform(spec.radial_x0, spec.radial_h, &pair.radial_samples, x[0]);
            let fy = cubic_uniform(spec.radial_x0, spec.radial_h, &pair.radial_samples, y[0]);
            let m = pair.quantum_numbers[0] as f64;
            Ok(Complex64::from_polar(fx * fy / TWO_PI, m * (x[1] - y[1])))
        }
    }
}

/// Rough projector kernel `ΨΠ_region Ψ*(x, y)`.
pub fn projector_kernel(
    spec: &JointSpectrum,
    region: &SpectralRegion,
    cutoff: &CutoffSymbol,
    x: &[f64],
    y: &[f64],
) -> Result<Complex64> {
    spec.check_complete(region)?;
    spec.check_ties(region)?;
    let mut acc = KahanComplex::new();
    for pair in &spec.pairs {
        let w = cutoff.weight(&pair.lam);
        if w == 0.0 || !region.contains(&pair.lam) {
            continue;
        }
        acc.add(pair_product(spec, pair, x, y)? * (w * w));
    }
    Ok(acc.value())
}

/// Diagonal of the unit-box projector `ΨΠ_{R_μ̄}Ψ*(x, x)`; real and ≥ 0.
pub fn unit_box_diag(
    spec: &JointSpectrum,
    mu: &[f64],
    cutoff: &CutoffSymbol,
    x: &[f64],
) -> Result<f64> {
    let region = SpectralRegion::unit_box(mu);
    let v = projector_kernel(spec, &region, cutoff, x, x)?;
    debug_assert!(v.im.abs() <= 1e-12 * v.re.abs().max(1.0));
    Ok(v.re)
}

/// Largest |φ(x)φ(y)| scale available for truncation estimates.
fn sup_pair_scale(spec: &JointSpectrum, observed: f64) -> f64 {
    match &spec.system.kind {
        // |φ|² = (2π)⁻ⁿ exactly.
        ModelKind::FlatTorus { n } => TWO_PI.powi(-(*n as i32)),
        // Estimate: the measured supremum with a factor-2 allowance.
        ModelKind::SurfaceOfRevolution { .. } => 2.0 * observed.max(TWO_PI.powi(-2)),
    }
}

/// Conservative residual estimate for eigenvalues beyond the spectrum ball:
/// one mollifier factor is certified ≤ C₈(1+d)⁻⁸ at distance d, the others
/// bounded by max|ρ|, and shell counts come from the lattice (torus) or the
/// channel bound (SoR).
fn beyond_ball_bound(spec: &JointSpectrum, mu_norm: f64, mol: &Mollifier, sup_phi: f64) -> f64 {
    let n = spec.dim();
    let c8 = mol.tail_constant(8);
    let rho_max = mol.eval(0.0).abs().max(1.0);
    let d0 = ((spec.lam_max - mu_norm) / (n as f64).sqrt()).max(1.0);
    let mut total = 0.0;
    let mut j = 0.0;
    loop {
        let d = d0 + j;
        let shell = match &spec.system.kind {
            ModelKind::FlatTorus { n } => {
                (2 * n) as f64 * (2.0 * d + 3.0).powi(*n as i32 - 1)
            }
            ModelKind::SurfaceOfRevolution { profile } => {
                let lam = spec.lam_max + j + 2.0;
                (2.0 * profile.a_max * lam + 3.0) * (profile.length / std::f64::consts::PI + 1.0)
            }
        };
        let term = c8 * (1.0 + d).powi(-8) * rho_max.powi(n as i32 - 1) * shell;
        total += term;
        if term < 1e-30 || j > 1e6 {
            break;
        }
        j += 1.0;
    }
    total * sup_phi
}

/// Microlocalized smoothed spectral measure
/// `Ψ ρ(P₁−μ₁)⋯ρ(Pₙ−μₙ) Ψ*(x, y)` with a certified truncation residual.
pub fn smoothed_measure_kernel(
    spec: &JointSpectrum,
    mu: &[f64],
    mol: &Mollifier,
    cutoff: &CutoffSymbol,
    x: &[f64],
    y: &[f64],
) -> Result<KernelValue> {
    let mu_norm = mu.iter().map(|v| v * v).sum::<f64>().sqrt();
    if spec.lam_max < mu_norm + mol.tail_margin() {
        return Err(QciError::IncompleteSpectrum(format!(
            "smoothed measure at ‖μ̄‖ = {mu_norm:.3} needs lam_max ≥ {:.3}, have {:.3}",
            mu_norm + mol.tail_margin(),
            spec.lam_max
        )));
    }
    let n = spec.dim();
    let r_incl = mol.inclusion_radius(INCLUDE_FLOOR);
    let c8 = mol.tail_constant(8);
    let rho_max = mol.eval(0.0).abs().max(1.0);

    let mut acc = KahanComplex::new();
    let mut skipped = KahanSum::new();
    let mut observed_sup: f64 = 0.0;
    for pair in &spec.pairs {
        let w = cutoff.weight(&pair.lam);
        if w == 0.0 {
            continue;
        }
        let mut max_dist: f64 = 0.0;
        for k in 0..n {
            max_dist = max_dist.max((pair.lam[k] - mu[k]).abs());
        }
        if max_dist > r_incl {
            // All factors below the inclusion floor; account and skip.
            let bound = c8 * (1.0 + max_dist).powi(-8) * rho_max.powi(n as i32 - 1);
            skipped.add(w * w * bound);
            continue;
        }
        let mut product = 1.0;
        for k in 0..n {
            product *= mol.eval(pair.lam[k] - mu[k]);
        }
        let pp = pair_product(spec, pair, x, y)?;
        observed_sup = observed_sup.max(pp.norm());
        acc.add(pp * (w * w * product));
    }
    let sup_phi = sup_pair_scale(spec, observed_sup);
    let truncation_bound =
        skipped.value() * sup_phi + beyond_ball_bound(spec, mu_norm, mol, sup_phi);
    Ok(KernelValue {
        value: acc.value(),
        truncation_bound,
    })
}

/// Smoothed projector `(ρ⊗⋯⊗ρ) ∗ ΨΠ_{λ,c̄}Ψ*(x, y)`: per-factor weights
/// `W(τ; Λ_k) = ∫_{τ−Λ_k}^{τ+Λ_k} ρ` with `Λ_k = |c_k|λ`.
pub fn smoothed_projector_kernel(
    spec: &JointSpectrum,
    lambda: f64,
    c: &[f64],
    mol: &Mollifier,
    cutoff: &CutoffSymbol,
    x: &[f64],
    y: &[f64],
) -> Result<KernelValue> {
    let region = SpectralRegion::bx(lambda, c)?;
    let box_radius = region.bounding_radius();
    if spec.lam_max < box_radius + mol.tail_margin() {
        return Err(QciError::IncompleteSpectrum(format!(
            "smoothed projector at λ = {lambda} needs lam_max ≥ {:.3}, have {:.3}",
            box_radius + mol.tail_margin(),
            spec.lam_max
        )));
    }
    let n = spec.dim();
    let mut acc = KahanComplex::new();
    let mut observed_sup: f64 = 0.0;
    for pair in &spec.pairs {
        let w = cutoff.weight(&pair.lam);
        if w == 0.0 {
            continue;
        }
        let mut product = 1.0;
        for k in 0..n {
            product *= mol.box_weight(pair.lam[k], c[k].abs() * lambda);
        }
        if product.abs() < 1e-300 {
            continue;
        }
        let pp = pair_product(spec, pair, x, y)?;
        observed_sup = observed_sup.max(pp.norm());
        acc.add(pp * (w * w * product));
    }
    let sup_phi = sup_pair_scale(spec, observed_sup);
    Ok(KernelValue {
        value: acc.value(),
        truncation_bound: beyond_ball_bound(spec, box_radius, mol, sup_phi),
    })
}

/// The Tauberian comparison function
/// `h_λ(μ̄) = ∏ 1_{[-|c_k|λ, |c_k|λ]}(μ_k) − ∏ W(μ_k; |c_k|λ)`.
pub fn h_lambda(mol: &Mollifier, lambda: f64, c: &[f64], mu: &[f64]) -> f64 {
    let mut indicator = 1.0;
    let mut smooth = 1.0;
    for k in 0..c.len() {
        let half = c[k].abs() * lambda;
        if mu[k].abs() > half {
            indicator = 0.0;
        }
        smooth *= mol.box_weight(mu[k], half);
    }
    indicator - smooth
}

/// Product-difference majorant for |h_λ|: with per-factor bound
/// `|a_k − a'_k| ≤ C(1+||μ_k|−λ|c_k||)^{-N}`, `|a_k| ≤ 1`,
/// `|a'_k| ≤ 1 + C(1+d_k)^{-N}`.
pub fn h_lambda_majorant(lambda: f64, c: &[f64], mu: &[f64], c_n: f64, n_exp: u32) -> f64 {
    let n = c.len();
    let d: Vec<f64> = (0..n)
        .map(|k| (mu[k].abs() - c[k].abs() * lambda).abs())
        .collect();
    let mut total = 0.0;
    for l in 0..n {
        let mut term = c_n * (1.0 + d[l]).powi(-(n_exp as i32));
        for dk in d.iter().skip(l + 1) {
            term *= 1.0 + c_n * (1.0 + dk).powi(-(n_exp as i32));
        }
        total += term;
    }
    total
}

/// One h_λ diagnostic entry of [`tauberian_gap`].
#[derive(Debug, Clone)]
pub struct HLambdaTerm {
    pub lam: Vec<f64>,
    pub h_value: f64,
    /// |h_λ(λ̄_j)| · w_j² · |φ_j(x) φ_j(y)|.
    pub contribution: f64,
}

#[derive(Debug, Clone)]
pub struct TauberianGap {
    pub rough: Complex64,
    pub smoothed: Complex64,
    pub gap: f64,
    pub truncation_bound: f64,
    /// The 100 dominant per-eigenvalue contributions, descending.
    pub diagnostics: Vec<HLambdaTerm>,
}

/// |rough − smoothed| projector discrepancy at `(x, y)` with per-eigenvalue
/// h_λ diagnostics for the dominant terms.
pub fn tauberian_gap(
    spec: &JointSpectrum,
    lambda: f64,
    c: &[f64],
    mol: &Mollifier,
    cutoff: &CutoffSymbol,
    x: &[f64],
    y: &[f64],
) -> Result<TauberianGap> {
    let region = SpectralRegion::bx(lambda, c)?;
    let rough = projector_kernel(spec, &region, cutoff, x, y)?;
    let smoothed = smoothed_projector_kernel(spec, lambda, c, mol, cutoff, x, y)?;

    let mut diagnostics: Vec<HLambdaTerm> = Vec::new();
    for pair in &spec.pairs {
        let w = cutoff.weight(&pair.lam);
        if w == 0.0 {
            continue;
        }
        let h = h_lambda(mol, lambda, c, &pair.lam);
        if h.abs() < 1e-300 {
            continue;
        }
        let contribution = h.abs() * w * w * pair_product(spec, pair, x, y)?.norm();
        diagnostics.push(HLambdaTerm {
            lam: pair.lam.clone(),
            h_value: h,
            contribution,
        });
    }
    diagnostics.sort_by(|a, b| b.contribution.partial_cmp(&a.contribution).unwrap());
    diagnostics.truncate(100);

    Ok(TauberianGap {
        rough,
        smoothed: smoothed.value,
        gap: (rough - smoothed.value).norm(),
        truncation_bound: smoothed.truncation_bound,
        diagnostics,
    })
}
