//! Leading terms of the microlocalized pointwise law.
//!
//! Diagonal: `(2π)⁻ⁿ ∫_{ξ : p̄(x,ξ) ∈ I(λ,c̄)} |σ(Ψ)(x,ξ)|² dξ`, a fiber
//! integral over both Σ-branches (a joint-spectral multiplier weighs
//! standing waves, so the reflected branch carries equal mass). The fiber
//! measure is the metric-orthonormal one: eigenfunctions are normalized
//! against the Riemannian volume, so the kernel diagonal is a density per
//! unit `dV_g` and the canonical-coordinate integral `dΣ dΘ` carries a
//! `1/√det g_x = 1/a(σ)` frame factor.
//!
//! Off-diagonal: same fiber integral at `y` with the oscillatory factor
//! `e^{iΦ}`, where `Φ = S(x,ξ) − S(y,ξ)` (full phase, branch-matched) or
//! `Φ = (x−y)·∇ₓS(x;ξ)` (linearized, for `d(x,y) ≲ 1/λ`). The amplitude is
//! fixed to the diagonal value `|σ(Ψ)(y,ξ)|²` with the symmetric
//! half-density frame factor `1/√(a(σ_x) a(σ_y))`; the compound-symbol
//! correction is part of the measured remainder.

use num_complex::Complex64;

use crate::error::QciError;
use crate::geometry::volume::{
    sor_fiber_integral, sor_psi_breakpoints, torus_fiber_integral,
};
use crate::geometry::{liouville_volume, SpectralRegion};
use crate::kernels::CutoffSymbol;
use crate::models::{generating_function, ModelKind, ModelSystem, ProfileMetric};
use crate::numerics::quad::gauss_legendre;
use crate::Result;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    /// Φ = S(x,ξ) − S(y,ξ).
    FullPhase,
    /// Φ = (x−y)·∇ₓS(x;ξ).
    Linearized,
}

/// Check that an evaluation point sits in the admissible band.
fn check_band(sigma: f64, band: Option<(f64, f64)>) -> Result<()> {
    if let Some((lo, hi)) = band {
        if !(lo..=hi).contains(&sigma) {
            return Err(QciError::OutOfBand(format!(
                "evaluation point σ = {sigma} outside the band [{lo}, {hi}]"
            )));
        }
    }
    Ok(())
}

/// Diagonal leading term at `x`.
pub fn leading_term_diagonal(
    sys: &ModelSystem,
    cutoff: &CutoffSymbol,
    lambda: f64,
    c: &[f64],
    x: &[f64],
    band: Option<(f64, f64)>,
) -> Result<f64> {
    let region = SpectralRegion::bx(lambda, c)?;
    match &sys.kind {
        ModelKind::FlatTorus { n } => {
            let fiber = torus_fiber_integral(*n, &region, Some(cutoff))?;
            Ok(fiber * TWO_PI.powi(-(*n as i32)))
        }
        ModelKind::SurfaceOfRevolution { profile } => {
            check_band(x[0], band)?;
            let fiber = sor_fiber_integral(profile, x[0], &region, Some(cutoff));
            // Orthonormal-frame factor 1/√det g = 1/a(σ).
            Ok(fiber / profile.a(x[0]) * TWO_PI.powi(-2))
        }
    }
}

/// `∫₀^R e^{igr} r dr`, stable for small |gR|.
fn radial_oscillatory(r: f64, g: f64) -> Complex64 {
    let gr = g * r;
    if gr.abs() < 1e-4 {
        // Series: R²/2 + i g R³/3 − g² R⁴/8 − i g³ R⁵/30.
        let r2 = r * r;
        Complex64::new(
            r2 / 2.0 - g * g * r2 * r2 / 8.0,
            g * r2 * r / 3.0 - g * g * g * r2 * r2 * r / 30.0,
        )
    } else {
        let e = Complex64::from_polar(1.0, gr);
        e * Complex64::new(0.0, -r / g) + (e - 1.0) / (g * g)
    }
}

/// Off-diagonal leading term.
#[allow(clippy::too_many_arguments)]
pub fn leading_term_offdiag(
    sys: &ModelSystem,
    cutoff: &CutoffSymbol,
    lambda: f64,
    c: &[f64],
    x: &[f64],
    y: &[f64],
    mode: PhaseMode,
    band: Option<(f64, f64)>,
) -> Result<Complex64> {
    let region = SpectralRegion::bx(lambda, c)?;
    match &sys.kind {
        ModelKind::FlatTorus { n } => torus_offdiag(*n, cutoff, &region, x, y),
        ModelKind::SurfaceOfRevolution { profile } => {
            let band = band.ok_or_else(|| {
                QciError::config("surface off-diagonal predictions need a band")
            })?;
            check_band(x[0], Some(band))?;
            check_band(y[0], Some(band))?;
            sor_offdiag(sys, profile, cutoff, lambda, c, x, y, mode, band)
        }
    }
}

/// Tensor Gauss–Legendre over the box with ≥ 20 nodes per phase wavelength
/// per axis (torus: S is linear, so both modes coincide).
fn torus_offdiag(
    n: usize,
    cutoff: &CutoffSymbol,
    region: &SpectralRegion,
    x: &[f64],
    y: &[f64],
) -> Result<Complex64> {
    let bb = region.bounding_box();
    let mut rules = Vec::with_capacity(n);
    for k in 0..n {
        let delta = x[k] - y[k];
        let span = bb[k].1 - bb[k].0;
        let waves = span * delta.abs() / TWO_PI;
        let nodes = ((20.0 * waves).ceil() as usize + 48).min(6000);
        rules.push(gauss_legendre(nodes));
    }
    // Recursive tensor product.
    fn rec(
        axis: usize,
        n: usize,
        bb: &[(f64, f64)],
        rules: &[(Vec<f64>, Vec<f64>)],
        xi: &mut Vec<f64>,
        delta: &[f64],
        cutoff: &CutoffSymbol,
    ) -> Complex64 {
        let (nodes, weights) = &rules[axis];
        let c = 0.5 * (bb[axis].1 - bb[axis].0);
        let mid = 0.5 * (bb[axis].0 + bb[axis].1);
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, w) in nodes.iter().zip(weights) {
            xi[axis] = mid + c * t;
            let inner = if axis + 1 == n {
                let wpsi = match cutoff {
                    CutoffSymbol::Unity => 1.0,
                    _ => cutoff.direction_value(xi),
                };
                if wpsi == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    let mut phase = 0.0;
                    for k in 0..n {
                        phase += delta[k] * xi[k];
                    }
                    Complex64::from_polar(wpsi * wpsi, phase)
                }
            } else {
                rec(axis + 1, n, bb, rules, xi, delta, cutoff)
            };
            acc += inner * (*w * c);
        }
        acc
    }
    let delta: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let mut xi = vec![0.0; n];
    let v = rec(0, n, &bb, &rules, &mut xi, &delta, cutoff);
    Ok(v * TWO_PI.powi(-(n as i32)))
}

/// Polar fiber integral at `y` with the exact radial oscillatory factor:
/// directions `ω±(ψ) = (1, a_y sin ψ)` with the Σ-branch picked by
/// `sign(cos ψ)`, radius `t = p₁ ∈ [0, t_max(ψ)]`.
#[allow(clippy::too_many_arguments)]
fn sor_offdiag(
    sys: &ModelSystem,
    profile: &ProfileMetric,
    cutoff: &CutoffSymbol,
    lambda: f64,
    c: &[f64],
    x: &[f64],
    y: &[f64],
    mode: PhaseMode,
    band: (f64, f64),
) -> Result<Complex64> {
    if matches!(cutoff, CutoffSymbol::TorusMultiplier { .. }) {
        return Err(QciError::Domain(
            "torus multiplier cutoff on a surface of revolution".into(),
        ));
    }
    let a_x = profile.a(x[0]);
    let a_y = profile.a(y[0]);
    let basepoint = 0.5 * (band.0 + band.1);
    let gen = generating_function(sys, basepoint)?;
    let region = SpectralRegion::bx(lambda, c)?;

    // Unit-direction phase g(ψ): Φ(t·ω) = t·g by homogeneity.
    let phase_g = |psi: f64| -> Result<f64> {
        let s_psi = psi.sin();
        let branch = if psi.cos() >= 0.0 { 1.0 } else { -1.0 };
        let omega = [1.0, a_y * s_psi];
        match mode {
            PhaseMode::FullPhase => {
                // Branch reflection negates the radial part of S; the
                // angular part η₂θ is shared.
                let sx = gen.eval(x, &omega)?;
                let sy = gen.eval(y, &omega)?;
                let angular = omega[1] * (x[1] - y[1]);
                let radial = (sx - omega[1] * x[1]) - (sy - omega[1] * y[1]);
                Ok(angular + branch * radial)
            }
            PhaseMode::Linearized => {
                let grad = gen.grad_x(x, &omega)?;
                Ok((x[0] - y[0]) * branch * grad[0] + (x[1] - y[1]) * grad[1])
            }
        }
    };

    let t_max = |psi: f64| -> f64 {
        let ratio = a_y * psi.sin();
        let mut t = c[0].abs() * lambda;
        if ratio.abs() > 1e-300 {
            t = t.min(c[1].abs() * lambda / ratio.abs());
        }
        t
    };

    // Estimate the phase scale to size the quadrature.
    let mut g_scale: f64 = 0.0;
    for k in 0..=16 {
        let psi = TWO_PI * k as f64 / 16.0;
        if chi_weight(cutoff, a_y * psi.sin()) > 0.0 {
            g_scale = g_scale.max(phase_g(psi)?.abs());
        }
    }
    let phase_range = g_scale * c[0].abs() * lambda;
    let panels_per_piece = ((phase_range * 20.0 / (TWO_PI * 16.0)).ceil() as usize).clamp(6, 800);

    let brk = sor_psi_breakpoints(&region, Some(cutoff), a_y);
    // Branch switches at ψ = π/2, 3π/2 are breakpoints too.
    let mut brk = brk;
    brk.push(std::f64::consts::FRAC_PI_2);
    brk.push(1.5 * std::f64::consts::PI);
    brk.sort_by(|p, q| p.partial_cmp(q).unwrap());
    brk.dedup_by(|p, q| (*p - *q).abs() < 1e-12);

    let (nodes, weights) = gauss_legendre(16);
    let mut acc = Complex64::new(0.0, 0.0);
    for w in brk.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo < 1e-14 {
            continue;
        }
        let h = (hi - lo) / panels_per_piece as f64;
        for p in 0..panels_per_piece {
            let a0 = lo + p as f64 * h;
            let half = 0.5 * h;
            let mid = a0 + half;
            for (t, gw) in nodes.iter().zip(&weights) {
                let psi = mid + half * t;
                let wchi = chi_weight(cutoff, a_y * psi.sin());
                if wchi == 0.0 {
                    continue;
                }
                let g = phase_g(psi)?;
                let radial = radial_oscillatory(t_max(psi), g);
                acc += radial * (wchi * wchi * gw * half);
            }
        }
    }
    // Fiber Jacobian a_y from dΣdΘ = a t dt dψ, split into half-density
    // frame factors 1/√(a_x a_y).
    Ok(acc * (a_y / (a_x * a_y).sqrt()) * TWO_PI.powi(-2))
}

fn chi_weight(cutoff: &CutoffSymbol, ratio: f64) -> f64 {
    match cutoff {
        CutoffSymbol::Unity => 1.0,
        CutoffSymbol::SorMultiplier { .. } => cutoff.ratio_value(ratio),
        CutoffSymbol::TorusMultiplier { .. } => 0.0,
    }
}

/// Integrated Colin de Verdière prediction `(2π)⁻ⁿ Vol(p̄⁻¹(region))`.
pub fn integrated_prediction(sys: &ModelSystem, region: &SpectralRegion) -> Result<f64> {
    let n = sys.dim();
    Ok(liouville_volume(sys, region, None)? * TWO_PI.powi(-(n as i32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{builtin_profile, make_surface_of_revolution, make_torus};
    use std::f64::consts::PI;

    #[test]
    fn torus_diagonal_is_box_area() {
        let sys = make_torus(2).unwrap();
        let v = leading_term_diagonal(&sys, &CutoffSymbol::unity(), 10.0, &[0.6, 0.8], &[0.0; 2], None)
            .unwrap();
        let expect = 4.0 * 0.6 * 0.8 * 100.0 / (TWO_PI * TWO_PI);
        assert!((v - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn torus_offdiag_matches_sine_product() {
        let sys = make_torus(2).unwrap();
        let lambda = 37.3;
        let c = [0.6, 0.8];
        let x = [1.0, 2.0];
        let y = [1.01, 1.97];
        let v = leading_term_offdiag(
            &sys,
            &CutoffSymbol::unity(),
            lambda,
            &c,
            &x,
            &y,
            PhaseMode::FullPhase,
            None,
        )
        .unwrap();
        let mut expect = 1.0;
        for k in 0..2 {
            let d: f64 = x[k] - y[k];
            expect *= 2.0 * (c[k] * lambda * d).sin() / d;
        }
        expect /= TWO_PI * TWO_PI;
        assert!((v.re - expect).abs() < 1e-8 * expect.abs().max(1.0), "{} vs {expect}", v.re);
        assert!(v.im.abs() < 1e-9);
    }

    #[test]
    fn sor_diagonal_matches_polar_oracle() {
        // At a(σ) = 1 with c_max < c₂/c₁ the t-cap is constant and the
        // fiber integral reduces to λ²(c₁²/2)·∫χ₀(sin φ)² dφ / (2π)².
        let profile = builtin_profile("sphere", &[], 512).unwrap();
        let sys = make_surface_of_revolution(profile).unwrap();
        let cutoff = CutoffSymbol::sor_ratio(0.0, 0.5, 0.05).unwrap();
        let lambda = 40.0;
        let x = [PI / 2.0, 0.0];
        let v = leading_term_diagonal(&sys, &cutoff, lambda, &[0.8, 0.6], &x, Some((1.0, 2.1)))
            .unwrap();
        let oracle = {
            let f = |phi: f64| cutoff.ratio_value(phi.sin()).powi(2);
            let integral =
                crate::numerics::quad::adaptive_simpson(&f, 0.0, TWO_PI, 1e-12, 40).unwrap();
            lambda * lambda * 0.8 * 0.8 / 2.0 * integral / (TWO_PI * TWO_PI)
        };
        assert!(
            ((v - oracle) / oracle).abs() < 1e-6,
            "{v} vs oracle {oracle}"
        );
    }

    #[test]
    fn sor_offdiag_reduces_to_diagonal() {
        let profile = builtin_profile("sphere", &[], 512).unwrap();
        let sys = make_surface_of_revolution(profile).unwrap();
        let cutoff = CutoffSymbol::sor_ratio(0.0, 0.5, 0.05).unwrap();
        let band = (1.0, 2.1);
        let x = [1.4, 0.3];
        let diag =
            leading_term_diagonal(&sys, &cutoff, 30.0, &[0.8, 0.6], &x, Some(band)).unwrap();
        for mode in [PhaseMode::FullPhase, PhaseMode::Linearized] {
            let v = leading_term_offdiag(&sys, &cutoff, 30.0, &[0.8, 0.6], &x, &x, mode, Some(band))
                .unwrap();
            assert!((v.re - diag).abs() < 1e-9 * diag, "{mode:?}: {} vs {diag}", v.re);
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn torus_modes_coincide() {
        let sys = make_torus(2).unwrap();
        let x = [0.4, 0.9];
        let y = [0.45, 0.86];
        let full = leading_term_offdiag(
            &sys,
            &CutoffSymbol::unity(),
            22.0,
            &[0.6, 0.8],
            &x,
            &y,
            PhaseMode::FullPhase,
            None,
        )
        .unwrap();
        let lin = leading_term_offdiag(
            &sys,
            &CutoffSymbol::unity(),
            22.0,
            &[0.6, 0.8],
            &x,
            &y,
            PhaseMode::Linearized,
            None,
        )
        .unwrap();
        assert!((full - lin).norm() < 1e-12);
    }

    #[test]
    fn band_violation_detected() {
        let profile = builtin_profile("sphere", &[], 512).unwrap();
        let sys = make_surface_of_revolution(profile).unwrap();
        let cutoff = CutoffSymbol::sor_ratio(0.0, 0.5, 0.05).unwrap();
        let err = leading_term_diagonal(&sys, &cutoff, 10.0, &[0.8, 0.6], &[0.2, 0.0], Some((1.0, 2.1)));
        assert!(matches!(err, Err(QciError::OutOfBand(_))));
    }

    #[test]
    fn diagonal_scaling_quadratic() {
        let profile = builtin_profile("bump", &[0.2], 512).unwrap();
        let sys = make_surface_of_revolution(profile).unwrap();
        let cutoff = CutoffSymbol::sor_ratio(0.0, 0.5, 0.05).unwrap();
        let x = [1.5, 0.0];
        let v1 = leading_term_diagonal(&sys, &cutoff, 7.0, &[0.8, 0.6], &x, None).unwrap();
        let v2 = leading_term_diagonal(&sys, &cutoff, 14.0, &[0.8, 0.6], &x, None).unwrap();
        assert!((v2 / v1 - 4.0).abs() < 1e-6, "{}", v2 / v1);
    }

    #[test]
    fn integrated_prediction_torus_ball() {
        let sys = make_torus(2).unwrap();
        let v = integrated_prediction(&sys, &SpectralRegion::ball(2, 10.0)).unwrap();
        // πλ² = 314.159…; the λ = 10 lattice count is 317 (remainder 2.84).
        assert!((v - 100.0 * PI).abs() < 1e-9 * v);
    }
}
