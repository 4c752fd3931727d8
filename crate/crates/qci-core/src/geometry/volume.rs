//! Liouville (symplectic) volumes of `p̄⁻¹(region)` and moment-image
//! membership for the working cones.
//!
//! In canonical coordinates the symplectic volume is `dx dξ`. For a surface
//! of revolution the fiber integral is computed in elliptical polar
//! coordinates `Σ = t cos ψ, Θ = a(σ) t sin ψ` (so `p₁ = t`,
//! `p₂ = a t sin ψ`, `dΣ dΘ = a t dt dψ`); the `t`-integral is exact and the
//! remaining `(σ, ψ)` integrals are done by panel Gauss–Legendre with
//! splitting at the known kink angles.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::QciError;
use crate::geometry::SpectralRegion;
use crate::kernels::CutoffSymbol;
use crate::models::{ModelKind, ModelSystem, ProfileMetric, SymbolSystem};
use crate::numerics::quad::gl_panels;
use crate::Result;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Admissible band and working cone defining `Ω` for microlocalized runs.
#[derive(Debug, Clone)]
pub enum WorkingCone {
    /// SoR: `{σ ∈ [σ₁, σ₂], Σ > 0, |Θ| ≤ ratio_max · p₁}`; its moment image
    /// is the sector `{η₁ > 0, |η₂| ≤ ratio_max · η₁}`.
    SorSector {
        sigma_min: f64,
        sigma_max: f64,
        ratio_max: f64,
    },
    /// Torus Fourier cone around `axis` with the given half-angle.
    TorusCone { axis: Vec<f64>, half_angle: f64 },
}

impl WorkingCone {
    /// Validated SoR band+cone: the band must avoid turning points, i.e.
    /// `ratio_max < min a` over the band.
    pub fn sor(profile: &ProfileMetric, sigma_min: f64, sigma_max: f64, ratio_max: f64) -> Result<Self> {
        if !(0.0 < sigma_min && sigma_min < sigma_max && sigma_max < profile.length) {
            return Err(QciError::config(format!(
                "band [{sigma_min}, {sigma_max}] must sit inside (0, {})",
                profile.length
            )));
        }
        let a_band = profile.a_min_on(sigma_min, sigma_max);
        if !(ratio_max > 0.0 && ratio_max < a_band) {
            return Err(QciError::config(format!(
                "cone ratio_max = {ratio_max} must be below the band minimum of a ({a_band:.6})"
            )));
        }
        Ok(WorkingCone::SorSector {
            sigma_min,
            sigma_max,
            ratio_max,
        })
    }

    pub fn torus(axis: &[f64], half_angle: f64) -> Result<Self> {
        let norm: f64 = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0 && half_angle > 0.0 && half_angle < std::f64::consts::PI) {
            return Err(QciError::config("torus cone needs a nonzero axis and angle in (0, π)"));
        }
        Ok(WorkingCone::TorusCone {
            axis: axis.iter().map(|v| v / norm).collect(),
            half_angle,
        })
    }

    pub fn band(&self) -> Option<(f64, f64)> {
        match self {
            WorkingCone::SorSector {
                sigma_min,
                sigma_max,
                ..
            } => Some((*sigma_min, *sigma_max)),
            WorkingCone::TorusCone { .. } => None,
        }
    }
}

/// Is `η ∈ p̄(Ω)` for the working cone?
pub fn moment_image_contains(sys: &ModelSystem, cone: &WorkingCone, eta: &[f64]) -> bool {
    debug_assert!(eta.iter().any(|v| *v != 0.0));
    match (&sys.kind, cone) {
        (ModelKind::SurfaceOfRevolution { .. }, WorkingCone::SorSector { ratio_max, .. }) => {
            eta[0] > 0.0 && eta[1].abs() <= ratio_max * eta[0]
        }
        (ModelKind::FlatTorus { .. }, WorkingCone::TorusCone { axis, half_angle }) => {
            let norm: f64 = eta.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                return false;
            }
            let cosang = eta.iter().zip(axis).map(|(a, b)| a * b).sum::<f64>() / norm;
            cosang.clamp(-1.0, 1.0).acos() <= *half_angle
        }
        _ => false,
    }
}

/// Liouville volume `∫∫ 1{p̄(x,ξ) ∈ region} · w(x,ξ)² dx dξ`.
///
/// Torus with no weight uses exact product/sector formulas; all other cases
/// use the polar reductions with relative quadrature tolerance ~1e-6.
pub fn liouville_volume(
    sys: &ModelSystem,
    region: &SpectralRegion,
    weight: Option<&CutoffSymbol>,
) -> Result<f64> {
    if !region.is_bounded() {
        return Err(QciError::Domain("liouville_volume needs a bounded region".into()));
    }
    match &sys.kind {
        ModelKind::FlatTorus { n } => torus_volume(*n, region, weight),
        ModelKind::SurfaceOfRevolution { profile } => sor_volume(profile, region, weight),
    }
}

fn torus_volume(n: usize, region: &SpectralRegion, weight: Option<&CutoffSymbol>) -> Result<f64> {
    let x_volume = TWO_PI.powi(n as i32);
    Ok(x_volume * torus_fiber_integral(n, region, weight)?)
}

/// `∫ 1{ξ ∈ region} ψ(ξ/|ξ|)² dξ` over the torus fiber (= η-space).
pub(crate) fn torus_fiber_integral(
    n: usize,
    region: &SpectralRegion,
    weight: Option<&CutoffSymbol>,
) -> Result<f64> {
    match weight {
        None | Some(CutoffSymbol::Unity) => {
            // Exact region volumes.
            let v = match region {
                SpectralRegion::Box { lambda, c } => {
                    c.iter().map(|ci| 2.0 * ci.abs() * lambda).product()
                }
                SpectralRegion::UnitBox { .. } => 1.0,
                SpectralRegion::ConeSector {
                    half_angle, radius, ..
                } => {
                    if n != 2 {
                        return Err(QciError::Domain(
                            "cone-sector volume implemented for n = 2".into(),
                        ));
                    }
                    let ang = half_angle.min(std::f64::consts::PI);
                    ang * radius * radius
                }
            };
            Ok(v)
        }
        Some(cutoff) => {
            if n != 2 {
                return Err(QciError::Domain(
                    "weighted torus volume implemented for n = 2".into(),
                ));
            }
            // Polar: ∫ ψ(φ)² r_max(φ)²/2 dφ.
            let integrand = |phi: f64| {
                let dir = [phi.cos(), phi.sin()];
                let r = torus_radial_extent(region, &dir);
                let w = cutoff.direction_value(&dir);
                w * w * 0.5 * r * r
            };
            let brk = torus_angular_breakpoints(region, cutoff);
            Ok(integrate_piecewise(&integrand, &brk))
        }
    }
}

/// Radial extent of the region along a unit direction (from the origin).
fn torus_radial_extent(region: &SpectralRegion, dir: &[f64]) -> f64 {
    match region {
        SpectralRegion::Box { lambda, c } => {
            let mut r = f64::INFINITY;
            for (d, ci) in dir.iter().zip(c) {
                if d.abs() > 1e-300 {
                    r = r.min(ci.abs() * lambda / d.abs());
                }
            }
            r
        }
        SpectralRegion::ConeSector {
            axis,
            half_angle,
            radius,
        } => {
            let cosang: f64 = dir.iter().zip(axis).map(|(a, b)| a * b).sum();
            if cosang.clamp(-1.0, 1.0).acos() <= *half_angle {
                *radius
            } else {
                0.0
            }
        }
        SpectralRegion::UnitBox { mu } => {
            // Entry/exit of the ray through the box: contributes
            // (r_hi² − r_lo²)/2; encode as effective extent.
            let (lo, hi) = ray_box_interval(dir, mu);
            if hi > lo {
                (hi * hi - lo * lo).sqrt()
            } else {
                0.0
            }
        }
    }
}

fn ray_box_interval(dir: &[f64], mu: &[f64]) -> (f64, f64) {
    let mut lo = 0.0f64;
    let mut hi = f64::INFINITY;
    for (d, m) in dir.iter().zip(mu) {
        if d.abs() < 1e-300 {
            if *m > 0.0 || m + 1.0 < 0.0 {
                return (0.0, 0.0);
            }
        } else {
            let t1 = m / d;
            let t2 = (m + 1.0) / d;
            lo = lo.max(t1.min(t2));
            hi = hi.min(t1.max(t2));
        }
    }
    (lo, hi.max(lo))
}

fn torus_angular_breakpoints(region: &SpectralRegion, cutoff: &CutoffSymbol) -> Vec<f64> {
    let mut brk = vec![0.0, TWO_PI];
    match region {
        SpectralRegion::Box { c, .. } => {
            let corner = (c[1].abs()).atan2(c[0].abs());
            for r in [
                corner,
                std::f64::consts::PI - corner,
                std::f64::consts::PI + corner,
                TWO_PI - corner,
            ] {
                brk.push(r);
            }
        }
        SpectralRegion::ConeSector {
            axis, half_angle, ..
        } => {
            let a0 = axis[1].atan2(axis[0]);
            for s in [-1.0, 1.0] {
                brk.push((a0 + s * half_angle).rem_euclid(TWO_PI));
            }
        }
        SpectralRegion::UnitBox { mu } => {
            for corner in [
                (mu[0], mu[1]),
                (mu[0] + 1.0, mu[1]),
                (mu[0], mu[1] + 1.0),
                (mu[0] + 1.0, mu[1] + 1.0),
            ] {
                brk.push(corner.1.atan2(corner.0).rem_euclid(TWO_PI));
            }
        }
    }
    if let CutoffSymbol::TorusMultiplier {
        axis,
        inner_angle,
        outer_angle,
    } = cutoff
    {
        let a0 = axis[1].atan2(axis[0]);
        for ang in [*inner_angle, *outer_angle] {
            for s in [-1.0, 1.0] {
                brk.push((a0 + s * ang).rem_euclid(TWO_PI));
            }
        }
    }
    brk.sort_by(|a, b| a.partial_cmp(b).unwrap());
    brk.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    brk
}

/// Integrate over [brk₀, brk_last] splitting at each breakpoint; panel GL
/// with doubling until the relative change is below 1e-7.
pub(crate) fn integrate_piecewise(f: &dyn Fn(f64) -> f64, breakpoints: &[f64]) -> f64 {
    let mut total = 0.0;
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a < 1e-14 {
            continue;
        }
        let mut panels = 4;
        let mut prev = gl_panels(f, a, b, 32, panels);
        loop {
            panels *= 2;
            let next = gl_panels(f, a, b, 32, panels);
            if (next - prev).abs() <= 1e-7 * next.abs().max(1e-12) || panels >= 64 {
                prev = next;
                break;
            }
            prev = next;
        }
        total += prev;
    }
    total
}

fn sor_volume(
    profile: &ProfileMetric,
    region: &SpectralRegion,
    weight: Option<&CutoffSymbol>,
) -> Result<f64> {
    if let Some(CutoffSymbol::TorusMultiplier { .. }) = weight {
        return Err(QciError::Domain(
            "torus multiplier weight on a surface of revolution".into(),
        ));
    }
    let fiber = |sigma: f64| sor_fiber_integral(profile, sigma, region, weight);
    // σ-integral over [0, L] with panel doubling.
    let mut panels = 16;
    let mut prev = gl_panels(fiber, 0.0, profile.length, 32, panels);
    loop {
        panels *= 2;
        let next = gl_panels(fiber, 0.0, profile.length, 32, panels);
        if (next - prev).abs() <= 1e-6 * next.abs().max(1e-12) || panels >= 128 {
            prev = next;
            break;
        }
        prev = next;
    }
    Ok(TWO_PI * prev)
}

/// `∫∫ 1{p̄(σ,·,ξ) ∈ region} w(p₂/p₁)² dΣ dΘ` over the fiber at σ, in
/// elliptical polar coordinates with the exact t-integral.
pub(crate) fn sor_fiber_integral(
    profile: &ProfileMetric,
    sigma: f64,
    region: &SpectralRegion,
    weight: Option<&CutoffSymbol>,
) -> f64 {
    let a = profile.a(sigma);
    if a <= 0.0 {
        return 0.0;
    }
    let ratio_weight = |r: f64| -> f64 {
        match weight {
            None | Some(CutoffSymbol::Unity) => 1.0,
            Some(c) => c.ratio_value(r),
        }
    };
    let integrand = |psi: f64| {
        let ratio = a * psi.sin();
        let w = ratio_weight(ratio);
        if w == 0.0 {
            return 0.0;
        }
        w * w * 0.5 * sor_t_quadratic(region, ratio)
    };
    let brk = sor_psi_breakpoints(region, weight, a);
    a * integrate_piecewise(&integrand, &brk)
}

/// `t_hi² − t_lo²` over the admissible t-range for direction parameter
/// `ratio = a sin ψ` (η = (t, t·ratio)); divided by 2 at the call site.
/// Exact per region.
pub(crate) fn sor_t_quadratic(region: &SpectralRegion, ratio: f64) -> f64 {
    match region {
        SpectralRegion::Box { lambda, c } => {
            let mut t_max = c[0].abs() * lambda;
            if ratio.abs() > 1e-300 {
                t_max = t_max.min(c[1].abs() * lambda / ratio.abs());
            }
            t_max * t_max
        }
        SpectralRegion::ConeSector {
            axis,
            half_angle,
            radius,
        } => {
            let norm = (1.0 + ratio * ratio).sqrt();
            let dir = [1.0 / norm, ratio / norm];
            let cosang: f64 = dir.iter().zip(axis).map(|(a, b)| a * b).sum();
            if cosang.clamp(-1.0, 1.0).acos() <= *half_angle {
                let t = radius / norm;
                t * t
            } else {
                0.0
            }
        }
        SpectralRegion::UnitBox { mu } => {
            // η₁ = t ∈ [μ₁, μ₁+1], η₂ = t·ratio ∈ [μ₂, μ₂+1].
            let mut lo = mu[0].max(0.0);
            let mut hi = mu[0] + 1.0;
            if ratio.abs() > 1e-300 {
                let (b1, b2) = (mu[1] / ratio, (mu[1] + 1.0) / ratio);
                lo = lo.max(b1.min(b2));
                hi = hi.min(b1.max(b2));
            } else if mu[1] > 0.0 || mu[1] + 1.0 < 0.0 {
                return 0.0;
            }
            if hi > lo {
                hi * hi - lo * lo
            } else {
                0.0
            }
        }
    }
}

/// ψ breakpoints: solutions of a sin ψ = v for kink values v of the region
/// and cutoff shoulders.
pub(crate) fn sor_psi_breakpoints(
    region: &SpectralRegion,
    weight: Option<&CutoffSymbol>,
    a: f64,
) -> Vec<f64> {
    let mut ratios: Vec<f64> = Vec::new();
    match region {
        SpectralRegion::Box { c, .. } => {
            // t_max switches edges where ratio = ±c₂/c₁.
            ratios.push(c[1].abs() / c[0].abs());
        }
        SpectralRegion::ConeSector {
            axis, half_angle, ..
        } => {
            // Cone edges: direction angle = axis angle ± half-angle, i.e.
            // ratio = tan(edge angle).
            let a0 = axis[1].atan2(axis[0]);
            for s in [-1.0, 1.0] {
                let edge = a0 + s * half_angle;
                if edge.abs() < std::f64::consts::FRAC_PI_2 - 1e-9 {
                    ratios.push(edge.tan());
                }
            }
        }
        SpectralRegion::UnitBox { mu } => {
            for corner in [
                (mu[0], mu[1]),
                (mu[0] + 1.0, mu[1]),
                (mu[0], mu[1] + 1.0),
                (mu[0] + 1.0, mu[1] + 1.0),
            ] {
                if corner.0.abs() > 1e-300 {
                    ratios.push(corner.1 / corner.0);
                }
            }
        }
    }
    if let Some(c) = weight {
        ratios.extend(c.ratio_breakpoints());
    }
    let mut brk = vec![0.0, TWO_PI];
    let pi = std::f64::consts::PI;
    for v in ratios {
        for r in [v, -v] {
            let s = r / a;
            if s.abs() <= 1.0 {
                let base = s.asin(); // in [-π/2, π/2]
                for psi in [base, pi - base] {
                    brk.push(psi.rem_euclid(TWO_PI));
                }
            }
        }
    }
    brk.sort_by(|a, b| a.partial_cmp(b).unwrap());
    brk.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    brk
}

/// Monte Carlo cross-check/fallback for Liouville volumes; fixed seed for
/// reproducibility. Samples the canonical coordinates uniformly over a
/// bounding box of `p̄⁻¹(region)`.
pub fn monte_carlo_volume(
    sys: &ModelSystem,
    region: &SpectralRegion,
    weight: Option<&CutoffSymbol>,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if !region.is_bounded() {
        return Err(QciError::Domain("monte_carlo_volume needs a bounded region".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bb = region.bounding_box();
    match &sys.kind {
        ModelKind::FlatTorus { n } => {
            let mut acc = 0.0;
            let mut vol = TWO_PI.powi(*n as i32);
            for (lo, hi) in &bb {
                vol *= hi - lo;
            }
            for _ in 0..samples {
                let xi: Vec<f64> = bb.iter().map(|(lo, hi)| rng.random_range(*lo..*hi)).collect();
                if region.contains(&xi) {
                    let w = weight.map(|c| c.weight(&xi)).unwrap_or(1.0);
                    acc += w * w;
                }
            }
            Ok(vol * acc / samples as f64)
        }
        ModelKind::SurfaceOfRevolution { profile } => {
            // |Σ| ≤ max|η₁|, |Θ| = |p₂| ≤ max|η₂|.
            let s_max = bb[0].0.abs().max(bb[0].1.abs());
            let t_max = bb[1].0.abs().max(bb[1].1.abs());
            let vol = TWO_PI * profile.length * (2.0 * s_max) * (2.0 * t_max);
            let mut acc = 0.0;
            for _ in 0..samples {
                let sigma = rng.random_range(0.0..profile.length);
                let cap_s = rng.random_range(-s_max..s_max);
                let cap_t = rng.random_range(-t_max..t_max);
                let p = sys.moment_map(&[sigma, 0.0], &[cap_s, cap_t]);
                if region.contains(&p) {
                    let w = match weight {
                        None | Some(CutoffSymbol::Unity) => 1.0,
                        Some(c) => c.weight(&p),
                    };
                    acc += w * w;
                }
            }
            Ok(vol * acc / samples as f64)
        }
    }
}
