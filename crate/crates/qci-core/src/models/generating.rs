//! Generating functions `S(x; η)` solving `p_i(x, ∇ₓS) = η_i`.
//!
//! On the torus, `S = x·η`. On a surface of revolution the separated phase is
//!
//! ```text
//! S(σ, θ; η) = η₂ θ + ∫_{σ₀}^{σ} √(η₁² − η₂²/a(s)²) ds,
//! ```
//!
//! the positive `Σ`-branch, defined where `η₁² a(σ)² > η₂²` along the path
//! (no turning point). S is fixed only up to an x-independent function of η;
//! the basepoint drops out of the phase differences `S(x,ξ) − S(y,ξ)`.

use crate::error::QciError;
use crate::models::{ModelKind, ModelSystem, SymbolSystem};
use crate::numerics::quad::adaptive_simpson;
use crate::Result;

/// Absolute quadrature tolerance for the σ-integral of S.
const S_QUAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct GeneratingFunction {
    pub system: ModelSystem,
    /// Basepoint σ₀ of the σ-integral (surfaces of revolution only).
    pub basepoint: f64,
}

/// Build the generating function for a model system. For surfaces of
/// revolution, `basepoint` must lie strictly inside `(0, L)`.
pub fn generating_function(system: &ModelSystem, basepoint: f64) -> Result<GeneratingFunction> {
    if let ModelKind::SurfaceOfRevolution { profile } = &system.kind {
        if !(basepoint > 0.0 && basepoint < profile.length) {
            return Err(QciError::config(format!(
                "basepoint σ₀ = {basepoint} outside (0, {})",
                profile.length
            )));
        }
    }
    Ok(GeneratingFunction {
        system: system.clone(),
        basepoint,
    })
}

impl GeneratingFunction {
    /// S(x; η).
    pub fn eval(&self, x: &[f64], eta: &[f64]) -> Result<f64> {
        match &self.system.kind {
            ModelKind::FlatTorus { n } => {
                Ok((0..*n).map(|i| x[i] * eta[i]).sum())
            }
            ModelKind::SurfaceOfRevolution { profile } => {
                let (sigma, theta) = (x[0], x[1]);
                let (e1, e2) = (eta[0], eta[1]);
                self.check_band_along(profile, sigma, e1, e2)?;
                let radial = if (sigma - self.basepoint).abs() < 1e-300 {
                    0.0
                } else {
                    let f = |s: f64| {
                        let a = profile.a(s);
                        (e1 * e1 - e2 * e2 / (a * a)).max(0.0).sqrt()
                    };
                    adaptive_simpson(&f, self.basepoint, sigma, S_QUAD_TOL, 45)
                        .map_err(|m| QciError::numeric("generating function quadrature", m))?
                };
                Ok(e2 * theta + radial)
            }
        }
    }

    /// ∇ₓS(x; η): `(√(η₁² − η₂²/a(σ)²), η₂)` on a surface of revolution,
    /// `η` on the torus.
    pub fn grad_x(&self, x: &[f64], eta: &[f64]) -> Result<Vec<f64>> {
        match &self.system.kind {
            ModelKind::FlatTorus { .. } => Ok(eta.to_vec()),
            ModelKind::SurfaceOfRevolution { profile } => {
                let sigma = x[0];
                let (e1, e2) = (eta[0], eta[1]);
                let a = profile.a(sigma);
                let radicand = e1 * e1 - e2 * e2 / (a * a);
                if e1 <= 0.0 || radicand <= 0.0 {
                    return Err(QciError::OutOfBand(format!(
                        "∇S at σ = {sigma}: η₁² a² = {:.6e} ≤ η₂² = {:.6e}",
                        e1 * e1 * a * a,
                        e2 * e2
                    )));
                }
                Ok(vec![radicand.sqrt(), e2])
            }
        }
    }

    /// Defining-property residual `max_i |p_i(x, ∇ₓS(x;η)) − η_i|`.
    pub fn defining_residual(&self, x: &[f64], eta: &[f64]) -> Result<f64> {
        let grad = self.grad_x(x, eta)?;
        let p = self.system.moment_map(x, &grad);
        Ok(p
            .iter()
            .zip(eta)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    fn check_band_along(
        &self,
        profile: &crate::models::ProfileMetric,
        sigma: f64,
        e1: f64,
        e2: f64,
    ) -> Result<()> {
        if !(0.0..=profile.length).contains(&sigma) {
            return Err(QciError::Domain(format!(
                "σ = {sigma} outside [0, {}]",
                profile.length
            )));
        }
        if e1 <= 0.0 {
            return Err(QciError::OutOfBand(format!(
                "η₁ = {e1} must be positive on the working cone"
            )));
        }
        let lo = sigma.min(self.basepoint);
        let hi = sigma.max(self.basepoint);
        let a_min = profile.a_min_on(lo, hi);
        if e1 * e1 * a_min * a_min <= e2 * e2 {
            return Err(QciError::OutOfBand(format!(
                "turning point between σ₀ = {} and σ = {sigma}: min η₁²a² = {:.6e} ≤ η₂² = {:.6e}",
                self.basepoint,
                e1 * e1 * a_min * a_min,
                e2 * e2
            )));
        }
        Ok(())
    }
}
