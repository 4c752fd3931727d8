//! Counting/projection regions in joint-spectrum space.

use crate::error::QciError;
use crate::Result;

/// A region of `ℝⁿ` used for counting and projection.
///
/// - `Box`: `I(λ, c̄) = ∏ [-|c_i|λ, |c_i|λ]` with `c̄` a unit vector, all
///   components nonzero.
/// - `UnitBox`: `R_μ̄ = ∏ [μ_k, μ_k + 1]`.
/// - `ConeSector`: directions within `half_angle` of `axis`, radius ≤ λ.
///   A half-angle ≥ π is the full ball (then the origin is included).
#[derive(Debug, Clone)]
pub enum SpectralRegion {
    Box { lambda: f64, c: Vec<f64> },
    UnitBox { mu: Vec<f64> },
    ConeSector { axis: Vec<f64>, half_angle: f64, radius: f64 },
}

impl SpectralRegion {
    /// `I(λ, c̄)`; validates `‖c̄‖ = 1` (to 1e-12) and `c_i ≠ 0`.
    pub fn bx(lambda: f64, c: &[f64]) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(QciError::config("box needs λ > 0"));
        }
        if c.iter().any(|v| *v == 0.0) {
            return Err(QciError::config("c̄ components must be nonzero"));
        }
        let norm: f64 = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(QciError::config(format!(
                "c̄ must be a unit vector; ‖c̄‖ = {norm:.15}"
            )));
        }
        Ok(SpectralRegion::Box {
            lambda,
            c: c.to_vec(),
        })
    }

    pub fn unit_box(mu: &[f64]) -> Self {
        SpectralRegion::UnitBox { mu: mu.to_vec() }
    }

    pub fn cone_sector(axis: &[f64], half_angle: f64, radius: f64) -> Result<Self> {
        let norm: f64 = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0) || !(radius > 0.0) || !(half_angle > 0.0) {
            return Err(QciError::config("cone sector needs nonzero axis, radius, angle"));
        }
        Ok(SpectralRegion::ConeSector {
            axis: axis.iter().map(|v| v / norm).collect(),
            half_angle,
            radius,
        })
    }

    /// Ball of radius λ (full-angle cone).
    pub fn ball(n: usize, radius: f64) -> Self {
        let mut axis = vec![0.0; n];
        axis[0] = 1.0;
        SpectralRegion::ConeSector {
            axis,
            half_angle: std::f64::consts::PI,
            radius,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SpectralRegion::Box { c, .. } => c.len(),
            SpectralRegion::UnitBox { mu } => mu.len(),
            SpectralRegion::ConeSector { axis, .. } => axis.len(),
        }
    }

    /// Signed distance-like margin: positive inside, negative outside, zero
    /// on the boundary. For boxes this is the ∞-norm margin; for cones the
    /// min of the radial margin and the (arc-length-scaled) angular margin.
    pub fn margin(&self, point: &[f64]) -> f64 {
        match self {
            SpectralRegion::Box { lambda, c } => {
                let mut m = f64::INFINITY;
                for (p, ci) in point.iter().zip(c) {
                    m = m.min(ci.abs() * lambda - p.abs());
                }
                m
            }
            SpectralRegion::UnitBox { mu } => {
                let mut m = f64::INFINITY;
                for (p, lo) in point.iter().zip(mu) {
                    m = m.min(p - lo).min(lo + 1.0 - p);
                }
                m
            }
            SpectralRegion::ConeSector {
                axis,
                half_angle,
                radius,
            } => {
                let norm: f64 = point.iter().map(|v| v * v).sum::<f64>().sqrt();
                let radial = radius - norm;
                if *half_angle >= std::f64::consts::PI - 1e-12 {
                    return radial;
                }
                if norm == 0.0 {
                    // Origin is outside a proper cone; margin = distance to it.
                    return -f64::MIN_POSITIVE;
                }
                let cosang = point
                    .iter()
                    .zip(axis)
                    .map(|(p, a)| p * a)
                    .sum::<f64>()
                    / norm;
                let ang = cosang.clamp(-1.0, 1.0).acos();
                radial.min((half_angle - ang) * norm)
            }
        }
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        self.margin(point) >= 0.0
    }

    /// Per-axis bounding intervals.
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        match self {
            SpectralRegion::Box { lambda, c } => c
                .iter()
                .map(|ci| (-ci.abs() * lambda, ci.abs() * lambda))
                .collect(),
            SpectralRegion::UnitBox { mu } => mu.iter().map(|m| (*m, m + 1.0)).collect(),
            SpectralRegion::ConeSector { axis, radius, .. } => {
                axis.iter().map(|_| (-radius, *radius)).collect()
            }
        }
    }

    /// Radius of the largest origin-centered ball contained in the region
    /// (0 for regions that do not contain a neighborhood of the origin).
    pub fn inscribed_ball_radius(&self) -> f64 {
        match self {
            SpectralRegion::Box { lambda, c } => c
                .iter()
                .map(|ci| ci.abs() * lambda)
                .fold(f64::INFINITY, f64::min),
            SpectralRegion::UnitBox { .. } => 0.0,
            SpectralRegion::ConeSector {
                half_angle, radius, ..
            } => {
                if *half_angle >= std::f64::consts::PI - 1e-12 {
                    *radius
                } else {
                    0.0
                }
            }
        }
    }

    /// Radius of the smallest origin-centered ball containing the region.
    pub fn bounding_radius(&self) -> f64 {
        match self {
            SpectralRegion::Box { lambda, c } => {
                (c.iter().map(|ci| ci * ci).sum::<f64>()).sqrt() * lambda
            }
            SpectralRegion::UnitBox { mu } => mu
                .iter()
                .map(|m| m.abs().max((m + 1.0).abs()).powi(2))
                .sum::<f64>()
                .sqrt(),
            SpectralRegion::ConeSector { radius, .. } => *radius,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.bounding_radius().is_finite()
    }

    /// Whether the boundary-tie rule applies. Box-type regions implement the
    /// counting hypotheses of the pointwise law (`λc̄ ∉ Λ`), so a spectrum
    /// point within 1e-9 of their boundary is an error; closed balls and
    /// sectors count boundary points (the integrated law absorbs them in
    /// the remainder).
    pub fn tie_sensitive(&self) -> bool {
        matches!(
            self,
            SpectralRegion::Box { .. } | SpectralRegion::UnitBox { .. }
        )
    }
}
