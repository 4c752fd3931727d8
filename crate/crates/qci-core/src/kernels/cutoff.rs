//! Microlocal cutoffs Ψ realized as joint-spectral multipliers.
//!
//! On the torus, Ψ is a translation-invariant multiplier ψ(ξ/|ξ|); on a
//! surface of revolution it is the 0th-order multiplier with symbol
//! χ₀(p₂/p₁), microsupported in the cone {|Θ| ≤ c_max·|ξ|_g}. An eigenpair
//! with joint eigenvalue λ̄ receives the weight w = χ₀(λ₂/λ₁) (resp.
//! ψ(k/‖k‖)); kernels sum w² |φ⟩⟨φ|.

use crate::error::QciError;
use crate::numerics::bump::smooth01;
use crate::Result;

#[derive(Debug, Clone)]
pub enum CutoffSymbol {
    /// Ψ = I (no microlocalization).
    Unity,
    /// Torus direction cutoff: 1 for angle(ξ, axis) ≤ inner_angle, 0 beyond
    /// outer_angle, smoothstep between.
    TorusMultiplier {
        axis: Vec<f64>,
        inner_angle: f64,
        outer_angle: f64,
    },
    /// Even function χ₀ of the ratio r = η₂/η₁: 0 outside [c_min, c_max] in
    /// |r|, 1 on [c_min + width, c_max − width] (plateau reaches r = 0 when
    /// c_min = 0), exponential-type smoothstep shoulders.
    SorMultiplier { c_min: f64, c_max: f64, width: f64 },
}

impl CutoffSymbol {
    pub fn unity() -> Self {
        CutoffSymbol::Unity
    }

    pub fn torus_cone(axis: &[f64], inner_angle: f64, outer_angle: f64) -> Result<Self> {
        let norm: f64 = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(QciError::config("torus cutoff needs a nonzero axis"));
        }
        if !(0.0 < inner_angle && inner_angle < outer_angle && outer_angle <= std::f64::consts::PI)
        {
            return Err(QciError::config(
                "torus cutoff needs 0 < inner_angle < outer_angle ≤ π",
            ));
        }
        Ok(CutoffSymbol::TorusMultiplier {
            axis: axis.iter().map(|v| v / norm).collect(),
            inner_angle,
            outer_angle,
        })
    }

    pub fn sor_ratio(c_min: f64, c_max: f64, width: f64) -> Result<Self> {
        let plateau_lo = if c_min > 0.0 { c_min + width } else { 0.0 };
        if !(c_min >= 0.0 && width > 0.0 && plateau_lo < c_max - width) {
            return Err(QciError::config(
                "sor cutoff needs 0 ≤ c_min, width > 0 and a nonempty plateau",
            ));
        }
        Ok(CutoffSymbol::SorMultiplier { c_min, c_max, width })
    }

    /// χ₀ as a function of the ratio r = η₂/η₁ (surfaces of revolution).
    pub fn ratio_value(&self, r: f64) -> f64 {
        match self {
            CutoffSymbol::Unity => 1.0,
            CutoffSymbol::TorusMultiplier { .. } => {
                panic!("ratio_value applies to SoR multipliers")
            }
            CutoffSymbol::SorMultiplier { c_min, c_max, width } => {
                let r = r.abs();
                if r >= *c_max {
                    0.0
                } else if r > c_max - width {
                    smooth01((c_max - r) / width)
                } else if *c_min == 0.0 || r >= c_min + width {
                    1.0
                } else if r > *c_min {
                    smooth01((r - c_min) / width)
                } else {
                    0.0
                }
            }
        }
    }

    /// ψ as a function of a fiber direction (torus).
    pub fn direction_value(&self, u: &[f64]) -> f64 {
        match self {
            CutoffSymbol::Unity => 1.0,
            CutoffSymbol::SorMultiplier { .. } => {
                panic!("direction_value applies to torus multipliers")
            }
            CutoffSymbol::TorusMultiplier {
                axis,
                inner_angle,
                outer_angle,
            } => {
                let norm: f64 = u.iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return 0.0;
                }
                let cosang = u.iter().zip(axis).map(|(a, b)| a * b).sum::<f64>() / norm;
                let ang = cosang.clamp(-1.0, 1.0).acos();
                if ang <= *inner_angle {
                    1.0
                } else if ang >= *outer_angle {
                    0.0
                } else {
                    smooth01((outer_angle - ang) / (outer_angle - inner_angle))
                }
            }
        }
    }

    /// Multiplier weight for a joint eigenvalue λ̄ (NOT squared).
    pub fn weight(&self, lam: &[f64]) -> f64 {
        match self {
            CutoffSymbol::Unity => 1.0,
            CutoffSymbol::TorusMultiplier { .. } => self.direction_value(lam),
            CutoffSymbol::SorMultiplier { .. } => {
                if lam[0] <= 0.0 {
                    // λ₁ = 0 only for the constant; a 0th-order microlocal
                    // cutoff assigns it no mass.
                    0.0
                } else {
                    self.ratio_value(lam[1] / lam[0])
                }
            }
        }
    }

    /// Largest |η₂/η₁| in the support (SoR), or None for other kinds.
    pub fn ratio_support_max(&self) -> Option<f64> {
        match self {
            CutoffSymbol::SorMultiplier { c_max, .. } => Some(*c_max),
            _ => None,
        }
    }

    /// Breakpoints of χ₀(sin-angle profile) used to split quadratures at
    /// shoulder edges: the |r| values where smoothness classes change.
    pub fn ratio_breakpoints(&self) -> Vec<f64> {
        match self {
            CutoffSymbol::SorMultiplier { c_min, c_max, width } => {
                let mut v = vec![*c_max, c_max - width];
                if *c_min > 0.0 {
                    v.push(*c_min);
                    v.push(c_min + width);
                }
                v
            }
            _ => Vec::new(),
        }
    }
}
