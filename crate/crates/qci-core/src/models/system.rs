//! Model systems and their principal symbols, fiber gradients, and full
//! phase-space gradients.

use std::sync::Arc;

use crate::error::QciError;
use crate::models::ProfileMetric;
use crate::Result;

/// Closed-form symbol data used by the geometry module: the moment map and
/// its gradients in canonical coordinates `(x; ξ)`.
pub trait SymbolSystem {
    /// Number of commuting symbols (= spatial dimension).
    fn dim(&self) -> usize;
    /// Moment map `p̄(x, ξ)`.
    fn moment_map(&self, x: &[f64], xi: &[f64]) -> Vec<f64>;
    /// Row-major `n×n` matrix `[∂p_i/∂ξ_j]`.
    fn fiber_jacobian(&self, x: &[f64], xi: &[f64]) -> Vec<f64>;
    /// Row-major `n×2n` matrix `[d_{x,ξ} p_i]`, x-columns first.
    fn full_gradient(&self, x: &[f64], xi: &[f64]) -> Vec<f64>;
}

#[derive(Debug, Clone)]
pub enum ModelKind {
    FlatTorus { n: usize },
    SurfaceOfRevolution { profile: Arc<ProfileMetric> },
}

/// A concrete QCI model system.
#[derive(Debug, Clone)]
pub struct ModelSystem {
    pub kind: ModelKind,
}

/// Standard flat torus `ℝⁿ/(2πℤ)ⁿ` with `p_i = ξ_i`, `1 ≤ n ≤ 4`.
pub fn make_torus(n: usize) -> Result<ModelSystem> {
    if !(1..=4).contains(&n) {
        return Err(QciError::config(format!(
            "torus dimension must be in 1..=4, got {n}"
        )));
    }
    Ok(ModelSystem {
        kind: ModelKind::FlatTorus { n },
    })
}

/// Surface of revolution with the given profile; symbols
/// `p₁ = √(Σ² + Θ²/a²)`, `p₂ = Θ`, Riemannian volume `a dσ dθ`.
pub fn make_surface_of_revolution(profile: ProfileMetric) -> Result<ModelSystem> {
    profile.revalidate()?;
    Ok(ModelSystem {
        kind: ModelKind::SurfaceOfRevolution {
            profile: Arc::new(profile),
        },
    })
}

impl ModelSystem {
    pub fn dim(&self) -> usize {
        match &self.kind {
            ModelKind::FlatTorus { n } => *n,
            ModelKind::SurfaceOfRevolution { .. } => 2,
        }
    }

    pub fn profile(&self) -> Option<&ProfileMetric> {
        match &self.kind {
            ModelKind::SurfaceOfRevolution { profile } => Some(profile),
            _ => None,
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self.kind, ModelKind::FlatTorus { .. })
    }

    /// Riemannian/Lebesgue volume density at `x` (1 on the torus, `a(σ)` on
    /// a surface of revolution).
    pub fn volume_density(&self, x: &[f64]) -> f64 {
        match &self.kind {
            ModelKind::FlatTorus { .. } => 1.0,
            ModelKind::SurfaceOfRevolution { profile } => profile.a(x[0]),
        }
    }

    pub fn descriptor(&self) -> String {
        match &self.kind {
            ModelKind::FlatTorus { n } => format!("torus{n}"),
            ModelKind::SurfaceOfRevolution { profile } => profile.name.clone(),
        }
    }
}

impl SymbolSystem for ModelSystem {
    fn dim(&self) -> usize {
        ModelSystem::dim(self)
    }

    fn moment_map(&self, x: &[f64], xi: &[f64]) -> Vec<f64> {
        match &self.kind {
            ModelKind::FlatTorus { n } => {
                debug_assert_eq!(xi.len(), *n);
                xi.to_vec()
            }
            ModelKind::SurfaceOfRevolution { profile } => {
                let a = profile.a(x[0]);
                let (cap_sigma, cap_theta) = (xi[0], xi[1]);
                let p1 = (cap_sigma * cap_sigma + cap_theta * cap_theta / (a * a)).sqrt();
                vec![p1, cap_theta]
            }
        }
    }

    fn fiber_jacobian(&self, x: &[f64], xi: &[f64]) -> Vec<f64> {
        match &self.kind {
            ModelKind::FlatTorus { n } => {
                let n = *n;
                let mut j = vec![0.0; n * n];
                for i in 0..n {
                    j[i * n + i] = 1.0;
                }
                j
            }
            ModelKind::SurfaceOfRevolution { profile } => {
                let a = profile.a(x[0]);
                let (cap_sigma, cap_theta) = (xi[0], xi[1]);
                let p1 = (cap_sigma * cap_sigma + cap_theta * cap_theta / (a * a)).sqrt();
                // [[∂p₁/∂Σ, ∂p₁/∂Θ], [0, 1]]
                vec![cap_sigma / p1, cap_theta / (a * a * p1), 0.0, 1.0]
            }
        }
    }

    fn full_gradient(&self, x: &[f64], xi: &[f64]) -> Vec<f64> {
        match &self.kind {
            ModelKind::FlatTorus { n } => {
                let n = *n;
                let mut j = vec![0.0; n * 2 * n];
                for i in 0..n {
                    j[i * 2 * n + n + i] = 1.0;
                }
                j
            }
            ModelKind::SurfaceOfRevolution { profile } => {
                let a = profile.a(x[0]);
                let ap = profile.a_prime(x[0]);
                let (cap_sigma, cap_theta) = (xi[0], xi[1]);
                let p1 = (cap_sigma * cap_sigma + cap_theta * cap_theta / (a * a)).sqrt();
                // rows: p₁, p₂; columns: (σ, θ, Σ, Θ)
                vec![
                    -cap_theta * cap_theta * ap / (a * a * a * p1),
                    0.0,
                    cap_sigma / p1,
                    cap_theta / (a * a * p1),
                    0.0,
                    0.0,
                    0.0,
                    1.0,
                ]
            }
        }
    }
}

impl ProfileMetric {
    pub(crate) fn revalidate(&self) -> Result<()> {
        // Mirror of the construction-time checks, for externally mutated or
        // deserialized profiles.
        if self.grid_size < 64 {
            return Err(QciError::config("profile grid_size must be ≥ 64"));
        }
        let n = self.grid_size;
        if self.a_samples.len() != n + 1 || self.a_prime_samples.len() != n + 1 {
            return Err(QciError::config("profile sample arrays must have grid_size+1 entries"));
        }
        if self.a_samples[0].abs() > 1e-9 || self.a_samples[n].abs() > 1e-9 {
            return Err(QciError::config("profile must close: a(0) = a(L) = 0"));
        }
        for i in 1..n {
            if self.a_samples[i] <= 0.0 {
                return Err(QciError::config("profile must be positive on the interior"));
            }
        }
        let h = self.length / n as f64;
        let c_tol = 2.0 * h * h * self.a_max.max(1.0);
        for i in 1..n {
            let centered = (self.a_samples[i + 1] - self.a_samples[i - 1]) / (2.0 * h);
            if (self.a_prime_samples[i] - centered).abs() > c_tol {
                return Err(QciError::config(format!(
                    "a' inconsistent with a at grid index {i}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::builtin_profile;
    use std::f64::consts::PI;

    #[test]
    fn torus_symbols_are_fiber_coordinates() {
        let sys = make_torus(2).unwrap();
        let p = sys.moment_map(&[0.3, 5.1], &[3.0, -1.0]);
        assert_eq!(p, vec![3.0, -1.0]);
        assert!(make_torus(0).is_err());
        assert!(make_torus(5).is_err());
    }

    #[test]
    fn sphere_symbols_three_four_five() {
        let sys =
            make_surface_of_revolution(builtin_profile("sphere", &[], 256).unwrap()).unwrap();
        let p = sys.moment_map(&[PI / 2.0, 0.0], &[0.0, 3.0]);
        assert!((p[0] - 3.0).abs() < 1e-12 && (p[1] - 3.0).abs() < 1e-12);
        let p = sys.moment_map(&[PI / 2.0, 0.0], &[4.0, 3.0]);
        assert!((p[0] - 5.0).abs() < 1e-12 && (p[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn symbols_homogeneous_degree_one() {
        let sys =
            make_surface_of_revolution(builtin_profile("sphere", &[], 256).unwrap()).unwrap();
        let x = [1.1, 0.4];
        let xi = [0.7, -0.9];
        let t = 7.0;
        let p = sys.moment_map(&x, &xi);
        let pt = sys.moment_map(&x, &[t * xi[0], t * xi[1]]);
        for i in 0..2 {
            assert!((pt[i] - t * p[i]).abs() <= 1e-12 * t * p[i].abs().max(1.0));
        }
    }
}
