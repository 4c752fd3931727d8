//! Joint spectra Λ and orthonormal joint eigenfunctions.
//!
//! Tori: `Λ = ℤⁿ` with characters `e^{ik·x}/(2π)^{n/2}`. Surfaces of
//! revolution: separation `φ = f(σ) e^{imθ}/√(2π)` reduces `P₁² = -Δ_g` to
//! the radial Sturm–Liouville problem
//!
//! ```text
//! -(1/a)(a f')' + m²/a² f = λ² f      on (0, L),
//! ```
//!
//! discretized with the symmetric second-order scheme on the staggered grid
//! `σ_i = (i+½)h`. The weights `a(i·h)` vanish at both poles, so the
//! zero-flux boundary term selects the regular solution without explicit
//! m-dependent boundary conditions. Eigenvalues come from Sturm bisection of
//! the symmetrized tridiagonal pencil; a Richardson `(N, 2N)` step removes
//! the leading O(h²) drift from the eigenvalues only.

mod io;
mod radial;
mod torus;

pub use io::{import_spectrum, write_radial_blob, write_spectrum_table};
pub use radial::{
    build_sor_spectrum, build_sor_spectrum_with, solve_radial_channel, SampleFilter, SorOptions,
};
pub use torus::enumerate_torus;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::QciError;
use crate::geometry::SpectralRegion;
use crate::models::{ModelKind, ModelSystem};
use crate::numerics::interp::cubic_uniform;
use crate::Result;

/// Boundary-tie threshold: regions whose boundary passes this close to a
/// spectrum point make counting ill-posed (`λc̄ ∉ Λ` is required).
pub const TIE_TOLERANCE: f64 = 1e-9;

/// One joint eigenvalue λ̄ with its eigenfunction data.
#[derive(Debug, Clone)]
pub struct JointEigenpair {
    /// Joint eigenvalue vector `(λ⁽¹⁾, …, λ⁽ⁿ⁾)`.
    pub lam: Vec<f64>,
    /// Torus: the lattice vector k. SoR: `(m, radial index k)`.
    pub quantum_numbers: Vec<i64>,
    /// Radial samples `f(σ_j)` on the stored uniform grid (SoR only; empty
    /// when filtered out by [`SampleFilter`] or on the torus).
    pub radial_samples: Arc<[f64]>,
    /// Deviation of the computed discrete L² norm from 1.
    pub norm_cert: f64,
}

/// The computed joint spectrum of a model system.
#[derive(Debug, Clone)]
pub struct JointSpectrum {
    pub system: ModelSystem,
    /// Sorted by quantum numbers: lexicographic k (torus) or `(m, k)` (SoR).
    pub pairs: Vec<JointEigenpair>,
    /// Completeness radius: every joint eigenvalue with ‖λ̄‖ ≤ lam_max is
    /// present.
    pub lam_max: f64,
    /// Computed m-range (SoR).
    pub channel_range: Option<(i64, i64)>,
    /// Radial solver grid size N (0 for torus).
    pub grid_size: usize,
    /// Stored radial grid: first sample at `radial_x0`, spacing `radial_h`.
    pub radial_x0: f64,
    pub radial_h: f64,
}

impl JointSpectrum {
    pub fn dim(&self) -> usize {
        self.system.dim()
    }

    /// Iterate pairs inside a region (no tie checking).
    pub fn pairs_in<'a>(
        &'a self,
        region: &'a SpectralRegion,
    ) -> impl Iterator<Item = &'a JointEigenpair> + 'a {
        self.pairs.iter().filter(move |p| region.contains(&p.lam))
    }

    /// Require that the region is covered by this spectrum.
    pub fn check_complete(&self, region: &SpectralRegion) -> Result<()> {
        let need = region.bounding_radius();
        if need > self.lam_max + TIE_TOLERANCE {
            return Err(QciError::IncompleteSpectrum(format!(
                "region needs ‖λ̄‖ ≤ {need:.6}, spectrum complete to {:.6}",
                self.lam_max
            )));
        }
        Ok(())
    }

    /// Detect a boundary tie: some spectrum point within [`TIE_TOLERANCE`]
    /// of the region boundary. Applies to box-type regions only (see
    /// [`SpectralRegion::tie_sensitive`]).
    pub fn check_ties(&self, region: &SpectralRegion) -> Result<()> {
        if !region.tie_sensitive() {
            return Ok(());
        }
        for p in &self.pairs {
            if region.margin(&p.lam).abs() < TIE_TOLERANCE {
                return Err(QciError::BoundaryTie {
                    point: p.lam.clone(),
                });
            }
        }
        Ok(())
    }

    /// Count spectrum points in the region, after completeness and tie
    /// checks.
    pub fn count_region(&self, region: &SpectralRegion) -> Result<usize> {
        self.check_complete(region)?;
        self.check_ties(region)?;
        Ok(self.pairs_in(region).count())
    }

    /// Evaluate the normalized joint eigenfunction at a point of the chart.
    pub fn eval_eigenfunction(&self, pair: &JointEigenpair, x: &[f64]) -> Result<Complex64> {
        match &self.system.kind {
            ModelKind::FlatTorus { n } => {
                let mut phase = 0.0;
                for i in 0..*n {
                    phase += pair.lam[i] * x[i];
                }
                let norm = (2.0 * std::f64::consts::PI).powf(*n as f64 / 2.0);
                Ok(Complex64::from_polar(1.0 / norm, phase))
            }
            ModelKind::SurfaceOfRevolution { profile } => {
                let (sigma, theta) = (x[0], x[1]);
                if !(0.0..=profile.length).contains(&sigma) {
                    return Err(QciError::Domain(format!(
                        "σ = {sigma} outside [0, {}]",
                        profile.length
                    )));
                }
                if pair.radial_samples.is_empty() {
                    return Err(QciError::Domain(format!(
                        "radial samples not retained for (m, k) = ({}, {})",
                        pair.quantum_numbers[0], pair.quantum_numbers[1]
                    )));
                }
                let f = cubic_uniform(self.radial_x0, self.radial_h, &pair.radial_samples, sigma);
                let m = pair.quantum_numbers[0] as f64;
                let norm = (2.0 * std::f64::consts::PI).sqrt();
                Ok(Complex64::from_polar(1.0, m * theta) * (f / norm))
            }
        }
    }

    /// Histogram of joint multiplicities: groups identical λ̄ (componentwise
    /// within 1e-9) and maps multiplicity → number of groups.
    pub fn multiplicity_histogram(&self) -> BTreeMap<usize, usize> {
        let mut sorted: Vec<&JointEigenpair> = self.pairs.iter().collect();
        sorted.sort_by(|a, b| {
            a.lam
                .partial_cmp(&b.lam)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut hist = BTreeMap::new();
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i + 1;
            while j < sorted.len()
                && sorted[j]
                    .lam
                    .iter()
                    .zip(&sorted[i].lam)
                    .all(|(a, b)| (a - b).abs() < 1e-9)
            {
                j += 1;
            }
            *hist.entry(j - i).or_insert(0) += 1;
            i = j;
        }
        hist
    }
}
