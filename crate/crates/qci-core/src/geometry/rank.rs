//! Fiber-rank tests and degeneracy scans over cosphere-bundle slices.
//!
//! The fiber rank at `(x, ξ)` is the numerical rank of `[∂p_i/∂ξ_j]`; full
//! fiber rank implies the nondegeneracy `dp₁ ∧ … ∧ dpₙ ≠ 0`, which is
//! tested through the smallest singular value of the full `n×2n` gradient.

use rayon::prelude::*;

use crate::error::QciError;
use crate::models::SymbolSystem;
use crate::numerics::linalg::{numerical_rank, singular_values};
use crate::Result;

/// Relative singular-value threshold for numerical rank.
const RANK_REL_TOL: f64 = 1e-8;
/// Absolute floor under the relative threshold.
const RANK_FLOOR: f64 = 1e-12;

/// Fiber rank of the moment map at `(x, ξ)`: `dim span {∇_ξ p₁, …, ∇_ξ pₙ}`.
pub fn fiber_rank<S: SymbolSystem + ?Sized>(sys: &S, x: &[f64], xi: &[f64]) -> Result<usize> {
    if xi.iter().all(|v| *v == 0.0) {
        return Err(QciError::Domain("fiber rank undefined at ξ = 0".into()));
    }
    let n = sys.dim();
    let jac = sys.fiber_jacobian(x, xi);
    Ok(numerical_rank(&jac, n, n, RANK_REL_TOL, RANK_FLOOR))
}

/// One scan axis: `count` cells covering `[lo, hi]`.
#[derive(Debug, Clone, Copy)]
pub struct ScanAxis {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl ScanAxis {
    pub fn new(lo: f64, hi: f64, count: usize) -> Self {
        Self { lo, hi, count }
    }
    fn center(&self, i: usize) -> f64 {
        self.lo + (self.hi - self.lo) * (i as f64 + 0.5) / self.count as f64
    }
    fn width(&self) -> f64 {
        (self.hi - self.lo) / self.count as f64
    }
}

/// Grid over a cosphere-bundle slice: spatial axes (model-dependent) times
/// one fiber-direction angle. Homogeneity of the symbols makes a single
/// cosphere slice sufficient.
#[derive(Debug, Clone)]
pub struct ScanGrid {
    pub spatial: Vec<ScanAxis>,
    pub angle: ScanAxis,
}

/// Per-cell result of a rank scan.
#[derive(Debug, Clone)]
pub struct CellReport {
    /// Cell-center coordinates: spatial values then the fiber angle.
    pub coords: Vec<f64>,
    pub fiber_rank: usize,
    /// Smallest singular value of the full n×2n gradient matrix.
    pub min_singular: f64,
    /// Cell straddles `{Σ = 0}` (surfaces of revolution).
    pub flag_sigma_zero: bool,
    /// Cell touches a pole (σ within one cell of 0 or L).
    pub flag_pole: bool,
    /// `a'` changes sign inside the cell's σ-range (critical meridian γ_j).
    pub flag_critical_meridian: bool,
    /// Produced by adaptive refinement near a rank drop.
    pub refined: bool,
}

/// Rank-scan report over a phase-space grid.
#[derive(Debug, Clone)]
pub struct RankScanReport {
    pub dim: usize,
    pub cells: Vec<CellReport>,
}

impl RankScanReport {
    /// Cells with full fiber rank.
    pub fn full_rank_cells(&self) -> impl Iterator<Item = &CellReport> {
        let n = self.dim;
        self.cells.iter().filter(move |c| c.fiber_rank == n)
    }

    /// Cells where `dp₁ ∧ … ∧ dpₙ` is numerically zero.
    pub fn degenerate_cells(&self) -> impl Iterator<Item = &CellReport> {
        self.cells.iter().filter(|c| c.min_singular <= RANK_FLOOR.max(1e-8 * 1.0))
    }
}

/// Map a grid point (spatial coordinates, fiber angle) to a phase-space
/// point on a cosphere-like slice, per model geometry.
pub trait ScanChart: SymbolSystem {
    fn phase_point(&self, spatial: &[f64], angle: f64) -> (Vec<f64>, Vec<f64>);
    /// σ-range interpretation for meridian flags, if applicable.
    fn sigma_index(&self) -> Option<usize> {
        None
    }
    fn profile_a_prime(&self, _sigma: f64) -> Option<f64> {
        None
    }
    fn meridian_length(&self) -> Option<f64> {
        None
    }
}

impl ScanChart for crate::models::ModelSystem {
    fn phase_point(&self, spatial: &[f64], angle: f64) -> (Vec<f64>, Vec<f64>) {
        match &self.kind {
            crate::models::ModelKind::FlatTorus { n } => {
                // Direction on the unit cosphere; embed the angle in the
                // (ξ₁, ξ₂) plane for n ≥ 2.
                let mut xi = vec![0.0; *n];
                if *n == 1 {
                    xi[0] = if angle.cos() >= 0.0 { 1.0 } else { -1.0 };
                } else {
                    xi[0] = angle.cos();
                    xi[1] = angle.sin();
                }
                (vec![0.0; *n], xi)
            }
            crate::models::ModelKind::SurfaceOfRevolution { profile } => {
                // Unit cosphere at σ: p₁ = 1 ⇔ Σ = cos ψ, Θ = a(σ) sin ψ.
                let sigma = spatial[0];
                let a = profile.a(sigma);
                (vec![sigma, 0.0], vec![angle.cos(), a * angle.sin()])
            }
        }
    }

    fn sigma_index(&self) -> Option<usize> {
        match &self.kind {
            crate::models::ModelKind::SurfaceOfRevolution { .. } => Some(0),
            _ => None,
        }
    }

    fn profile_a_prime(&self, sigma: f64) -> Option<f64> {
        self.profile().map(|p| p.a_prime(sigma))
    }

    fn meridian_length(&self) -> Option<f64> {
        self.profile().map(|p| p.length)
    }
}

/// Liouville-torus symbols on `ℝ²/ℤ²` with conformal factor
/// `U₁(x₁) − U₂(x₂) > 0`:
///
/// ```text
/// p₁ = √((ξ₁² + ξ₂²)/(U₁ − U₂)),   p₂ = √((U₂ ξ₁² + U₁ ξ₂²)/(U₁ − U₂)).
/// ```
///
/// Used for fiber-rank checks only (their spectra are out of scope here).
pub struct LiouvilleSymbols<F1, F2, G1, G2> {
    pub u1: F1,
    pub u2: F2,
    pub u1_prime: G1,
    pub u2_prime: G2,
}

impl<F1, F2, G1, G2> SymbolSystem for LiouvilleSymbols<F1, F2, G1, G2>
where
    F1: Fn(f64) -> f64,
    F2: Fn(f64) -> f64,
    G1: Fn(f64) -> f64,
    G2: Fn(f64) -> f64,
{
    fn dim(&self) -> usize {
        2
    }

    fn moment_map(&self, x: &[f64], xi: &[f64]) -> Vec<f64> {
        let w = (self.u1)(x[0]) - (self.u2)(x[1]);
        let p1 = ((xi[0] * xi[0] + xi[1] * xi[1]) / w).sqrt();
        let p2 = (((self.u2)(x[1]) * xi[0] * xi[0] + (self.u1)(x[0]) * xi[1] * xi[1]) / w).sqrt();
        vec![p1, p2]
    }

    fn fiber_jacobian(&self, x: &[f64], xi: &[f64]) -> Vec<f64> {
        let w = (self.u1)(x[0]) - (self.u2)(x[1]);
        let p = self.moment_map(x, xi);
        vec![
            xi[0] / (w * p[0]),
            xi[1] / (w * p[0]),
            (self.u2)(x[1]) * xi[0] / (w * p[1]),
            (self.u1)(x[0]) * xi[1] / (w * p[1]),
        ]
    }

    fn full_gradient(&self, x: &[f64], xi: &[f64]) -> Vec<f64> {
        let u1 = (self.u1)(x[0]);
        let u2 = (self.u2)(x[1]);
        let du1 = (self.u1_prime)(x[0]);
        let du2 = (self.u2_prime)(x[1]);
        let w = u1 - u2;
        let p = self.moment_map(x, xi);
        let q2 = xi[0] * xi[0] + xi[1] * xi[1];
        let r2 = u2 * xi[0] * xi[0] + u1 * xi[1] * xi[1];
        // p₁ = √(q²/w): ∂x₁ = -q² du1/(2 w² p₁), ∂x₂ = q² du2/(2 w² p₁)
        // p₂ = √(r²/w): ∂x₁ = (du1 ξ₂² w - r² du1)/(2 w² p₂), ∂x₂ analogous.
        vec![
            -q2 * du1 / (2.0 * w * w * p[0]),
            q2 * du2 / (2.0 * w * w * p[0]),
            xi[0] / (w * p[0]),
            xi[1] / (w * p[0]),
            (du1 * xi[1] * xi[1] * w - r2 * du1) / (2.0 * w * w * p[1]),
            (du2 * xi[0] * xi[0] * w + r2 * du2) / (2.0 * w * w * p[1]),
            u2 * xi[0] / (w * p[1]),
            u1 * xi[1] / (w * p[1]),
        ]
    }
}

impl<F1, F2, G1, G2> ScanChart for LiouvilleSymbols<F1, F2, G1, G2>
where
    F1: Fn(f64) -> f64,
    F2: Fn(f64) -> f64,
    G1: Fn(f64) -> f64,
    G2: Fn(f64) -> f64,
{
    fn phase_point(&self, spatial: &[f64], angle: f64) -> (Vec<f64>, Vec<f64>) {
        (
            vec![spatial[0], spatial[1]],
            vec![angle.cos(), angle.sin()],
        )
    }
}

/// Scan fiber rank and nondegeneracy over the grid. Cells where the rank
/// drops (or the full gradient degenerates) are refined once, 2× per axis.
pub fn scan_regions<S: ScanChart + Sync + ?Sized>(sys: &S, grid: &ScanGrid) -> RankScanReport {
    let n = sys.dim();
    let spatial_counts: Vec<usize> = grid.spatial.iter().map(|a| a.count).collect();
    let total_spatial: usize = spatial_counts.iter().product::<usize>().max(1);

    let indices: Vec<(usize, usize)> = (0..total_spatial)
        .flat_map(|s| (0..grid.angle.count).map(move |a| (s, a)))
        .collect();

    let mut cells: Vec<CellReport> = indices
        .par_iter()
        .map(|&(sidx, aidx)| {
            let spatial = decode_spatial(&grid.spatial, sidx);
            let angle = grid.angle.center(aidx);
            evaluate_cell(sys, n, grid, &spatial, angle, false)
        })
        .collect();

    // One refinement pass around detected drops.
    let mut refined: Vec<CellReport> = cells
        .par_iter()
        .filter(|c| c.fiber_rank < n || c.min_singular < 1e-6)
        .flat_map_iter(|c| {
            let spatial: Vec<f64> = c.coords[..c.coords.len() - 1].to_vec();
            let angle = *c.coords.last().unwrap();
            let dw = grid.angle.width() / 4.0;
            let mut subs = Vec::new();
            for da in [-dw, dw] {
                if spatial.is_empty() {
                    subs.push(evaluate_cell(sys, n, grid, &spatial, angle + da, true));
                } else {
                    for ds in [-0.25, 0.25] {
                        let mut sp = spatial.clone();
                        sp[0] += ds * grid.spatial[0].width();
                        subs.push(evaluate_cell(sys, n, grid, &sp, angle + da, true));
                    }
                }
            }
            subs
        })
        .collect();
    cells.append(&mut refined);

    RankScanReport { dim: n, cells }
}

fn decode_spatial(axes: &[ScanAxis], mut idx: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(axes.len());
    for ax in axes {
        out.push(ax.center(idx % ax.count));
        idx /= ax.count;
    }
    out
}

fn evaluate_cell<S: ScanChart + ?Sized>(
    sys: &S,
    n: usize,
    grid: &ScanGrid,
    spatial: &[f64],
    angle: f64,
    refined: bool,
) -> CellReport {
    let (x, xi) = sys.phase_point(spatial, angle);
    let jac = sys.fiber_jacobian(&x, &xi);
    let rank = numerical_rank(&jac, n, n, RANK_REL_TOL, RANK_FLOOR);
    let full = sys.full_gradient(&x, &xi);
    let sv = singular_values(&full, n, 2 * n);
    let min_sv = *sv.last().unwrap();

    // Flags for surfaces of revolution.
    let mut flag_sigma_zero = false;
    let mut flag_pole = false;
    let mut flag_critical = false;
    if let (Some(0), Some(len)) = (sys.sigma_index(), sys.meridian_length()) {
        let sigma = spatial[0];
        let half_angle_cell = grid.angle.width() / 2.0;
        // Σ = cos ψ on the slice; the cell straddles Σ = 0 when ψ is within
        // half a cell of ±π/2.
        let pi = std::f64::consts::PI;
        let d = (angle.rem_euclid(pi) - pi / 2.0).abs();
        flag_sigma_zero = d <= half_angle_cell;
        let half_sigma_cell = grid
            .spatial
            .first()
            .map(|a| a.width() / 2.0)
            .unwrap_or(0.0);
        flag_pole = sigma <= 2.0 * half_sigma_cell || sigma >= len - 2.0 * half_sigma_cell;
        // 0.2% outward overlap keeps zeros of a' that sit exactly on a
        // shared cell boundary from slipping between both neighbors.
        let pad = 1.002 * half_sigma_cell;
        if let (Some(lo), Some(hi)) = (
            sys.profile_a_prime(sigma - pad),
            sys.profile_a_prime(sigma + pad),
        ) {
            flag_critical = lo == 0.0 || hi == 0.0 || lo.signum() != hi.signum();
        }
    }

    let mut coords = spatial.to_vec();
    coords.push(angle);
    CellReport {
        coords,
        fiber_rank: rank,
        min_singular: min_sv,
        flag_sigma_zero,
        flag_pole,
        flag_critical_meridian: flag_critical,
        refined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{builtin_profile, make_surface_of_revolution, make_torus};
    use std::f64::consts::PI;

    #[test]
    fn torus_full_rank_everywhere() {
        let sys = make_torus(2).unwrap();
        assert_eq!(fiber_rank(&sys, &[0.0, 0.0], &[3.0, -1.0]).unwrap(), 2);
        assert!(fiber_rank(&sys, &[0.0, 0.0], &[0.0, 0.0]).is_err());
        let grid = ScanGrid {
            spatial: vec![],
            angle: ScanAxis::new(0.0, 2.0 * PI, 64),
        };
        let report = scan_regions(&sys, &grid);
        assert_eq!(report.degenerate_cells().count(), 0);
        assert!(report.cells.iter().all(|c| c.fiber_rank == 2));
    }

    #[test]
    fn sphere_rank_drop_on_sigma_zero() {
        let sys =
            make_surface_of_revolution(builtin_profile("sphere", &[], 256).unwrap()).unwrap();
        // Σ = 0, Θ ≠ 0 → rank 1.
        assert_eq!(fiber_rank(&sys, &[1.0, 0.0], &[0.0, 2.0]).unwrap(), 1);
        // 3-4-5 point at the equator → rank 2.
        assert_eq!(fiber_rank(&sys, &[PI / 2.0, 0.0], &[4.0, 3.0]).unwrap(), 2);
    }

    #[test]
    fn bump_degeneracies_concentrate_on_critical_meridian() {
        let sys =
            make_surface_of_revolution(builtin_profile("bump", &[0.2], 512).unwrap()).unwrap();
        let grid = ScanGrid {
            spatial: vec![ScanAxis::new(0.15, PI - 0.15, 48)],
            angle: ScanAxis::new(0.0, 2.0 * PI, 48),
        };
        let report = scan_regions(&sys, &grid);
        // Nondegeneracy (dp₁∧dp₂ ≠ 0) fails only where Σ = 0 AND a' = 0,
        // i.e. on the single critical meridian σ = π/2.
        for c in report.cells.iter().filter(|c| c.min_singular < 1e-6) {
            assert!(
                c.flag_sigma_zero && c.flag_critical_meridian,
                "degenerate cell off the critical meridian: {:?}",
                c
            );
        }
        // Fiber rank drops only inside flagged Σ = 0 cells, and cells with
        // ψ comfortably away from ±π/2 keep full rank.
        for c in &report.cells {
            if c.fiber_rank < 2 {
                assert!(c.flag_sigma_zero, "rank drop off Σ = 0: {:?}", c.coords);
            }
            let psi = *c.coords.last().unwrap();
            let d = (psi.rem_euclid(PI) - PI / 2.0).abs();
            if d > 2.0 * grid.angle.width() {
                assert_eq!(c.fiber_rank, 2, "cell {:?}", c.coords);
            }
        }
        // Exactly one critical meridian is flagged among coarse cells
        // (adjacent flagged cells bracketing the zero of a' cluster).
        let mut sigmas: Vec<f64> = report
            .cells
            .iter()
            .filter(|c| !c.refined && c.flag_critical_meridian)
            .map(|c| c.coords[0])
            .collect();
        sigmas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let cell_width = (PI - 0.3) / 48.0;
        sigmas.dedup_by(|a, b| (*a - *b).abs() < 2.5 * cell_width);
        assert_eq!(sigmas.len(), 1, "critical meridians at {sigmas:?}");
        assert!((sigmas[0] - PI / 2.0).abs() < 0.1);
    }

    #[test]
    fn full_rank_mask_inside_nondegenerate_mask() {
        let sys =
            make_surface_of_revolution(builtin_profile("bump", &[0.2], 512).unwrap()).unwrap();
        let grid = ScanGrid {
            spatial: vec![ScanAxis::new(0.2, PI - 0.2, 24)],
            angle: ScanAxis::new(0.0, 2.0 * PI, 24),
        };
        let report = scan_regions(&sys, &grid);
        for c in report.full_rank_cells() {
            assert!(c.min_singular > 1e-8, "fiber rank 2 but degenerate: {c:?}");
        }
    }

    #[test]
    fn liouville_tori_full_rank_off_axes() {
        let pi2 = 2.0 * PI;
        let sys = LiouvilleSymbols {
            u1: move |x: f64| 4.0 + (pi2 * x).cos(),
            u2: move |y: f64| 1.0 + 0.5 * (pi2 * y).sin(),
            u1_prime: move |x: f64| -pi2 * (pi2 * x).sin(),
            u2_prime: move |y: f64| 0.5 * pi2 * (pi2 * y).cos(),
        };
        // ξ₁ξ₂ ≠ 0 → full fiber rank.
        for &(x1, x2, xi1, xi2) in &[
            (0.1, 0.3, 1.0, 0.5),
            (0.7, 0.9, -0.4, 1.3),
            (0.5, 0.05, 2.0, -2.0),
        ] {
            assert_eq!(fiber_rank(&sys, &[x1, x2], &[xi1, xi2]).unwrap(), 2);
        }
        // On an axis the rank drops.
        assert_eq!(fiber_rank(&sys, &[0.3, 0.6], &[1.0, 0.0]).unwrap(), 1);

        // Scan over phase space: full rank wherever ξ₁ξ₂ is well away
        // from zero.
        let grid = ScanGrid {
            spatial: vec![ScanAxis::new(0.0, 1.0, 8), ScanAxis::new(0.0, 1.0, 8)],
            angle: ScanAxis::new(0.0, 2.0 * PI, 32),
        };
        let report = scan_regions(&sys, &grid);
        for c in &report.cells {
            let psi = *c.coords.last().unwrap();
            if psi.cos().abs() > 0.15 && psi.sin().abs() > 0.15 {
                assert_eq!(c.fiber_rank, 2, "cell {:?}", c.coords);
            }
        }
    }

    #[test]
    fn rank_is_basis_invariant() {
        use crate::numerics::linalg::numerical_rank;
        let sys =
            make_surface_of_revolution(builtin_profile("sphere", &[], 256).unwrap()).unwrap();
        use crate::models::SymbolSystem;
        let x = [1.1, 0.0];
        let xi = [0.6, 1.1];
        let jac = sys.fiber_jacobian(&x, &xi);
        let theta: f64 = 0.7713;
        let (c, s) = (theta.cos(), theta.sin());
        // J · Rᵀ for the rotation R of the ξ-plane.
        let rotated = vec![
            jac[0] * c + jac[1] * s,
            -jac[0] * s + jac[1] * c,
            jac[2] * c + jac[3] * s,
            -jac[2] * s + jac[3] * c,
        ];
        assert_eq!(
            numerical_rank(&jac, 2, 2, 1e-8, 1e-12),
            numerical_rank(&rotated, 2, 2, 1e-8, 1e-12)
        );
    }
}
