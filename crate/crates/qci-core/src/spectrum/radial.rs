//! Per-channel radial Sturm–Liouville solves and full SoR spectrum assembly.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::QciError;
use crate::models::{make_surface_of_revolution, ProfileMetric};
use crate::numerics::tridiag::{eigenvalues_below, inverse_iteration};
use crate::spectrum::{JointEigenpair, JointSpectrum};
use crate::Result;

/// Which eigenpairs retain their radial samples. Kernel sums only touch
/// eigenfunctions with nonzero cutoff weight, so cone-filtered storage keeps
/// large sweeps within desk-scale memory while leaving every eigenvalue
/// available for counting.
#[derive(Debug, Clone, Copy)]
pub enum SampleFilter {
    All,
    /// Keep samples iff `|m| ≤ ratio·λ₁ + 1`.
    ConeRatio(f64),
    None,
}

#[derive(Debug, Clone, Copy)]
pub struct SorOptions {
    /// Solver grid size N (the Richardson companion solve uses 2N).
    pub grid_size: usize,
    /// Richardson-extrapolate eigenvalues from the (N, 2N) pair.
    pub richardson: bool,
    pub sample_filter: SampleFilter,
    /// Radial samples are decimated to at most this many stored points.
    pub stored_points_cap: usize,
}

impl SorOptions {
    pub fn new(grid_size: usize) -> Self {
        Self {
            grid_size,
            richardson: true,
            sample_filter: SampleFilter::All,
            stored_points_cap: 4096,
        }
    }
}

/// Assemble the symmetrized tridiagonal matrix `C = D^{-1/2} T D^{-1/2}` of
/// the radial operator on the staggered grid with `n` cells.
fn channel_matrix(profile: &ProfileMetric, m: i64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let length = profile.length;
    let h = length / n as f64;
    let a_cell: Vec<f64> = (0..n).map(|i| profile.a((i as f64 + 0.5) * h)).collect();
    // Edge weights a(i·h); the pole values a(0) = a(L) = 0 close the flux.
    let a_edge: Vec<f64> = (0..=n).map(|i| profile.a(i as f64 * h)).collect();
    let m2 = (m * m) as f64;
    let inv_h2 = 1.0 / (h * h);
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n - 1);
    // Weighted form: −(a f')' + (m²/a) f = λ² a f, so T_ii carries m²/a_i.
    for i in 0..n {
        let t_ii = (a_edge[i] + a_edge[i + 1]) * inv_h2 + m2 / a_cell[i];
        diag.push(t_ii / a_cell[i]);
    }
    for i in 0..n - 1 {
        off.push(-a_edge[i + 1] * inv_h2 / (a_cell[i] * a_cell[i + 1]).sqrt());
    }
    (diag, off)
}

/// All eigenpairs of one angular channel with `λ ≤ lam_max`.
///
/// Eigenvalues are Richardson-extrapolated from the (N, 2N) staggered-grid
/// solves; eigenfunctions come from inverse iteration on the 2N grid,
/// normalized to `∫ f² a dσ = 1`, and are decimated to the stored grid.
pub fn solve_radial_channel(
    profile: &ProfileMetric,
    m: i64,
    lam_max: f64,
    grid_size: usize,
) -> Result<Vec<JointEigenpair>> {
    let (pairs, _, _) =
        solve_channel_with(profile, m, lam_max, &SorOptions::new(grid_size))?;
    Ok(pairs)
}

/// Returns (pairs, stored_x0, stored_h).
fn solve_channel_with(
    profile: &ProfileMetric,
    m: i64,
    lam_max: f64,
    opts: &SorOptions,
) -> Result<(Vec<JointEigenpair>, f64, f64)> {
    if opts.grid_size < 256 {
        return Err(QciError::config(format!(
            "radial grid_size must be ≥ 256, got {}",
            opts.grid_size
        )));
    }
    let m_limit = (profile.a_max * lam_max).ceil() + 2.0;
    if (m.abs() as f64) > m_limit {
        return Err(QciError::config(format!(
            "channel m = {m} outside the admissible bound |m| ≤ {m_limit:.1}"
        )));
    }

    let n_fine = if opts.richardson {
        2 * opts.grid_size
    } else {
        opts.grid_size
    };
    let h_fine = profile.length / n_fine as f64;
    // A 2% + 1 safety margin keeps true eigenvalues near the cutoff present
    // in both solves despite the O(h²) discrete drift.
    let bound = (lam_max * 1.02 + 1.0).powi(2);

    let (diag_f, off_f) = channel_matrix(profile, m, n_fine);
    let eig_fine = eigenvalues_below(&diag_f, &off_f, bound);
    let eig_extrap: Vec<f64> = if opts.richardson {
        let (diag_c, off_c) = channel_matrix(profile, m, opts.grid_size);
        let eig_coarse = eigenvalues_below(&diag_c, &off_c, bound);
        eig_fine
            .iter()
            .enumerate()
            .map(|(k, l_f)| {
                if let Some(l_c) = eig_coarse.get(k) {
                    (4.0 * l_f - l_c) / 3.0
                } else {
                    *l_f
                }
            })
            .collect()
    } else {
        eig_fine.clone()
    };

    let stride = n_fine.div_ceil(opts.stored_points_cap.max(16)).max(1);
    let stored_x0 = 0.5 * h_fine;
    let stored_h = stride as f64 * h_fine;
    // ∫ f² a dσ = h Σ v_i² = h for a unit eigenvector v, so f = v/√(a h).
    let a_cell: Vec<f64> = (0..n_fine)
        .map(|i| profile.a((i as f64 + 0.5) * h_fine))
        .collect();
    let scale = |v: &[f64], i: usize| v[i] / (a_cell[i] * h_fine).sqrt();

    let matrix_scale = diag_f
        .iter()
        .fold(0.0f64, |acc, d| acc.max(d.abs()));

    let mut pairs = Vec::new();
    for (k, (lam2_ext, lam2_fine)) in eig_extrap.iter().zip(&eig_fine).enumerate() {
        let lam = lam2_ext.max(0.0).sqrt();
        if lam > lam_max {
            continue;
        }
        let keep = match opts.sample_filter {
            SampleFilter::All => true,
            SampleFilter::None => false,
            SampleFilter::ConeRatio(r) => (m.abs() as f64) <= r * lam + 1.0,
        };
        let (samples, cert) = if keep {
            let v = inverse_iteration(&diag_f, &off_f, *lam2_fine, 3);
            // Residual check: surfaces the rare non-converged solve.
            let mut res: f64 = 0.0;
            for i in 0..n_fine {
                let mut r = (diag_f[i] - lam2_fine) * v[i];
                if i > 0 {
                    r += off_f[i - 1] * v[i - 1];
                }
                if i + 1 < n_fine {
                    r += off_f[i] * v[i + 1];
                }
                res = res.max(r.abs());
            }
            if res > 1e-7 * matrix_scale.max(1.0) {
                return Err(QciError::numeric(
                    format!("radial channel m = {m}, index {k}"),
                    format!("inverse iteration residual {res:.3e}"),
                ));
            }
            let f: Vec<f64> = (0..n_fine)
                .step_by(stride)
                .map(|i| scale(&v, i))
                .collect();
            // Discrete norm certificate on the solver grid.
            let norm: f64 = (0..n_fine)
                .map(|i| {
                    let fi = scale(&v, i);
                    fi * fi * a_cell[i] * h_fine
                })
                .sum();
            (Arc::from(f), (norm - 1.0).abs())
        } else {
            (Arc::from(Vec::new()), 0.0)
        };
        pairs.push(JointEigenpair {
            lam: vec![lam, m as f64],
            quantum_numbers: vec![m, k as i64],
            radial_samples: samples,
            norm_cert: cert,
        });
    }
    Ok((pairs, stored_x0, stored_h))
}

/// Full joint spectrum of a surface of revolution up to `lam_max`,
/// defaulting to Richardson extrapolation and full sample retention.
pub fn build_sor_spectrum(
    profile: &ProfileMetric,
    lam_max: f64,
    grid_size: usize,
) -> Result<JointSpectrum> {
    build_sor_spectrum_with(profile, lam_max, &SorOptions::new(grid_size))
}

/// As [`build_sor_spectrum`], with explicit options.
///
/// Channels run in parallel and the assembly is a deterministic merge
/// sorted by `(m, k)`. Completeness: `p₁ ≥ |Θ|/a_max` forces
/// `|m| ≤ a_max·λ`, so channels up to `⌈a_max·lam_max⌉ + 2` exhaust the
/// spectrum ball.
pub fn build_sor_spectrum_with(
    profile: &ProfileMetric,
    lam_max: f64,
    opts: &SorOptions,
) -> Result<JointSpectrum> {
    if !(lam_max > 0.0) {
        return Err(QciError::config("lam_max must be positive"));
    }
    let system = make_surface_of_revolution(profile.clone())?;
    let m_max = (profile.a_max * lam_max).ceil() as i64 + 2;

    let channels: Vec<Result<(Vec<JointEigenpair>, f64, f64)>> = (0..=m_max)
        .into_par_iter()
        .map(|m| solve_channel_with(profile, m, lam_max, opts))
        .collect();

    let mut stored_x0 = 0.0;
    let mut stored_h = 0.0;
    let mut by_channel: Vec<Vec<JointEigenpair>> = Vec::with_capacity(m_max as usize + 1);
    for ch in channels {
        let (pairs, x0, h) = ch?;
        stored_x0 = x0;
        stored_h = h;
        by_channel.push(pairs);
    }

    // Deterministic merge: m from -m_max to m_max, k ascending. The radial
    // operator depends on m², so negative channels mirror the positive ones
    // (sharing the radial samples).
    let mut pairs = Vec::new();
    for m in (-m_max..=m_max).collect::<Vec<_>>() {
        let src = &by_channel[m.unsigned_abs() as usize];
        for p in src {
            let mut q = p.clone();
            q.lam = vec![p.lam[0], m as f64];
            q.quantum_numbers = vec![m, p.quantum_numbers[1]];
            pairs.push(q);
        }
    }

    Ok(JointSpectrum {
        system,
        pairs,
        lam_max,
        channel_range: Some((-m_max, m_max)),
        grid_size: opts.grid_size,
        radial_x0: stored_x0,
        radial_h: stored_h,
    })
}
