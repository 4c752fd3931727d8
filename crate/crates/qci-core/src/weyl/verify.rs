//! Actual-vs-predicted verification sweeps with remainder-exponent fits.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, Target};
use crate::error::QciError;
use crate::geometry::SpectralRegion;
use crate::kernels::{
    make_fejer, make_mollifier, projector_kernel, smoothed_measure_kernel, tauberian_gap,
    unit_box_diag, Mollifier,
};
use crate::models::{ModelKind, ModelSystem};
use crate::numerics::fit::{fit_exponent, ExponentFit};
use crate::spectrum::{
    build_sor_spectrum_with, enumerate_torus, JointSpectrum, SampleFilter, SorOptions,
};
use crate::weyl::{integrated_prediction, leading_term_diagonal, leading_term_offdiag, PhaseMode};
use crate::Result;

/// One sweep entry: a (λ, point) evaluation.
#[derive(Debug, Clone)]
pub struct ReportRow {
    /// Effective sweep value (after any boundary-tie nudge).
    pub lambda: f64,
    pub point: usize,
    pub actual: Complex64,
    pub predicted: Complex64,
    pub remainder_abs: f64,
    pub truncation_bound: f64,
}

/// Actual-vs-predicted comparison with the fitted remainder exponent.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub experiment_id: String,
    pub target: Target,
    pub system: String,
    /// Effective sweep values (nudged where boundary ties occurred).
    pub lambdas: Vec<f64>,
    pub rows: Vec<ReportRow>,
    /// max over points of |remainder| per sweep value.
    pub per_lambda_remainder: Vec<f64>,
    pub fit: Option<ExponentFit>,
    pub target_exponent: f64,
    pub slack: f64,
    pub pass: bool,
    pub runtime_seconds: f64,
    pub threads: usize,
    pub seed: u64,
    pub spectrum_points: usize,
    pub spectrum_lam_max: f64,
    pub notes: Vec<String>,
}

impl ComparisonReport {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            2
        }
    }
}

/// Retry a sweep evaluation across boundary-tie nudges `λ ← λ(1 + 10⁻⁶)`.
fn with_nudge<T>(
    lam0: f64,
    notes: &mut Vec<String>,
    mut f: impl FnMut(f64) -> Result<T>,
) -> Result<(f64, T)> {
    let mut lam = lam0;
    for _ in 0..12 {
        match f(lam) {
            Err(QciError::BoundaryTie { .. }) => {
                lam *= 1.0 + 1e-6;
            }
            Err(e) => return Err(e),
            Ok(v) => {
                if lam != lam0 {
                    notes.push(format!("boundary tie: λ = {lam0} nudged to {lam:.9e}"));
                }
                return Ok((lam, v));
            }
        }
    }
    Err(QciError::numeric(
        "boundary-tie nudge",
        format!("still tied after 12 nudges from λ = {lam0}"),
    ))
}

fn build_spectrum(
    cfg: &ExperimentConfig,
    system: &ModelSystem,
    mol: &Mollifier,
) -> Result<JointSpectrum> {
    let exp = &cfg.experiment;
    let hi = *exp.lambdas.last().unwrap();
    let need = match exp.target {
        Target::PointwiseDiag | Target::PointwiseOffdiag => hi * (1.0 + 1e-4) + 1.0,
        // Integrated sweeps sub-sample up to 1.087·λ.
        Target::Integrated => hi * 1.09 + 1.0,
        Target::Cluster => hi + 3.0,
        Target::SmoothedMeasure => hi + mol.tail_margin() + 2.0,
        Target::Tauberian => hi * (1.0 + 1e-4) + mol.tail_margin() + 2.0,
    };
    match &system.kind {
        ModelKind::FlatTorus { n } => enumerate_torus(*n, &SpectralRegion::ball(*n, need)),
        ModelKind::SurfaceOfRevolution { profile } => {
            let sample_filter = match (exp.target, cfg.cutoff.kind.as_str()) {
                (Target::Integrated, _) => SampleFilter::None,
                (_, "sor_ratio") => {
                    SampleFilter::ConeRatio(cfg.cutoff.c_max + 3.0 * cfg.cutoff.width)
                }
                _ => SampleFilter::All,
            };
            build_sor_spectrum_with(
                profile,
                need,
                &SorOptions {
                    grid_size: cfg.system.grid_size,
                    richardson: exp.richardson,
                    sample_filter,
                    stored_points_cap: exp.sample_cap,
                },
            )
        }
    }
}

/// Run the configured experiment: sweep, compare, fit, and judge.
pub fn verify(cfg: &ExperimentConfig) -> Result<ComparisonReport> {
    cfg.validate()?;
    let start = std::time::Instant::now();
    let system = cfg.build_system()?;
    let cutoff = cfg.build_cutoff()?;
    // Validates band/cone consistency for microlocalized runs.
    let _cone = cfg.build_working_cone(&system)?;
    let exp = &cfg.experiment;
    if exp.c.len() != system.dim() {
        return Err(QciError::config(format!(
            "c̄ has {} components; system dimension is {}",
            exp.c.len(),
            system.dim()
        )));
    }
    let band = cfg.band.as_ref().map(|b| (b.sigma_min, b.sigma_max));
    let mol = match exp.target {
        Target::Cluster => make_fejer(exp.delta0)?,
        _ => make_mollifier(exp.delta0)?,
    };
    let spectrum = build_spectrum(cfg, &system, &mol)?;

    let mut notes = Vec::new();
    let hist = spectrum.multiplicity_histogram();
    if let Some((max_mult, groups)) = hist.iter().next_back().filter(|(m, _)| **m > 1) {
        notes.push(format!(
            "joint multiplicities up to {max_mult} present ({groups} groups at the maximum)"
        ));
    }

    let points: Vec<Vec<f64>> = if exp.points.is_empty() {
        vec![vec![0.0; system.dim()]]
    } else {
        exp.points.clone()
    };
    let ray = normalize_ray(exp.ray.as_deref().unwrap_or(&exp.c))?;

    let mut rows: Vec<ReportRow> = Vec::new();
    let mut eff_lambdas: Vec<f64> = Vec::new();
    let mut per_lambda: Vec<f64> = Vec::new();

    match exp.target {
        Target::PointwiseDiag => {
            for &lam0 in &exp.lambdas {
                let (lam, vals) = with_nudge(lam0, &mut notes, |lam| {
                    let region = SpectralRegion::bx(lam, &exp.c)?;
                    let mut out = Vec::with_capacity(points.len());
                    for x in &points {
                        let actual = projector_kernel(&spectrum, &region, &cutoff, x, x)?;
                        let predicted =
                            leading_term_diagonal(&system, &cutoff, lam, &exp.c, x, band)?;
                        out.push((actual, Complex64::new(predicted, 0.0)));
                    }
                    Ok(out)
                })?;
                let mut worst: f64 = 0.0;
                for (i, (actual, predicted)) in vals.into_iter().enumerate() {
                    let rem = (actual - predicted).norm();
                    worst = worst.max(rem);
                    rows.push(ReportRow {
                        lambda: lam,
                        point: i,
                        actual,
                        predicted,
                        remainder_abs: rem,
                        truncation_bound: 0.0,
                    });
                }
                eff_lambdas.push(lam);
                per_lambda.push(worst);
            }
        }
        Target::PointwiseOffdiag => {
            notes.push(
                "off-diagonal amplitude is the diagonal multiplier symbol |σ(Ψ)(y,ξ)|²; \
                 compound-symbol discrepancy is part of the measured remainder"
                    .into(),
            );
            let mut rng = ChaCha8Rng::seed_from_u64(exp.seed);
            for &lam0 in &exp.lambdas {
                let pairs = sample_pairs(
                    &system,
                    band,
                    exp.pair_separation / lam0,
                    exp.n_pairs,
                    &mut rng,
                )?;
                let (lam, vals) = with_nudge(lam0, &mut notes, |lam| {
                    let region = SpectralRegion::bx(lam, &exp.c)?;
                    let mut out = Vec::with_capacity(pairs.len());
                    for (x, y) in &pairs {
                        let actual = projector_kernel(&spectrum, &region, &cutoff, x, y)?;
                        let predicted = leading_term_offdiag(
                            &system,
                            &cutoff,
                            lam,
                            &exp.c,
                            x,
                            y,
                            PhaseMode::FullPhase,
                            band,
                        )?;
                        out.push((actual, predicted));
                    }
                    Ok(out)
                })?;
                let mut worst: f64 = 0.0;
                for (i, (actual, predicted)) in vals.into_iter().enumerate() {
                    let rem = (actual - predicted).norm();
                    worst = worst.max(rem);
                    rows.push(ReportRow {
                        lambda: lam,
                        point: i,
                        actual,
                        predicted,
                        remainder_abs: rem,
                        truncation_bound: 0.0,
                    });
                }
                eff_lambdas.push(lam);
                per_lambda.push(worst);
            }
        }
        Target::Integrated => {
            // Counting remainders oscillate and cross zero; the sup-type
            // remainder of the law is measured as the max over a few nearby
            // sub-samples of each sweep value.
            const SUB_SAMPLES: [f64; 3] = [1.0, 1.043, 1.087];
            for &lam0 in &exp.lambdas {
                let mut worst: f64 = 0.0;
                let mut eff = lam0;
                for (i, factor) in SUB_SAMPLES.iter().enumerate() {
                    let (lam, (count, predicted)) =
                        with_nudge(lam0 * factor, &mut notes, |lam| {
                            let region = match exp.cone_half_angle {
                                Some(alpha) => SpectralRegion::cone_sector(&ray, alpha, lam)?,
                                None => SpectralRegion::ball(system.dim(), lam),
                            };
                            let count = spectrum.count_region(&region)?;
                            let predicted = integrated_prediction(&system, &region)?;
                            Ok((count, predicted))
                        })?;
                    if i == 0 {
                        eff = lam;
                    }
                    let rem = (count as f64 - predicted).abs();
                    worst = worst.max(rem);
                    rows.push(ReportRow {
                        lambda: lam,
                        point: i,
                        actual: Complex64::new(count as f64, 0.0),
                        predicted: Complex64::new(predicted, 0.0),
                        remainder_abs: rem,
                        truncation_bound: 0.0,
                    });
                }
                eff_lambdas.push(eff);
                per_lambda.push(worst);
            }
        }
        Target::Cluster => {
            // Running sup of the unit-box diagonal along the cone ray; the
            // cluster bound asserts this stays O(1).
            let x = &points[0];
            let mut sup: f64 = 0.0;
            for &r0 in &exp.lambdas {
                let (r, v) = with_nudge(r0, &mut notes, |r| {
                    let mu: Vec<f64> = ray.iter().map(|d| d * r).collect();
                    unit_box_diag(&spectrum, &mu, &cutoff, x)
                })?;
                sup = sup.max(v);
                rows.push(ReportRow {
                    lambda: r,
                    point: 0,
                    actual: Complex64::new(sup, 0.0),
                    predicted: Complex64::new(v, 0.0),
                    remainder_abs: sup,
                    truncation_bound: 0.0,
                });
                eff_lambdas.push(r);
                per_lambda.push(sup);
            }
        }
        Target::SmoothedMeasure => {
            let x = &points[0];
            for &r0 in &exp.lambdas {
                let mu: Vec<f64> = ray.iter().map(|d| d * r0).collect();
                let v = smoothed_measure_kernel(&spectrum, &mu, &mol, &cutoff, x, x)?;
                rows.push(ReportRow {
                    lambda: r0,
                    point: 0,
                    actual: v.value,
                    predicted: Complex64::new(0.0, 0.0),
                    remainder_abs: v.value.norm(),
                    truncation_bound: v.truncation_bound,
                });
                eff_lambdas.push(r0);
                per_lambda.push(v.value.norm());
            }
        }
        Target::Tauberian => {
            for &lam0 in &exp.lambdas {
                let (lam, gaps) = with_nudge(lam0, &mut notes, |lam| {
                    let mut out = Vec::with_capacity(points.len());
                    for x in &points {
                        let g = tauberian_gap(&spectrum, lam, &exp.c, &mol, &cutoff, x, x)?;
                        out.push(g);
                    }
                    Ok(out)
                })?;
                let mut worst: f64 = 0.0;
                for (i, g) in gaps.into_iter().enumerate() {
                    worst = worst.max(g.gap);
                    rows.push(ReportRow {
                        lambda: lam,
                        point: i,
                        actual: g.rough,
                        predicted: g.smoothed,
                        remainder_abs: g.gap,
                        truncation_bound: g.truncation_bound,
                    });
                }
                eff_lambdas.push(lam);
                per_lambda.push(worst);
            }
        }
    }

    let span_ok = eff_lambdas.len() >= 4
        && eff_lambdas.last().unwrap() / eff_lambdas.first().unwrap() >= 4.0 - 1e-9;
    let fit = if span_ok {
        match fit_exponent(&eff_lambdas, &per_lambda) {
            Ok(f) => Some(f),
            Err(msg) => {
                notes.push(format!("exponent fit degenerate: {msg}"));
                None
            }
        }
    } else {
        notes.push("exponent fit skipped: need ≥ 4 sweep values spanning a factor ≥ 4".into());
        None
    };

    let pass = match &fit {
        None => true,
        Some(f) => match exp.target {
            Target::Cluster => f.beta.abs() <= exp.target_exponent.abs() + exp.slack,
            Target::SmoothedMeasure => {
                if exp.target_exponent == 0.0 {
                    f.beta.abs() <= exp.slack
                } else {
                    f.beta <= exp.target_exponent + exp.slack
                }
            }
            _ => f.beta <= exp.target_exponent + exp.slack,
        },
    };

    Ok(ComparisonReport {
        experiment_id: exp.id.clone(),
        target: exp.target,
        system: system.descriptor(),
        lambdas: eff_lambdas,
        rows,
        per_lambda_remainder: per_lambda,
        fit,
        target_exponent: exp.target_exponent,
        slack: exp.slack,
        pass,
        runtime_seconds: start.elapsed().as_secs_f64(),
        threads: rayon::current_num_threads(),
        seed: exp.seed,
        spectrum_points: spectrum.pairs.len(),
        spectrum_lam_max: spectrum.lam_max,
        notes,
    })
}

fn normalize_ray(ray: &[f64]) -> Result<Vec<f64>> {
    let norm: f64 = ray.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0) {
        return Err(QciError::config("ray direction must be nonzero"));
    }
    Ok(ray.iter().map(|v| v / norm).collect())
}

/// Random point pairs with |x−y| ≤ separation, inside the band for
/// surfaces of revolution.
fn sample_pairs(
    system: &ModelSystem,
    band: Option<(f64, f64)>,
    separation: f64,
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut out = Vec::with_capacity(count);
    match &system.kind {
        ModelKind::FlatTorus { n } => {
            for _ in 0..count {
                let x: Vec<f64> = (0..*n).map(|_| rng.random_range(0.0..two_pi)).collect();
                let r = separation * rng.random_range(0.2..1.0);
                let phi = rng.random_range(0.0..two_pi);
                let mut y = x.clone();
                if *n == 1 {
                    y[0] += r;
                } else {
                    y[0] += r * phi.cos();
                    y[1] += r * phi.sin();
                }
                out.push((x, y));
            }
        }
        ModelKind::SurfaceOfRevolution { profile } => {
            let (lo, hi) = band.ok_or_else(|| {
                QciError::config("surface off-diagonal sampling needs a band")
            })?;
            let pad = separation.min((hi - lo) / 4.0);
            for _ in 0..count {
                let sigma = rng.random_range(lo + pad..hi - pad);
                let theta = rng.random_range(0.0..two_pi);
                let r = separation * rng.random_range(0.2..1.0);
                let phi = rng.random_range(0.0..two_pi);
                let x = vec![sigma, theta];
                let y = vec![sigma + r * phi.cos(), theta + r * phi.sin()];
                let _ = profile;
                out.push((x, y));
            }
        }
    }
    Ok(out)
}
