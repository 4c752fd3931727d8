//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Large joint spectra are built once and shared.

use std::sync::LazyLock;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qci_core::config::{
    CutoffConfig, ExperimentConfig, ExperimentSection, OutputConfig, SystemConfig, Target,
};
use qci_core::geometry::SpectralRegion;
use qci_core::kernels::{
    make_fejer, make_mollifier, projector_kernel, smoothed_measure_kernel, tauberian_gap,
    unit_box_diag, CutoffSymbol, Mollifier,
};
use qci_core::models::{builtin_profile, ModelSystem};
use qci_core::numerics::fit::fit_exponent;
use qci_core::numerics::quad::adaptive_simpson;
use qci_core::spectrum::{
    build_sor_spectrum, build_sor_spectrum_with, enumerate_torus, solve_radial_channel,
    JointSpectrum, SampleFilter, SorOptions,
};
use qci_core::weyl::{
    integrated_prediction, leading_term_diagonal, leading_term_offdiag, verify, PhaseMode,
};
use qci_core::{QciError, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
const BAND: (f64, f64) = (1.0, 2.1);
const BAND_POINTS: [f64; 5] = [1.0, 1.275, 1.55, 1.825, 2.1];

static TORUS: LazyLock<JointSpectrum> =
    LazyLock::new(|| enumerate_torus(2, &SpectralRegion::ball(2, 490.0)).unwrap());

fn sor_spectrum(name: &str, params: &[f64]) -> JointSpectrum {
    let profile = builtin_profile(name, params, 1024).unwrap();
    build_sor_spectrum_with(
        &profile,
        212.0,
        &SorOptions {
            grid_size: 2048,
            richardson: true,
            sample_filter: SampleFilter::ConeRatio(0.65),
            stored_points_cap: 2048,
        },
    )
    .unwrap()
}

static SPHERE: LazyLock<JointSpectrum> = LazyLock::new(|| sor_spectrum("sphere", &[]));
static BUMP: LazyLock<JointSpectrum> = LazyLock::new(|| sor_spectrum("bump", &[0.2]));
static MOLL: LazyLock<Mollifier> = LazyLock::new(|| make_mollifier(0.75).unwrap());
static FEJER: LazyLock<Mollifier> = LazyLock::new(|| make_fejer(0.75).unwrap());

fn sor_cutoff() -> CutoffSymbol {
    CutoffSymbol::sor_ratio(0.0, 0.5, 0.05).unwrap()
}

/// Retry across boundary-tie nudges λ ← λ(1 + 1e-6).
fn nudged<T>(lam0: f64, mut f: impl FnMut(f64) -> Result<T>) -> (f64, T) {
    let mut lam = lam0;
    for _ in 0..12 {
        match f(lam) {
            Err(QciError::BoundaryTie { .. }) => lam *= 1.0 + 1e-6,
            Err(e) => panic!("sweep at λ = {lam0}: {e}"),
            Ok(v) => return (lam, v),
        }
    }
    panic!("still tied after 12 nudges from λ = {lam0}");
}

fn unit(v: [f64; 2]) -> Vec<f64> {
    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
    vec![v[0] / n, v[1] / n]
}

/// Force the shared fixtures so that runtime-budgeted criteria time their
/// own sweeps rather than contention with concurrent spectrum builds.
fn warm_fixtures() {
    LazyLock::force(&TORUS);
    LazyLock::force(&SPHERE);
    LazyLock::force(&BUMP);
    LazyLock::force(&MOLL);
    LazyLock::force(&FEJER);
}

#[test]
fn acceptance_01_torus_pointwise_diagonal() {
    warm_fixtures();
    let t0 = std::time::Instant::now();
    let spec = &*TORUS;
    let sys = spec.system.clone();
    let cutoff = CutoffSymbol::unity();
    let c = [0.6, 0.8];
    let points = [[0.0, 0.0], [0.4, 1.1], [2.7, 3.3]];
    let lambdas = [25.0, 50.0, 100.0, 200.0, 400.0];
    let mut remainders = Vec::new();
    for &lam0 in &lambdas {
        let (lam, worst) = nudged(lam0, |lam| {
            let region = SpectralRegion::bx(lam, &c)?;
            let mut worst: f64 = 0.0;
            for x in &points {
                let actual = projector_kernel(spec, &region, &cutoff, x, x)?.re;
                let predicted = leading_term_diagonal(&sys, &cutoff, lam, &c, x, None)?;
                worst = worst.max((actual - predicted).abs());
            }
            Ok(worst)
        });
        let _ = lam;
        remainders.push(worst);
    }
    let fit = fit_exponent(&lambdas, &remainders).unwrap();
    let elapsed = t0.elapsed().as_secs_f64();
    let pass = fit.beta <= 1.2 && elapsed < 60.0;
    println!(
        "acceptance 01 torus pointwise diagonal: {} (fitted exponent {:.3} ≤ 1.2, {:.1}s < 60s)",
        if pass { "PASS" } else { "FAIL" },
        fit.beta,
        elapsed
    );
    assert!(fit.beta <= 1.2, "fitted exponent {}", fit.beta);
    assert!(elapsed < 60.0, "runtime {elapsed}");
}

#[test]
fn acceptance_02_torus_offdiagonal() {
    let spec = &*TORUS;
    let sys = spec.system.clone();
    let cutoff = CutoffSymbol::unity();
    let c = [0.6, 0.8];
    let lambdas = [25.0, 50.0, 100.0, 200.0, 400.0];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut remainders = Vec::new();
    let mut predictor_worst: f64 = 0.0;
    for &lam0 in &lambdas {
        // 10 random pairs with |x − y| ≤ 0.4/λ.
        let pairs: Vec<([f64; 2], [f64; 2])> = (0..10)
            .map(|_| {
                let x = [rng.random_range(0.0..TWO_PI), rng.random_range(0.0..TWO_PI)];
                let r = rng.random_range(0.05..1.0) * 0.4 / lam0;
                let phi = rng.random_range(0.0..TWO_PI);
                (x, [x[0] + r * phi.cos(), x[1] + r * phi.sin()])
            })
            .collect();
        let (lam, worst) = nudged(lam0, |lam| {
            let region = SpectralRegion::bx(lam, &c)?;
            let mut worst: f64 = 0.0;
            for (x, y) in &pairs {
                let actual = projector_kernel(spec, &region, &cutoff, x, y)?;
                let predicted =
                    leading_term_offdiag(&sys, &cutoff, lam, &c, x, y, PhaseMode::FullPhase, None)?;
                worst = worst.max((actual - predicted).norm());
            }
            Ok(worst)
        });
        remainders.push(worst);
        // The full-phase predictor equals the exact sine-product kernel.
        for (x, y) in &pairs {
            let predicted =
                leading_term_offdiag(&sys, &cutoff, lam, &c, x, y, PhaseMode::FullPhase, None)
                    .unwrap();
            let mut closed = 1.0;
            for k in 0..2 {
                let d: f64 = x[k] - y[k];
                closed *= 2.0 * (c[k] * lam * d).sin() / d;
            }
            closed /= TWO_PI * TWO_PI;
            predictor_worst = predictor_worst.max((predicted.re - closed).abs().max(predicted.im.abs()));
        }
    }
    let fit = fit_exponent(&lambdas, &remainders).unwrap();
    let pass = fit.beta <= 1.2 && predictor_worst <= 1e-8;
    println!(
        "acceptance 02 torus off-diagonal: {} (fitted exponent {:.3} ≤ 1.2, predictor vs closed form {:.2e} ≤ 1e-8)",
        if pass { "PASS" } else { "FAIL" },
        fit.beta,
        predictor_worst
    );
    assert!(fit.beta <= 1.2, "fitted exponent {}", fit.beta);
    assert!(predictor_worst <= 1e-8, "predictor gap {predictor_worst}");
}

#[test]
fn acceptance_03_sor_eigensolver_oracle() {
    warm_fixtures();
    let t0 = std::time::Instant::now();
    let profile = builtin_profile("sphere", &[], 2048).unwrap();
    let spec = build_sor_spectrum(&profile, 12.0, 4096).unwrap();
    // Completeness: Σ_{ℓ(ℓ+1) ≤ 144} (2ℓ+1) with ℓ ≤ 11 gives 144 states.
    let mut oracle_count = 0i64;
    let mut l = 0i64;
    while (l * (l + 1)) as f64 <= 144.0 {
        oracle_count += 2 * l + 1;
        l += 1;
    }
    assert_eq!(oracle_count, 144);
    assert_eq!(spec.pairs.len(), 144);
    let mut worst: f64 = 0.0;
    for p in &spec.pairs {
        let lam = p.lam[0];
        let ell = ((lam * lam + 0.25).sqrt() - 0.5).round();
        let exact = (ell * (ell + 1.0)).sqrt();
        assert!(ell >= p.quantum_numbers[0].unsigned_abs() as f64);
        let rel = if exact == 0.0 {
            lam.abs()
        } else {
            (lam - exact).abs() / exact
        };
        worst = worst.max(rel);
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let pass = worst <= 1e-5 && elapsed < 300.0;
    println!(
        "acceptance 03 eigensolver oracle: {} (worst rel err {:.2e} ≤ 1e-5, count 144, {:.1}s < 300s)",
        if pass { "PASS" } else { "FAIL" },
        worst,
        elapsed
    );
    assert!(worst <= 1e-5, "worst relative error {worst}");
    assert!(elapsed < 300.0, "runtime {elapsed}");
}

fn microlocal_diag_case(tag: &str, spec: &JointSpectrum) {
    let sys = spec.system.clone();
    let cutoff = sor_cutoff();
    let c = [0.8, 0.6];
    let lambdas = [25.0, 50.0, 100.0, 200.0];
    let profile = sys.profile().unwrap().clone();
    let mut remainders = Vec::new();
    let mut oracle_worst: f64 = 0.0;
    for &lam0 in &lambdas {
        // Sup-type remainder: lattice-shell crossings oscillate in λ, so
        // sample a few nearby sweep values and take the worst.
        let mut worst_over_samples: f64 = 0.0;
        let mut lam = lam0;
        for factor in [1.0, 1.021, 1.043] {
            let (lam_eff, worst) = nudged(lam0 * factor, |lam| {
                let region = SpectralRegion::bx(lam, &c)?;
                let mut worst: f64 = 0.0;
                for &sigma in &BAND_POINTS {
                    let x = [sigma, 0.0];
                    let actual = projector_kernel(spec, &region, &cutoff, &x, &x)?.re;
                    let predicted =
                        leading_term_diagonal(&sys, &cutoff, lam, &c, &x, Some(BAND))?;
                    worst = worst.max((actual - predicted).abs());
                }
                Ok(worst)
            });
            if factor == 1.0 {
                lam = lam_eff;
            }
            worst_over_samples = worst_over_samples.max(worst);
        }
        remainders.push(worst_over_samples);
        // Polar-reduction oracle: on the χ₀ support the t-cap is constant
        // (c_max < c₂/c₁), so the orthonormal-frame fiber integral
        // collapses to (c₁λ)²/2 · ∫χ₀(a sin ψ)² dψ / (2π)².
        for &sigma in &BAND_POINTS {
            let a = profile.a(sigma);
            let chi = &cutoff;
            let integral = adaptive_simpson(
                &|psi: f64| chi.ratio_value(a * psi.sin()).powi(2),
                0.0,
                TWO_PI,
                1e-12,
                44,
            )
            .unwrap();
            let oracle = (c[0] * lam).powi(2) / 2.0 * integral / (TWO_PI * TWO_PI);
            let predicted =
                leading_term_diagonal(&sys, &cutoff, lam, &c, &[sigma, 0.0], Some(BAND)).unwrap();
            oracle_worst = oracle_worst.max(((predicted - oracle) / oracle).abs());
        }
    }
    let fit = fit_exponent(&lambdas, &remainders).unwrap();
    let pass = fit.beta <= 1.2 && oracle_worst <= 1e-6;
    println!(
        "acceptance 04 microlocal diagonal [{tag}]: {} (fitted exponent {:.3} ≤ 1.2, oracle gap {:.2e} ≤ 1e-6)",
        if pass { "PASS" } else { "FAIL" },
        fit.beta,
        oracle_worst
    );
    assert!(fit.beta <= 1.2, "[{tag}] fitted exponent {}", fit.beta);
    assert!(oracle_worst <= 1e-6, "[{tag}] oracle gap {oracle_worst}");
}

#[test]
fn acceptance_04_microlocal_diagonal_sphere() {
    microlocal_diag_case("sphere", &SPHERE);
}

#[test]
fn acceptance_04_microlocal_diagonal_bump() {
    microlocal_diag_case("bump(0.2)", &BUMP);
}

#[test]
fn acceptance_05_integrated_law() {
    // Torus through the full verify() orchestration.
    let cfg = ExperimentConfig {
        schema_version: 1,
        system: SystemConfig {
            kind: "torus".into(),
            dim: Some(2),
            profile: None,
            profile_params: vec![],
            profile_path: None,
            grid_size: 2048,
            profile_grid: 1024,
        },
        band: None,
        cutoff: CutoffConfig::default(),
        experiment: ExperimentSection {
            id: "acceptance_integrated".into(),
            target: Target::Integrated,
            c: vec![0.6, 0.8],
            lambdas: vec![25.0, 50.0, 100.0, 200.0, 400.0],
            delta0: 0.75,
            seed: 7,
            target_exponent: 1.0,
            slack: 0.2,
            points: vec![],
            pair_separation: 0.4,
            n_pairs: 10,
            ray: Some(vec![0.8253356149096783, 0.5646424733950354]),
            cone_half_angle: Some(0.35),
            richardson: true,
            sample_cap: 1024,
        },
        output: OutputConfig {
            directory: "out/acceptance_integrated".into(),
        },
    };
    let report = verify(&cfg).unwrap();
    let beta_torus = report.fit.as_ref().unwrap().beta;
    assert!(report.pass, "torus integrated verify failed: β = {beta_torus}");

    // Gauss-circle cross-check is exact.
    let ball = SpectralRegion::ball(2, 10.0);
    let count = TORUS.count_region(&ball).unwrap();
    let mut brute = 0;
    for k1 in -10i64..=10 {
        for k2 in -10i64..=10 {
            if k1 * k1 + k2 * k2 <= 100 {
                brute += 1;
            }
        }
    }
    assert_eq!(count, brute);
    assert_eq!(count, 317);
    let prediction = integrated_prediction(&TORUS.system, &ball).unwrap();
    assert!((count as f64 - prediction - 2.8407).abs() < 1e-3);

    // Sphere: cone-restricted counts against (2π)⁻² Liouville volume, with
    // the same sup-type sub-sampling as the verify sweep.
    let spec = &*SPHERE;
    let sys = spec.system.clone();
    let axis = unit([1.0, 0.3]);
    let lambdas = [20.0, 40.0, 80.0, 160.0];
    let mut remainders = Vec::new();
    for &lam0 in &lambdas {
        let mut worst: f64 = 0.0;
        for factor in [1.0, 1.043, 1.087] {
            let region = SpectralRegion::cone_sector(&axis, 0.2, lam0 * factor).unwrap();
            let count = spec.count_region(&region).unwrap() as f64;
            let predicted = integrated_prediction(&sys, &region).unwrap();
            worst = worst.max((count - predicted).abs());
        }
        remainders.push(worst);
    }
    let fit = fit_exponent(&lambdas, &remainders).unwrap();
    let pass = fit.beta <= 1.2;
    println!(
        "acceptance 05 integrated law: {} (torus exponent {:.3} ≤ 1.2, sphere exponent {:.3} ≤ 1.2, ball count 317 exact)",
        if pass { "PASS" } else { "FAIL" },
        beta_torus,
        fit.beta
    );
    assert!(fit.beta <= 1.2, "sphere integrated exponent {}", fit.beta);
}

fn smoothed_measure_sweep(
    spec: &JointSpectrum,
    cutoff: &CutoffSymbol,
    ray: &[f64],
    radii: &[f64],
    x: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let mut values = Vec::new();
    let mut bounds = Vec::new();
    for &r in radii {
        let mu: Vec<f64> = ray.iter().map(|d| d * r).collect();
        let v = smoothed_measure_kernel(spec, &mu, &MOLL, cutoff, x, x).unwrap();
        values.push(v.value.norm());
        bounds.push(v.truncation_bound);
    }
    (values, bounds)
}

#[test]
fn acceptance_06_smoothed_measure_asymptotics() {
    // Torus, microlocalized to a cone around c̄.
    let cutoff = CutoffSymbol::torus_cone(&[0.6, 0.8], 0.25, 0.4).unwrap();
    let radii = [50.0, 100.0, 150.0, 200.0];
    let x = [0.2, 0.8];
    let (inside, _) = smoothed_measure_sweep(&TORUS, &cutoff, &[0.6, 0.8], &radii, &x);
    let fit_in = fit_exponent(&radii, &inside).unwrap();
    let (outside, _) = smoothed_measure_sweep(&TORUS, &cutoff, &[-0.6, -0.8], &radii, &x);
    let fit_out = fit_exponent(&radii, &outside).unwrap();

    // Sphere, ray inside the ratio cone and its η₁ < 0 reflection.
    let chi = sor_cutoff();
    let ray = unit([1.0, 0.3]);
    let reflected = unit([-1.0, 0.3]);
    let radii_s = [30.0, 55.0, 85.0, 135.0];
    let xs = [1.55, 0.0];
    let (inside_s, _) = smoothed_measure_sweep(&SPHERE, &chi, &ray, &radii_s, &xs);
    let fit_in_s = fit_exponent(&radii_s, &inside_s).unwrap();
    let (outside_s, _) = smoothed_measure_sweep(&SPHERE, &chi, &reflected, &radii_s, &xs);
    let fit_out_s = fit_exponent(&radii_s, &outside_s).unwrap();

    let pass = fit_in.beta.abs() <= 0.1
        && fit_out.beta <= -4.0
        && fit_in_s.beta.abs() <= 0.1
        && fit_out_s.beta <= -4.0;
    println!(
        "acceptance 06 smoothed measure: {} (torus O(1) |β| = {:.3} ≤ 0.1, decay β = {:.2} ≤ -4; sphere O(1) |β| = {:.3} ≤ 0.1, decay β = {:.2} ≤ -4)",
        if pass { "PASS" } else { "FAIL" },
        fit_in.beta,
        fit_out.beta,
        fit_in_s.beta,
        fit_out_s.beta
    );
    assert!(fit_in.beta.abs() <= 0.1, "torus inside β = {}", fit_in.beta);
    assert!(fit_out.beta <= -4.0, "torus reflected β = {}", fit_out.beta);
    assert!(
        fit_in_s.beta.abs() <= 0.1,
        "sphere inside β = {}",
        fit_in_s.beta
    );
    assert!(
        fit_out_s.beta <= -4.0,
        "sphere reflected β = {}",
        fit_out_s.beta
    );
}

/// Running sup of unit-box masses along the ray, fitted growth exponent.
fn cluster_sweep(
    spec: &JointSpectrum,
    cutoff: &CutoffSymbol,
    ray: &[f64],
    radii: &[f64],
    x: &[f64],
) -> (Vec<f64>, f64) {
    let mut sup: f64 = 0.0;
    let mut sups = Vec::new();
    for &r0 in radii {
        let (_, v) = nudged(r0, |r| {
            let mu: Vec<f64> = ray.iter().map(|d| d * r).collect();
            unit_box_diag(spec, &mu, cutoff, x)
        });
        assert!(v >= -1e-12, "negative unit-box mass {v}");
        sup = sup.max(v);
        sups.push(sup);
    }
    let fit = fit_exponent(radii, &sups).unwrap();
    (sups, fit.beta)
}

/// Lemma-style covering bound: the unit-box mass is dominated by twice the
/// Fejér-smoothed masses over an explicit covering of the box.
fn covering_bound_holds(
    spec: &JointSpectrum,
    cutoff: &CutoffSymbol,
    mu: &[f64],
    x: &[f64],
) -> bool {
    // ε₀ with β(τ̄) ≥ ½ for ‖τ̄‖∞ ≤ ε₀ (product of two 1-D factors).
    let mut eps = 0.0;
    let mut t = 0.0;
    while FEJER.eval(t) >= 0.5f64.sqrt() {
        eps = t;
        t += 1e-3;
    }
    let m_per_axis = (1.0 / (2.0 * eps)).ceil() as usize;
    let centers_1d: Vec<f64> = (0..m_per_axis)
        .map(|j| ((2 * j + 1) as f64 * eps).min(1.0))
        .collect();
    let (_, v_box) = nudged(1.0, |s| {
        let mu_s: Vec<f64> = mu.iter().map(|m| m * s).collect();
        unit_box_diag(spec, &mu_s, cutoff, x)
    });
    let mut rhs = 0.0;
    for c1 in &centers_1d {
        for c2 in &centers_1d {
            let center = [mu[0] + c1, mu[1] + c2];
            let s = smoothed_measure_kernel(spec, &center, &FEJER, cutoff, x, x).unwrap();
            rhs += 2.0 * s.value.re;
        }
    }
    v_box <= rhs + 1e-9 * rhs.abs().max(1.0)
}

#[test]
fn acceptance_07_cluster_bounds() {
    let tc = CutoffSymbol::torus_cone(&[0.6, 0.8], 0.25, 0.4).unwrap();
    let radii_t: Vec<f64> = (0..40).map(|j| 8.3 + 4.8 * j as f64).collect();
    let x_t = [0.2, 0.8];
    let (_, beta_t) = cluster_sweep(&TORUS, &tc, &[0.6, 0.8], &radii_t, &x_t);

    let chi = sor_cutoff();
    let ray = unit([1.0, 0.3]);
    let radii_s: Vec<f64> = (0..40).map(|j| 4.1 + 3.3 * j as f64).collect();
    let x_s = [1.55, 0.0];
    let (_, beta_s) = cluster_sweep(&SPHERE, &chi, &ray, &radii_s, &x_s);

    // Covering comparison at sample ray positions on both models.
    for r in [50.3, 120.7, 190.1] {
        assert!(
            covering_bound_holds(&TORUS, &tc, &[0.6 * r, 0.8 * r], &x_t),
            "torus covering bound fails at R = {r}"
        );
    }
    for r in [40.7, 80.3, 120.9] {
        let mu = [ray[0] * r, ray[1] * r];
        assert!(
            covering_bound_holds(&SPHERE, &chi, &mu, &x_s),
            "sphere covering bound fails at R = {r}"
        );
    }

    let pass = beta_t.abs() <= 0.15 && beta_s.abs() <= 0.15;
    println!(
        "acceptance 07 cluster bounds: {} (torus |β| = {:.3} ≤ 0.15, sphere |β| = {:.3} ≤ 0.15, covering bounds hold)",
        if pass { "PASS" } else { "FAIL" },
        beta_t,
        beta_s
    );
    assert!(beta_t.abs() <= 0.15, "torus cluster growth {beta_t}");
    assert!(beta_s.abs() <= 0.15, "sphere cluster growth {beta_s}");
}

fn tauberian_sweep(
    spec: &JointSpectrum,
    cutoff: &CutoffSymbol,
    c: &[f64],
    lambdas: &[f64],
    x: &[f64],
) -> f64 {
    let mut gaps = Vec::new();
    for &lam0 in lambdas {
        let mut worst: f64 = 0.0;
        for factor in [1.0, 1.021, 1.043] {
            let (_, g) = nudged(lam0 * factor, |lam| {
                tauberian_gap(spec, lam, c, &MOLL, cutoff, x, x)
            });
            worst = worst.max(g.gap);
        }
        gaps.push(worst);
    }
    fit_exponent(lambdas, &gaps).unwrap().beta
}

#[test]
fn acceptance_08_tauberian_gap() {
    let beta_torus = tauberian_sweep(
        &TORUS,
        &CutoffSymbol::unity(),
        &[0.6, 0.8],
        &[25.0, 50.0, 100.0, 200.0, 400.0],
        &[0.3, 1.1],
    );
    let chi = sor_cutoff();
    let lams = [25.0, 45.0, 70.0, 100.0];
    let beta_sphere = tauberian_sweep(&SPHERE, &chi, &[0.8, 0.6], &lams, &[1.55, 0.0]);
    let beta_bump = tauberian_sweep(&BUMP, &chi, &[0.8, 0.6], &lams, &[1.55, 0.0]);
    let pass = beta_torus <= 1.2 && beta_sphere <= 1.2 && beta_bump <= 1.2;
    println!(
        "acceptance 08 tauberian gap: {} (torus β = {:.3}, sphere β = {:.3}, bump β = {:.3}, all ≤ 1.2)",
        if pass { "PASS" } else { "FAIL" },
        beta_torus,
        beta_sphere,
        beta_bump
    );
    assert!(beta_torus <= 1.2, "torus tauberian exponent {beta_torus}");
    assert!(beta_sphere <= 1.2, "sphere tauberian exponent {beta_sphere}");
    assert!(beta_bump <= 1.2, "bump tauberian exponent {beta_bump}");
}

#[test]
fn acceptance_09_invariant_suite() {
    let mut checks: Vec<(&str, bool)> = Vec::new();

    // Hermitian symmetry on both models.
    let region = SpectralRegion::bx(40.3, &[0.8, 0.6]).unwrap();
    let chi = sor_cutoff();
    let x = [1.3, 0.4];
    let y = [1.9, 2.2];
    let kxy = projector_kernel(&SPHERE, &region, &chi, &x, &y).unwrap();
    let kyx = projector_kernel(&SPHERE, &region, &chi, &y, &x).unwrap();
    checks.push(("hermitian symmetry (sphere)", (kxy - kyx.conj()).norm() < 1e-12));
    let region_t = SpectralRegion::bx(30.3, &[0.6, 0.8]).unwrap();
    let tx = [0.3, 1.1];
    let ty = [2.0, 4.4];
    let ktxy = projector_kernel(&TORUS, &region_t, &CutoffSymbol::unity(), &tx, &ty).unwrap();
    let ktyx = projector_kernel(&TORUS, &region_t, &CutoffSymbol::unity(), &ty, &tx).unwrap();
    checks.push(("hermitian symmetry (torus)", (ktxy - ktyx.conj()).norm() < 1e-12));

    // Diagonal nonnegativity at 100 random unit boxes.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut nonneg = true;
    for _ in 0..100 {
        let mu = [rng.random_range(-40.0..40.0), rng.random_range(-40.0..40.0)];
        let xp = [rng.random_range(0.0..TWO_PI), rng.random_range(0.0..TWO_PI)];
        let (_, v) = nudged(1.0, |s| {
            unit_box_diag(&TORUS, &[mu[0] * s, mu[1] * s], &CutoffSymbol::unity(), &xp)
        });
        nonneg &= v >= -1e-12;
    }
    checks.push(("diagonal nonnegativity (100 boxes)", nonneg));

    // Homogeneity / scaling laws.
    let sys: &ModelSystem = &SPHERE.system;
    let lead1 =
        leading_term_diagonal(sys, &chi, 20.0, &[0.8, 0.6], &[1.55, 0.0], Some(BAND)).unwrap();
    let lead2 =
        leading_term_diagonal(sys, &chi, 40.0, &[0.8, 0.6], &[1.55, 0.0], Some(BAND)).unwrap();
    checks.push(("diagonal scaling λ²", (lead2 / lead1 - 4.0).abs() < 1e-6));

    // Dirichlet-product oracle at 100 random (x, y, λ).
    let mut dirichlet_ok = true;
    let mut worst_dirichlet: f64 = 0.0;
    for _ in 0..100 {
        let lam0 = rng.random_range(5.0..15.0);
        let xp = [rng.random_range(0.0..TWO_PI), rng.random_range(0.0..TWO_PI)];
        let yp = [rng.random_range(0.0..TWO_PI), rng.random_range(0.0..TWO_PI)];
        let c = [0.6, 0.8];
        let (lam, actual) = nudged(lam0, |lam| {
            let region = SpectralRegion::bx(lam, &c)?;
            projector_kernel(&TORUS, &region, &CutoffSymbol::unity(), &xp, &yp)
        });
        let mut closed = Complex64::new(1.0, 0.0);
        for k in 0..2 {
            let cap_k = (c[k] * lam).floor();
            let d: f64 = xp[k] - yp[k];
            let factor = if d.abs() < 1e-9 {
                (2.0 * cap_k + 1.0) / TWO_PI
            } else {
                ((cap_k + 0.5) * d).sin() / (TWO_PI * (d / 2.0).sin())
            };
            closed *= factor;
        }
        let err = (actual - closed).norm();
        worst_dirichlet = worst_dirichlet.max(err);
        dirichlet_ok &= err < 1e-10;
    }
    checks.push(("dirichlet-product oracle (100 samples)", dirichlet_ok));

    // Orthonormality: 50 random pairs within one m-channel.
    let profile = builtin_profile("sphere", &[], 1024).unwrap();
    let channel = solve_radial_channel(&profile, 1, 30.0, 1024).unwrap();
    let h = std::f64::consts::PI / 2048.0;
    let x0 = h / 2.0;
    let mut ortho = true;
    for _ in 0..50 {
        let i = rng.random_range(0..channel.len());
        let j = rng.random_range(0..channel.len());
        let (fi, fj) = (&channel[i].radial_samples, &channel[j].radial_samples);
        let stride_h = std::f64::consts::PI / fi.len() as f64;
        let mut acc = 0.0;
        for idx in 0..fi.len() {
            let sigma = x0 + idx as f64 * stride_h;
            acc += fi[idx] * fj[idx] * profile.a(sigma) * stride_h;
        }
        let expect = if i == j { 1.0 } else { 0.0 };
        ortho &= (acc - expect).abs() < 1e-6;
    }
    checks.push(("orthonormality (50 pairs)", ortho));

    // Grid-convergence order of the eigenvalue drift.
    let mut errs = Vec::new();
    for n in [256usize, 512, 1024] {
        let pairs = build_sor_spectrum_with(
            &profile,
            4.0,
            &SorOptions {
                grid_size: n,
                richardson: false,
                sample_filter: SampleFilter::None,
                stored_points_cap: 1024,
            },
        )
        .unwrap();
        let lam2 = pairs
            .pairs
            .iter()
            .find(|p| p.quantum_numbers == vec![0, 3])
            .map(|p| p.lam[0] * p.lam[0])
            .unwrap();
        errs.push((lam2 - 12.0).abs());
    }
    let order1 = (errs[0] / errs[1]).log2();
    let order2 = (errs[1] / errs[2]).log2();
    checks.push((
        "grid-convergence order in [1.8, 2.2]",
        (1.8..=2.2).contains(&order1) && (1.8..=2.2).contains(&order2),
    ));

    let all = checks.iter().all(|(_, ok)| *ok);
    println!(
        "acceptance 09 invariant suite: {}",
        if all { "PASS" } else { "FAIL" }
    );
    for (name, ok) in &checks {
        println!("  - {name}: {}", if *ok { "ok" } else { "FAIL" });
    }
    assert!(all, "invariant suite failures: {checks:?}");
}
