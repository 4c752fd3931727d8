//! Schwartz-class mollifiers with compactly supported Fourier transform.
//!
//! The plateau variant has `ρ̂ = 1` on `[-δ₀/2, δ₀/2]`, support `[-δ₀, δ₀]`,
//! exponential-type smoothstep shoulders, so `ρ` is even, real, `∫ρ = 1`,
//! and decays faster than any polynomial. The Fejér variant is
//! `β = |γ|²/γ(0)²` with `γ̂` a bump supported in `[-δ/2, δ/2]`: `β ≥ 0`
//! exactly, `β(0) = 1`, and `β̂ = (γ̂ ⋆ γ̂)/(2π γ(0)²)` vanishes identically
//! outside `[-δ, δ]`.
//!
//! ρ and its antiderivative are cached on a symmetric grid out to
//! `|s| = 200/δ₀` with measured polynomial tail certificates
//! `|ρ(s)| ≤ C_N (1+|s|)^{-N}`, N ∈ {2, 4, 8}.

use crate::error::QciError;
use crate::numerics::bump::smooth01;
use crate::numerics::interp::cubic_uniform;
use crate::numerics::quad::gl_panels;
use crate::Result;

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MollifierKind {
    /// ρ̂ plateau bump; ρ̂ ≡ 1 near 0.
    Plateau,
    /// β = |γ|², nonnegative (Fejér-type).
    Fejer,
}

#[derive(Debug, Clone)]
pub struct Mollifier {
    /// Support radius of the Fourier transform.
    pub delta0: f64,
    pub kind: MollifierKind,
    /// β ≥ 0 holds exactly (Fejér variant).
    pub nonneg: bool,
    /// Measured `(N, C_N)` with `|ρ(s)| ≤ C_N (1+|s|)^{-N}` over the cache.
    pub tail_certificates: Vec<(u32, f64)>,
    grid_h: f64,
    /// ρ(s_i) on s_i = i·grid_h, i = 0.. (even extension implied).
    values: Vec<f64>,
    /// Antiderivative R(s_i) = ∫₀^{s_i} ρ (odd extension implied).
    antider: Vec<f64>,
    /// γ(0) for the Fejér variant (0 otherwise).
    gamma0: f64,
}

/// The plateau transform: 1 on `[-half, half]`, 0 outside `[-supp, supp]`,
/// smoothstep in between.
fn plateau_hat(t: f64, half: f64, supp: f64) -> f64 {
    let t = t.abs();
    if t <= half {
        1.0
    } else if t >= supp {
        0.0
    } else {
        smooth01((supp - t) / (supp - half))
    }
}

/// (1/π) ∫₀^supp ĥ(t) cos(s t) dt with ĥ the plateau bump.
fn inverse_cos_transform(s: f64, half: f64, supp: f64) -> f64 {
    let plateau = if s.abs() < 1e-12 {
        half
    } else {
        (s * half).sin() / s
    };
    let waves = (s.abs() * (supp - half)) / (2.0 * PI);
    let panels = (4.0 + 2.0 * waves).ceil() as usize;
    let shoulder = gl_panels(
        |t| plateau_hat(t, half, supp) * (s * t).cos(),
        half,
        supp,
        16,
        panels,
    );
    (plateau + shoulder) / PI
}

/// (1/π) ∫₀^supp ĥ(t) sin(s t)/t dt — the antiderivative ∫₀^s ρ.
fn inverse_sin_transform(s: f64, half: f64, supp: f64) -> f64 {
    let waves = (s.abs() * supp) / (2.0 * PI);
    let panels = (4.0 + 2.0 * waves).ceil() as usize;
    let whole = gl_panels(
        |t| {
            let frac = if t.abs() < 1e-14 { s } else { (s * t).sin() / t };
            plateau_hat(t, half, supp) * frac
        },
        0.0,
        supp,
        16,
        panels,
    );
    whole / PI
}

/// Plateau mollifier with `ρ̂ ≡ 1` on `[-δ₀/2, δ₀/2]`, support `[-δ₀, δ₀]`.
pub fn make_mollifier(delta0: f64) -> Result<Mollifier> {
    if !(delta0 > 0.0) {
        return Err(QciError::config("mollifier needs δ₀ > 0"));
    }
    build(delta0, MollifierKind::Plateau)
}

/// Fejér-type mollifier: `β = |γ|²/γ(0)²` with `supp γ̂ ⊂ [-δ/2, δ/2]`.
pub fn make_fejer(delta: f64) -> Result<Mollifier> {
    if !(delta > 0.0) {
        return Err(QciError::config("fejer mollifier needs δ > 0"));
    }
    build(delta, MollifierKind::Fejer)
}

fn build(delta0: f64, kind: MollifierKind) -> Result<Mollifier> {
    let s_max = 200.0 / delta0;
    // ~420 samples per oscillation wavelength 2π/δ₀ of ρ.
    let grid_h = 2.0 * PI / (delta0 * 420.0);
    let n = (s_max / grid_h).ceil() as usize + 4;

    let (half, supp) = match kind {
        MollifierKind::Plateau => (delta0 / 2.0, delta0),
        // γ̂ supported in [-δ/2, δ/2] with plateau [-δ/4, δ/4].
        MollifierKind::Fejer => (delta0 / 4.0, delta0 / 2.0),
    };

    let raw: Vec<f64> = (0..n)
        .map(|i| inverse_cos_transform(i as f64 * grid_h, half, supp))
        .collect();

    let (values, antider, gamma0) = match kind {
        MollifierKind::Plateau => {
            let antider: Vec<f64> = (0..n)
                .map(|i| inverse_sin_transform(i as f64 * grid_h, half, supp))
                .collect();
            (raw, antider, 0.0)
        }
        MollifierKind::Fejer => {
            let gamma0 = raw[0];
            let beta: Vec<f64> = raw.iter().map(|g| (g / gamma0) * (g / gamma0)).collect();
            // Cumulative ∫₀^s β by the composite trapezoid on the fine grid.
            let mut antider = Vec::with_capacity(n);
            let mut acc = 0.0;
            antider.push(0.0);
            for i in 1..n {
                acc += 0.5 * (beta[i - 1] + beta[i]) * grid_h;
                antider.push(acc);
            }
            (beta, antider, gamma0)
        }
    };

    let mut tail_certificates = Vec::new();
    for n_exp in [2u32, 4, 8] {
        let c = values
            .iter()
            .enumerate()
            .map(|(i, v)| v.abs() * (1.0 + i as f64 * grid_h).powi(n_exp as i32))
            .fold(0.0, f64::max);
        tail_certificates.push((n_exp, c));
    }

    Ok(Mollifier {
        delta0,
        kind,
        nonneg: kind == MollifierKind::Fejer,
        tail_certificates,
        grid_h,
        values,
        antider,
        gamma0,
    })
}

impl Mollifier {
    pub fn s_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.grid_h
    }

    /// ρ(s) (or β(s) for the Fejér variant).
    pub fn eval(&self, s: f64) -> f64 {
        let s = s.abs();
        if s >= self.s_max() {
            return 0.0;
        }
        let v = cubic_uniform(0.0, self.grid_h, &self.values, s);
        if self.nonneg {
            v.max(0.0)
        } else {
            v
        }
    }

    /// R(s) = ∫₀^s ρ; odd in s, R(±∞) = ±1/2 for the plateau variant.
    pub fn antiderivative(&self, s: f64) -> f64 {
        let mag = s.abs();
        let v = if mag >= self.s_max() {
            self.antider[self.antider.len() - 1]
        } else {
            cubic_uniform(0.0, self.grid_h, &self.antider, mag)
        };
        if s < 0.0 {
            -v
        } else {
            v
        }
    }

    /// Box-convolution weight `W(τ; Λ) = ∫_{τ-Λ}^{τ+Λ} ρ`.
    pub fn box_weight(&self, tau: f64, half_width: f64) -> f64 {
        self.antiderivative(tau + half_width) - self.antiderivative(tau - half_width)
    }

    /// ρ̂(t) (β̂(t) for Fejér, via the exact convolution of γ̂, which
    /// vanishes identically for |t| ≥ δ).
    pub fn hat(&self, t: f64) -> f64 {
        match self.kind {
            MollifierKind::Plateau => plateau_hat(t, self.delta0 / 2.0, self.delta0),
            MollifierKind::Fejer => {
                let supp = self.delta0 / 2.0;
                let half = self.delta0 / 4.0;
                let lo = (t - supp).max(-supp);
                let hi = (t + supp).min(supp);
                if hi <= lo {
                    return 0.0;
                }
                let conv = gl_panels(
                    |u| plateau_hat(u, half, supp) * plateau_hat(t - u, half, supp),
                    lo,
                    hi,
                    16,
                    8,
                );
                conv / (2.0 * PI * self.gamma0 * self.gamma0)
            }
        }
    }

    /// Measured tail constant for the requested decay order.
    pub fn tail_constant(&self, n_exp: u32) -> f64 {
        self.tail_certificates
            .iter()
            .find(|(n, _)| *n == n_exp)
            .map(|(_, c)| *c)
            .unwrap_or(f64::INFINITY)
    }

    /// Completeness margin required of spectra entering smoothed sums.
    pub fn tail_margin(&self) -> f64 {
        50.0 / self.delta0
    }

    /// Radius beyond which every ρ-factor is certified below `floor`.
    pub fn inclusion_radius(&self, floor: f64) -> f64 {
        let c8 = self.tail_constant(8);
        ((c8 / floor).powf(1.0 / 8.0) - 1.0).clamp(1.0, self.s_max())
    }

    /// Measured constant for `|1_{[-Λ,Λ]}(τ) − W(τ; Λ)| ≤ C (1+||τ|-Λ|)^{-N}`,
    /// scanned over τ for several box half-widths.
    pub fn box_gap_constant(&self, n_exp: u32) -> f64 {
        let mut c: f64 = 0.0;
        for half_width in [10.0, 20.0 / self.delta0, 40.0 / self.delta0] {
            let mut tau = 0.0;
            while tau < half_width + self.s_max().min(120.0 / self.delta0) {
                let indicator = if tau <= half_width { 1.0 } else { 0.0 };
                let gap = (indicator - self.box_weight(tau, half_width)).abs();
                let dist = (tau - half_width).abs();
                c = c.max(gap * (1.0 + dist).powi(n_exp as i32));
                tau += 0.1 / self.delta0;
            }
        }
        c
    }
}
