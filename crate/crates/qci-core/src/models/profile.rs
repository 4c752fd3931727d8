//! Surface-of-revolution profiles `a(σ)` with analytic closures for the
//! built-in families and cubic interpolation for user tables.

use crate::error::QciError;
use crate::numerics::quad::gl_integrate;
use crate::Result;

/// How off-grid values of `a` and `a'` are produced.
#[derive(Debug, Clone)]
pub enum ProfileClosure {
    /// Round sphere: `a = sin σ`, `L = π`.
    Sphere,
    /// Ellipsoid of revolution with polar/equatorial aspect ratio `aspect`,
    /// arc-length parametrized. `t_nodes[i]` is the ellipse parameter at the
    /// uniform arc-length node `σ_i = i·L/(nodes-1)`.
    Ellipsoid { aspect: f64, t_nodes: Vec<f64> },
    /// One-bump family `a = sin σ · (1 + amplitude·sin² σ)`, `L = π`.
    Bump { amplitude: f64 },
    /// User table, natural cubic spline through the given `(σ, a)` rows.
    Table {
        sigma: Vec<f64>,
        a: Vec<f64>,
        second_deriv: Vec<f64>,
    },
}

/// Profile metric for a closed surface of revolution.
#[derive(Debug, Clone)]
pub struct ProfileMetric {
    pub name: String,
    /// Meridian length L (radians of arc length).
    pub length: f64,
    /// Number of grid intervals of the uniform sample grid (≥ 64).
    pub grid_size: usize,
    /// `a` at `σ_i = i·L/grid_size`, `i = 0..=grid_size`.
    pub a_samples: Vec<f64>,
    /// `a'` on the same grid.
    pub a_prime_samples: Vec<f64>,
    pub closure: ProfileClosure,
    /// max a over a fine scan; controls the angular channel bound.
    pub a_max: f64,
}

impl ProfileMetric {
    pub fn a(&self, sigma: f64) -> f64 {
        match &self.closure {
            ProfileClosure::Sphere => sigma.sin(),
            ProfileClosure::Bump { amplitude } => {
                let s = sigma.sin();
                s * (1.0 + amplitude * s * s)
            }
            ProfileClosure::Ellipsoid { t_nodes, .. } => {
                self.ellipsoid_t(t_nodes, sigma).sin()
            }
            ProfileClosure::Table {
                sigma: xs,
                a,
                second_deriv,
            } => spline_eval(xs, a, second_deriv, sigma),
        }
    }

    pub fn a_prime(&self, sigma: f64) -> f64 {
        match &self.closure {
            ProfileClosure::Sphere => sigma.cos(),
            ProfileClosure::Bump { amplitude } => {
                let s = sigma.sin();
                sigma.cos() * (1.0 + 3.0 * amplitude * s * s)
            }
            ProfileClosure::Ellipsoid { aspect, t_nodes } => {
                let t = self.ellipsoid_t(t_nodes, sigma);
                t.cos() / ellipse_speed(*aspect, t)
            }
            ProfileClosure::Table {
                sigma: xs,
                a,
                second_deriv,
            } => spline_deriv(xs, a, second_deriv, sigma),
        }
    }

    /// Ellipse parameter t at arc length σ, cubic interpolation of the
    /// precomputed uniform inversion table.
    fn ellipsoid_t(&self, t_nodes: &[f64], sigma: f64) -> f64 {
        let n = t_nodes.len();
        let h = self.length / (n - 1) as f64;
        let pos = (sigma / h).clamp(0.0, (n - 1) as f64);
        let i = ((pos.floor() as isize) - 1).clamp(0, n as isize - 4) as usize;
        let s = pos - i as f64;
        let f = &t_nodes[i..i + 4];
        let l0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
        let l1 = s * (s - 2.0) * (s - 3.0) / 2.0;
        let l2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
        let l3 = s * (s - 1.0) * (s - 2.0) / 6.0;
        f[0] * l0 + f[1] * l1 + f[2] * l2 + f[3] * l3
    }

    /// Minimum of `a` over `[lo, hi]` on a fine scan.
    pub fn a_min_on(&self, lo: f64, hi: f64) -> f64 {
        let n = 512;
        (0..=n)
            .map(|i| self.a(lo + (hi - lo) * i as f64 / n as f64))
            .fold(f64::INFINITY, f64::min)
    }

    fn validate(&self) -> Result<()> {
        if self.grid_size < 64 {
            return Err(QciError::config(format!(
                "profile grid_size must be ≥ 64, got {}",
                self.grid_size
            )));
        }
        if !(self.length > 0.0) {
            return Err(QciError::config("profile length must be positive"));
        }
        let n = self.grid_size;
        if self.a_samples.len() != n + 1 || self.a_prime_samples.len() != n + 1 {
            return Err(QciError::config("profile sample arrays must have grid_size+1 entries"));
        }
        // Closed surface: poles at both ends.
        if self.a_samples[0].abs() > 1e-9 || self.a_samples[n].abs() > 1e-9 {
            return Err(QciError::config(
                "profile must close: a(0) = a(L) = 0 required",
            ));
        }
        for i in 1..n {
            if self.a_samples[i] <= 0.0 {
                return Err(QciError::config(format!(
                    "profile must be positive on the interior; a(σ_{i}) = {}",
                    self.a_samples[i]
                )));
            }
        }
        // a' consistent with a: centered differences to O(h²).
        let h = self.length / n as f64;
        let c_tol = 2.0 * h * h * self.a_max.max(1.0);
        for i in 1..n {
            let centered = (self.a_samples[i + 1] - self.a_samples[i - 1]) / (2.0 * h);
            if (self.a_prime_samples[i] - centered).abs() > c_tol {
                return Err(QciError::config(format!(
                    "a' inconsistent with a at σ_{i}: |{} - {}| > {:.3e}",
                    self.a_prime_samples[i], centered, c_tol
                )));
            }
        }
        Ok(())
    }
}

fn ellipse_speed(aspect: f64, t: f64) -> f64 {
    let s = t.sin();
    let c = t.cos();
    (aspect * aspect * s * s + c * c).sqrt()
}

/// Build a built-in profile. Names and parameters:
///
/// - `"sphere"` (no parameters)
/// - `"ellipsoid"` with `params[0] = aspect > 0`
/// - `"bump"` with `params[0] = amplitude ∈ (-0.5, 0.5)`
pub fn builtin_profile(name: &str, params: &[f64], grid_size: usize) -> Result<ProfileMetric> {
    match name {
        "sphere" => {
            let closure = ProfileClosure::Sphere;
            finish_builtin("sphere".into(), std::f64::consts::PI, grid_size, closure)
        }
        "bump" => {
            let amplitude = *params
                .first()
                .ok_or_else(|| QciError::config("bump profile needs an amplitude parameter"))?;
            if !(-0.5..=0.5).contains(&amplitude) || amplitude.abs() >= 0.5 {
                return Err(QciError::config(format!(
                    "bump amplitude must lie in (-0.5, 0.5), got {amplitude}"
                )));
            }
            finish_builtin(
                format!("bump({amplitude})"),
                std::f64::consts::PI,
                grid_size,
                ProfileClosure::Bump { amplitude },
            )
        }
        "ellipsoid" => {
            let aspect = *params
                .first()
                .ok_or_else(|| QciError::config("ellipsoid profile needs an aspect parameter"))?;
            if !(aspect > 0.0) {
                return Err(QciError::config(format!(
                    "ellipsoid aspect must be positive, got {aspect}"
                )));
            }
            let (length, t_nodes) = ellipsoid_inversion_table(aspect, 8192);
            finish_builtin(
                format!("ellipsoid({aspect})"),
                length,
                grid_size,
                ProfileClosure::Ellipsoid { aspect, t_nodes },
            )
        }
        other => Err(QciError::config(format!("unknown profile '{other}'"))),
    }
}

fn finish_builtin(
    name: String,
    length: f64,
    grid_size: usize,
    closure: ProfileClosure,
) -> Result<ProfileMetric> {
    let mut p = ProfileMetric {
        name,
        length,
        grid_size,
        a_samples: Vec::new(),
        a_prime_samples: Vec::new(),
        closure,
        a_max: 0.0,
    };
    let h = length / grid_size as f64;
    p.a_samples = (0..=grid_size).map(|i| p.a(i as f64 * h)).collect();
    p.a_prime_samples = (0..=grid_size).map(|i| p.a_prime(i as f64 * h)).collect();
    p.a_max = (0..=4 * grid_size)
        .map(|i| p.a(i as f64 * length / (4 * grid_size) as f64))
        .fold(0.0, f64::max);
    p.validate()?;
    Ok(p)
}

/// Uniform arc-length inversion table for the ellipsoid: `t_nodes[i]` solves
/// `σ(t) = i·L/nodes` where `σ(t) = ∫₀ᵗ √(aspect² sin²u + cos²u) du`.
fn ellipsoid_inversion_table(aspect: f64, nodes: usize) -> (f64, Vec<f64>) {
    let pi = std::f64::consts::PI;
    // Cumulative arc length on a fine t-grid.
    let fine = 4096usize;
    let dt = pi / fine as f64;
    let mut cum = Vec::with_capacity(fine + 1);
    cum.push(0.0);
    let mut acc = 0.0;
    for j in 0..fine {
        acc += gl_integrate(
            |t| ellipse_speed(aspect, t),
            j as f64 * dt,
            (j + 1) as f64 * dt,
            8,
        );
        cum.push(acc);
    }
    let length = acc;
    // Newton-solve each uniform arc-length node inside its bracketing cell
    // of the cumulative table (integer index scan keeps this robust).
    let sigma_of_t = |t: f64| -> f64 {
        let j = ((t / dt).floor() as usize).min(fine - 1);
        cum[j] + gl_integrate(|u| ellipse_speed(aspect, u), j as f64 * dt, t, 8)
    };
    let mut t_nodes = Vec::with_capacity(nodes + 1);
    let mut idx = 0usize;
    for i in 0..=nodes {
        let target = length * i as f64 / nodes as f64;
        while idx + 1 < fine && cum[idx + 1] < target {
            idx += 1;
        }
        let mut t = (idx as f64 + 0.5) * dt;
        for _ in 0..40 {
            let f = sigma_of_t(t) - target;
            let df = ellipse_speed(aspect, t);
            let step = f / df;
            t = (t - step).clamp(0.0, pi);
            if step.abs() < 1e-14 {
                break;
            }
        }
        t_nodes.push(t);
    }
    (length, t_nodes)
}

/// Load a user profile from a two-column text table `(σ, a(σ))`.
///
/// Lines starting with `#` are comments; columns are whitespace- or
/// comma-separated. σ must be strictly increasing starting at 0; the profile
/// must close (`a = 0` at both ends).
pub fn profile_from_table(text: &str, grid_size: usize) -> Result<ProfileMetric> {
    let mut sigma = Vec::new();
    let mut a = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if cols.len() != 2 {
            return Err(QciError::Parse(format!(
                "profile table line {}: expected two columns",
                lineno + 1
            )));
        }
        let s: f64 = cols[0]
            .parse()
            .map_err(|_| QciError::Parse(format!("profile table line {}: bad σ", lineno + 1)))?;
        let v: f64 = cols[1]
            .parse()
            .map_err(|_| QciError::Parse(format!("profile table line {}: bad a", lineno + 1)))?;
        sigma.push(s);
        a.push(v);
    }
    if sigma.len() < 8 {
        return Err(QciError::config("profile table needs at least 8 rows"));
    }
    if sigma[0].abs() > 1e-12 {
        return Err(QciError::config("profile table must start at σ = 0"));
    }
    for w in sigma.windows(2) {
        if w[1] <= w[0] {
            return Err(QciError::config("profile table σ must be strictly increasing"));
        }
    }
    let second_deriv = natural_spline_second_derivs(&sigma, &a);
    let length = *sigma.last().unwrap();
    let closure = ProfileClosure::Table {
        sigma,
        a,
        second_deriv,
    };
    let mut p = ProfileMetric {
        name: "table".into(),
        length,
        grid_size,
        a_samples: Vec::new(),
        a_prime_samples: Vec::new(),
        closure,
        a_max: 0.0,
    };
    let h = length / grid_size as f64;
    p.a_samples = (0..=grid_size).map(|i| p.a(i as f64 * h)).collect();
    p.a_prime_samples = (0..=grid_size).map(|i| p.a_prime(i as f64 * h)).collect();
    p.a_max = (0..=4 * grid_size)
        .map(|i| p.a(i as f64 * length / (4 * grid_size) as f64))
        .fold(0.0, f64::max);
    p.validate()?;
    Ok(p)
}

/// Natural cubic spline second derivatives (Thomas algorithm).
fn natural_spline_second_derivs(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = x[i] - x[i - 1];
        let h1 = x[i + 1] - x[i];
        let rhs = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        let diag = 2.0 * (h0 + h1) - h0 * c_prime[i - 1];
        c_prime[i] = h1 / diag;
        d_prime[i] = (rhs - h0 * d_prime[i - 1]) / diag;
    }
    for i in (1..n - 1).rev() {
        m[i] = d_prime[i] - c_prime[i] * m[i + 1];
    }
    m
}

fn spline_segment(xs: &[f64], x: f64) -> usize {
    match xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
        Ok(i) => i.min(xs.len() - 2),
        Err(i) => i.saturating_sub(1).min(xs.len() - 2),
    }
}

fn spline_eval(xs: &[f64], ys: &[f64], m: &[f64], x: f64) -> f64 {
    let i = spline_segment(xs, x);
    let h = xs[i + 1] - xs[i];
    let t = (xs[i + 1] - x) / h;
    let u = (x - xs[i]) / h;
    t * ys[i] + u * ys[i + 1]
        + ((t * t * t - t) * m[i] + (u * u * u - u) * m[i + 1]) * h * h / 6.0
}

fn spline_deriv(xs: &[f64], ys: &[f64], m: &[f64], x: f64) -> f64 {
    let i = spline_segment(xs, x);
    let h = xs[i + 1] - xs[i];
    let t = (xs[i + 1] - x) / h;
    let u = (x - xs[i]) / h;
    (ys[i + 1] - ys[i]) / h
        + ((1.0 - 3.0 * t * t) * m[i] + (3.0 * u * u - 1.0) * m[i + 1]) * h / 6.0
}
