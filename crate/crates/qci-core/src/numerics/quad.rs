//! Gauss–Legendre and adaptive Simpson quadrature.

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Computed by Newton iteration on the Legendre recurrence; accurate to
/// machine precision for the modest orders used here (`n ≤ 256`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th root (descending).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// ∫_a^b f via a single `n`-point Gauss–Legendre rule.
pub fn gl_integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize) -> f64 {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (b - a);
    let m = 0.5 * (a + b);
    let mut s = 0.0;
    for i in 0..n {
        s += w[i] * f(m + c * x[i]);
    }
    c * s
}

/// ∫_a^b f by `panels` composite panels of the `n`-point rule.
pub fn gl_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    n: usize,
    panels: usize,
) -> f64 {
    let (x, w) = gauss_legendre(n);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let pa = a + p as f64 * h;
        let c = 0.5 * h;
        let m = pa + c;
        let mut s = 0.0;
        for i in 0..n {
            s += w[i] * f(m + c * x[i]);
        }
        total += c * s;
    }
    total
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
///
/// Returns an error message when the recursion exceeds `max_depth` without
/// meeting the tolerance (non-integrable or discontinuous integrand).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64, String> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, String> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(format!(
            "adaptive Simpson failed to converge on [{a}, {b}] (residual {:.3e})",
            delta.abs()
        ));
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gl_exact_for_polynomials() {
        // 5-point rule integrates degree-9 polynomials exactly.
        let v = gl_integrate(|x| x.powi(9) + 3.0 * x.powi(4), -1.0, 1.0, 5);
        assert!((v - 6.0 / 5.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn gl_panels_oscillatory() {
        // ∫_0^π sin(40 x) sin(x) dx = -2 sin(40π)/(40²-1)·... use known value
        // ∫_0^π cos(40 x) dx = sin(40π)/40 = 0.
        let v = gl_panels(|x| (40.0 * x).cos(), 0.0, PI, 16, 32);
        assert!(v.abs() < 1e-12, "{v}");
    }

    #[test]
    fn simpson_smooth() {
        let v = adaptive_simpson(&|x: f64| x.exp(), 0.0, 1.0, 1e-12, 40).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-11);
    }

    #[test]
    fn simpson_kink() {
        let v = adaptive_simpson(&|x: f64| x.abs(), -1.0, 1.0, 1e-10, 48).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "{v}");
    }
}
