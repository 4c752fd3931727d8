//! Symmetric tridiagonal eigensolver: Sturm-sequence bisection for
//! eigenvalues, inverse iteration with partial pivoting for eigenvectors.

/// Count eigenvalues of the symmetric tridiagonal matrix strictly less than
/// `x`, via the Sturm sequence (signs of the LDLᵀ pivots).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let mut count = 0usize;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let q_safe = if q.abs() < 1e-300 {
            if q >= 0.0 {
                1e-300
            } else {
                -1e-300
            }
        } else {
            q
        };
        q = (diag[i] - x) - off[i - 1] * off[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues `μ ≤ bound` of a symmetric tridiagonal matrix, ascending.
///
/// Bisection on the Sturm count; each eigenvalue is resolved to an absolute
/// tolerance of `1e-12 · max(1, scale)` where `scale` is the Gershgorin
/// radius of the matrix.
pub fn eigenvalues_below(diag: &[f64], off: &[f64], bound: f64) -> Vec<f64> {
    let n = diag.len();
    if n == 0 {
        return Vec::new();
    }
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let e_left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let e_right = if i < n - 1 { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - e_left - e_right);
        hi = hi.max(diag[i] + e_left + e_right);
    }
    lo -= 1.0;
    hi += 1.0;
    let hi = hi.min(bound);
    if hi <= lo {
        return Vec::new();
    }
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let tol = 1e-12 * scale;
    let k_max = sturm_count(diag, off, bound);
    let mut out = Vec::with_capacity(k_max);
    for k in 0..k_max {
        let mut a = lo;
        let mut b = hi;
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if sturm_count(diag, off, mid) <= k {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Solve `(T - shift·I) x = b` for tridiagonal `T`, Gaussian elimination with
/// partial pivoting (LAPACK `gttrf`-style, fill-in restricted to a second
/// superdiagonal). Overwrites `b` with the solution.
fn shifted_solve(diag: &[f64], off: &[f64], shift: f64, b: &mut [f64]) {
    let n = diag.len();
    let mut dl: Vec<f64> = off.to_vec(); // subdiagonal
    let mut d: Vec<f64> = diag.iter().map(|v| v - shift).collect();
    let mut du: Vec<f64> = off.to_vec(); // superdiagonal
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut pivoted = vec![false; n.saturating_sub(1)];

    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            // No row interchange.
            let d_safe = if d[i].abs() < 1e-300 {
                1e-300_f64.copysign(d[i])
            } else {
                d[i]
            };
            let fact = dl[i] / d_safe;
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            // Swap rows i and i+1.
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let tmp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = tmp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            pivoted[i] = true;
        }
    }

    // Forward substitution with recorded interchanges.
    for i in 0..n - 1 {
        if pivoted[i] {
            b.swap(i, i + 1);
        }
        b[i + 1] -= dl[i] * b[i];
    }
    // Back substitution.
    let guard = |v: f64| {
        if v.abs() < 1e-300 {
            1e-300_f64.copysign(v)
        } else {
            v
        }
    };
    b[n - 1] /= guard(d[n - 1]);
    if n >= 2 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / guard(d[n - 2]);
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / guard(d[i]);
    }
}

/// Eigenvector of a symmetric tridiagonal matrix for the eigenvalue near
/// `shift`, by inverse iteration. Returned vector has unit Euclidean norm;
/// its overall sign is fixed so the entry of largest modulus is positive.
pub fn inverse_iteration(diag: &[f64], off: &[f64], shift: f64, sweeps: usize) -> Vec<f64> {
    let n = diag.len();
    // Deterministic start vector with no accidental symmetry.
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.37 * ((i as f64 * 0.7391) % 1.0))
        .collect();
    normalize(&mut v);
    // Inch the shift off the eigenvalue so the solve stays finite.
    let eps = 1e-11 * shift.abs().max(1.0);
    for _ in 0..sweeps {
        shifted_solve(diag, off, shift + eps, &mut v);
        normalize(&mut v);
    }
    let mut imax = 0;
    for i in 1..n {
        if v[i].abs() > v[imax].abs() {
            imax = i;
        }
    }
    if v[imax] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
    v
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}
