//! Small dense symmetric eigenvalues (cyclic Jacobi) and singular values,
//! for the n×n and n×2n gradient matrices of moment maps (n ≤ 4).

/// Eigenvalues of a small symmetric matrix, descending. `a` is row-major
/// `k×k` and is consumed as workspace.
pub fn sym_eigenvalues(mut a: Vec<f64>, k: usize) -> Vec<f64> {
    assert_eq!(a.len(), k * k);
    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..k {
            for q in (p + 1)..k {
                off += a[p * k + q] * a[p * k + q];
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..k {
            for q in (p + 1)..k {
                let apq = a[p * k + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * k + p];
                let aqq = a[q * k + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..k {
                    let aip = a[i * k + p];
                    let aiq = a[i * k + q];
                    a[i * k + p] = c * aip - s * aiq;
                    a[i * k + q] = s * aip + c * aiq;
                }
                for j in 0..k {
                    let apj = a[p * k + j];
                    let aqj = a[q * k + j];
                    a[p * k + j] = c * apj - s * aqj;
                    a[q * k + j] = s * apj + c * aqj;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..k).map(|i| a[i * k + i]).collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    eigs
}

/// Singular values (descending) of a row-major `rows×cols` matrix with
/// `rows ≤ cols`, via the eigenvalues of M·Mᵀ.
pub fn singular_values(m: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    assert_eq!(m.len(), rows * cols);
    assert!(rows <= cols);
    let mut gram = vec![0.0; rows * rows];
    for i in 0..rows {
        for j in 0..rows {
            let mut s = 0.0;
            for l in 0..cols {
                s += m[i * cols + l] * m[j * cols + l];
            }
            gram[i * rows + j] = s;
        }
    }
    sym_eigenvalues(gram, rows)
        .into_iter()
        .map(|e| e.max(0.0).sqrt())
        .collect()
}

/// Numerical rank with a relative singular-value threshold.
///
/// Singular values below `rel_tol · σ_max` (with an absolute floor) do not
/// count toward the rank.
pub fn numerical_rank(m: &[f64], rows: usize, cols: usize, rel_tol: f64, floor: f64) -> usize {
    let sv = singular_values(m, rows, cols);
    let cutoff = (rel_tol * sv.first().copied().unwrap_or(0.0)).max(floor);
    sv.iter().filter(|s| **s > cutoff).count()
}
