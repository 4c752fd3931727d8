//! Ordinary least squares on log–log data: remainder-exponent estimation.

/// Result of fitting `log|y| = a + β·log x`.
#[derive(Debug, Clone)]
pub struct ExponentFit {
    /// Fitted exponent (slope).
    pub beta: f64,
    pub intercept: f64,
    /// Half-width of the 95% confidence band on the slope.
    pub beta_half_width: f64,
    /// Number of (x, y) points actually used (zero y's are dropped).
    pub used: usize,
}

/// Two-sided 97.5% Student-t quantiles for df = 1..=30; 1.96 beyond.
const T_975: [f64; 30] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160,
    2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064, 2.060, 2.056,
    2.052, 2.048, 2.045, 2.042,
];

/// Fit `log|y|` against `log x`, dropping points with `|y| = 0` or
/// non-finite values. Requires at least 2 surviving points; the confidence
/// band is infinite for exactly 2.
pub fn fit_exponent(xs: &[f64], ys: &[f64]) -> Result<ExponentFit, String> {
    assert_eq!(xs.len(), ys.len());
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && y.abs() > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.abs().ln()))
        .collect();
    let n = pts.len();
    if n < 2 {
        return Err(format!("exponent fit needs ≥ 2 nonzero points, got {n}"));
    }
    let nf = n as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx <= 0.0 {
        return Err("exponent fit needs distinct x values".into());
    }
    let beta = sxy / sxx;
    let intercept = mean_y - beta * mean_x;
    let half_width = if n > 2 {
        let rss: f64 = pts
            .iter()
            .map(|p| (p.1 - intercept - beta * p.0).powi(2))
            .sum();
        let se = (rss / (nf - 2.0) / sxx).sqrt();
        let t = if n - 2 <= 30 {
            T_975[n - 3]
        } else {
            1.96
        };
        t * se
    } else {
        f64::INFINITY
    };
    Ok(ExponentFit {
        beta,
        intercept,
        beta_half_width: half_width,
        used: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_pure_power_law() {
        let xs = [25.0, 50.0, 100.0, 200.0, 400.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| x.powf(1.0)).collect();
        let fit = fit_exponent(&xs, &ys).unwrap();
        assert!((fit.beta - 1.0).abs() < 0.01, "{}", fit.beta);
        assert!(fit.beta_half_width < 1e-10);
    }

    #[test]
    fn drops_zero_remainders() {
        let xs = [10.0, 20.0, 40.0, 80.0];
        let ys = [10.0, 0.0, 40.0, 80.0];
        let fit = fit_exponent(&xs, &ys).unwrap();
        assert_eq!(fit.used, 3);
        assert!((fit.beta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn noisy_slope_has_band() {
        let xs = [10.0, 20.0, 40.0, 80.0, 160.0];
        let ys = [9.0, 22.0, 35.0, 90.0, 150.0];
        let fit = fit_exponent(&xs, &ys).unwrap();
        assert!(fit.beta > 0.8 && fit.beta < 1.2);
        assert!(fit.beta_half_width > 0.0 && fit.beta_half_width.is_finite());
    }
}
