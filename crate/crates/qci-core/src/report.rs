//! Report emission: a structured text document plus a companion CSV data
//! table, and the multi-report summary used by `qci report`.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::QciError;
use crate::weyl::ComparisonReport;
use crate::Result;

/// Structured text document for one experiment.
pub fn render_report_text(r: &ComparisonReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "qci report v1");
    let _ = writeln!(s, "experiment: {}", r.experiment_id);
    let _ = writeln!(s, "target: {}", r.target.as_str());
    let _ = writeln!(s, "system: {}", r.system);
    let _ = writeln!(s, "seed: {}", r.seed);
    let _ = writeln!(s, "threads: {}", r.threads);
    let _ = writeln!(s, "spectrum_points: {}", r.spectrum_points);
    let _ = writeln!(s, "spectrum_lam_max: {:.6e}", r.spectrum_lam_max);
    let _ = writeln!(s, "runtime_seconds: {:.3}", r.runtime_seconds);
    let _ = writeln!(s, "target_exponent: {:.3}", r.target_exponent);
    let _ = writeln!(s, "slack: {:.3}", r.slack);
    match &r.fit {
        Some(f) => {
            let _ = writeln!(s, "fitted_exponent: {:.6}", f.beta);
            let _ = writeln!(s, "fitted_exponent_ci95: {:.6}", f.beta_half_width);
            let _ = writeln!(s, "fit_points: {}", f.used);
        }
        None => {
            let _ = writeln!(s, "fitted_exponent: none");
        }
    }
    let _ = writeln!(s, "pass: {}", if r.pass { "true" } else { "false" });
    let _ = writeln!(s, "sweep:");
    for (lam, rem) in r.lambdas.iter().zip(&r.per_lambda_remainder) {
        let _ = writeln!(s, "  lambda {lam:.9e}  remainder {rem:.9e}");
    }
    if !r.notes.is_empty() {
        let _ = writeln!(s, "notes:");
        for n in &r.notes {
            let _ = writeln!(s, "  - {n}");
        }
    }
    s
}

/// Companion data table. Deterministic for a fixed config and seed.
pub fn render_report_csv(r: &ComparisonReport) -> String {
    let mut s = String::new();
    s.push_str("lambda,actual_re,actual_im,predicted_re,predicted_im,remainder_abs,truncation_bound\n");
    for row in &r.rows {
        let _ = writeln!(
            s,
            "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
            row.lambda,
            row.actual.re,
            row.actual.im,
            row.predicted.re,
            row.predicted.im,
            row.remainder_abs,
            row.truncation_bound
        );
    }
    s
}

/// One line of the `qci report` summary.
#[derive(Debug, Clone)]
pub struct ReportSummary {
    pub experiment_id: String,
    pub target: String,
    pub system: String,
    pub fitted_exponent: Option<f64>,
    pub target_exponent: Option<f64>,
    pub pass: Option<bool>,
}

/// Parse the key-value header of a rendered report document.
pub fn parse_report_text(text: &str) -> Result<ReportSummary> {
    let mut summary = ReportSummary {
        experiment_id: String::new(),
        target: String::new(),
        system: String::new(),
        fitted_exponent: None,
        target_exponent: None,
        pass: None,
    };
    let mut header_seen = false;
    for line in text.lines() {
        if line.trim() == "qci report v1" {
            header_seen = true;
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            continue;
        };
        let value = value.trim();
        match key.trim() {
            "experiment" => summary.experiment_id = value.to_string(),
            "target" => summary.target = value.to_string(),
            "system" => summary.system = value.to_string(),
            "fitted_exponent" => summary.fitted_exponent = value.parse().ok(),
            "target_exponent" => summary.target_exponent = value.parse().ok(),
            "pass" => summary.pass = Some(value == "true"),
            _ => {}
        }
    }
    if !header_seen {
        return Err(QciError::Parse("not a qci report document".into()));
    }
    Ok(summary)
}

/// Merge several rendered reports into a one-row-per-experiment table.
pub fn merge_summaries(paths: &[impl AsRef<Path>]) -> Result<String> {
    let mut out = String::from("experiment,target,system,fitted_exponent,target_exponent,pass\n");
    for p in paths {
        let text = std::fs::read_to_string(p.as_ref())?;
        let s = parse_report_text(&text)?;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            s.experiment_id,
            s.target,
            s.system,
            s.fitted_exponent
                .map(|v| format!("{v:.6}"))
                .unwrap_or_else(|| "none".into()),
            s.target_exponent
                .map(|v| format!("{v:.3}"))
                .unwrap_or_else(|| "none".into()),
            s.pass.map(|b| b.to_string()).unwrap_or_else(|| "?".into())
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Target;
    use crate::weyl::ComparisonReport;
    use num_complex::Complex64;

    fn dummy() -> ComparisonReport {
        ComparisonReport {
            experiment_id: "t1".into(),
            target: Target::PointwiseDiag,
            system: "torus2".into(),
            lambdas: vec![25.0, 50.0],
            rows: vec![crate::weyl::ReportRow {
                lambda: 25.0,
                point: 0,
                actual: Complex64::new(1.0, 0.0),
                predicted: Complex64::new(0.9, 0.0),
                remainder_abs: 0.1,
                truncation_bound: 0.0,
            }],
            per_lambda_remainder: vec![0.1, 0.2],
            fit: None,
            target_exponent: 1.0,
            slack: 0.2,
            pass: true,
            runtime_seconds: 0.1,
            threads: 4,
            seed: 7,
            spectrum_points: 100,
            spectrum_lam_max: 26.0,
            notes: vec!["note".into()],
        }
    }

    #[test]
    fn text_roundtrip() {
        let r = dummy();
        let text = render_report_text(&r);
        let s = parse_report_text(&text).unwrap();
        assert_eq!(s.experiment_id, "t1");
        assert_eq!(s.target, "pointwise_diag");
        assert_eq!(s.pass, Some(true));
        assert!(s.fitted_exponent.is_none());
    }

    #[test]
    fn csv_has_fixed_columns() {
        let text = render_report_csv(&dummy());
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "lambda,actual_re,actual_im,predicted_re,predicted_im,remainder_abs,truncation_bound"
        );
        assert_eq!(lines.next().unwrap().split(',').count(), 7);
    }
}
