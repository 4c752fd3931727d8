//! Lattice enumeration: the joint spectrum of the flat torus is ℤⁿ.

use std::sync::Arc;

use crate::error::QciError;
use crate::geometry::SpectralRegion;
use crate::models::make_torus;
use crate::spectrum::{JointEigenpair, JointSpectrum, TIE_TOLERANCE};
use crate::Result;

/// Guard against runaway enumerations.
const MAX_CANDIDATES: f64 = 1e8;

/// Enumerate all lattice points of ℤⁿ inside the region.
///
/// Errors on boundary ties (a lattice point within 1e-9 of the region
/// boundary) and refuses candidate grids larger than 10⁸ points.
pub fn enumerate_torus(n: usize, region: &SpectralRegion) -> Result<JointSpectrum> {
    let system = make_torus(n)?;
    if region.dim() != n {
        return Err(QciError::config(format!(
            "region dimension {} ≠ torus dimension {n}",
            region.dim()
        )));
    }
    if !region.is_bounded() {
        return Err(QciError::Domain("enumerate_torus needs a bounded region".into()));
    }
    let bb = region.bounding_box();
    let ranges: Vec<(i64, i64)> = bb
        .iter()
        .map(|(lo, hi)| ((lo - 1.0).ceil() as i64, (hi + 1.0).floor() as i64))
        .collect();
    let mut candidates = 1.0f64;
    for (lo, hi) in &ranges {
        candidates *= (hi - lo + 1).max(0) as f64;
    }
    if candidates > MAX_CANDIDATES {
        return Err(QciError::MemoryBudget(format!(
            "{candidates:.3e} candidate lattice points exceeds the 1e8 budget"
        )));
    }

    let mut pairs = Vec::new();
    let mut k = vec![0i64; n];
    enumerate_rec(region, &ranges, 0, &mut k, &mut pairs)?;
    Ok(JointSpectrum {
        system,
        pairs,
        lam_max: region.inscribed_ball_radius(),
        channel_range: None,
        grid_size: 0,
        radial_x0: 0.0,
        radial_h: 0.0,
    })
}

fn enumerate_rec(
    region: &SpectralRegion,
    ranges: &[(i64, i64)],
    axis: usize,
    k: &mut Vec<i64>,
    out: &mut Vec<JointEigenpair>,
) -> Result<()> {
    if axis == ranges.len() {
        let lam: Vec<f64> = k.iter().map(|v| *v as f64).collect();
        let margin = region.margin(&lam);
        if region.tie_sensitive() && margin.abs() < TIE_TOLERANCE {
            return Err(QciError::BoundaryTie { point: lam });
        }
        if margin >= 0.0 {
            out.push(JointEigenpair {
                lam,
                quantum_numbers: k.clone(),
                radial_samples: Arc::from(Vec::new()),
                norm_cert: 0.0,
            });
        }
        return Ok(());
    }
    for v in ranges[axis].0..=ranges[axis].1 {
        k[axis] = v;
        enumerate_rec(region, ranges, axis + 1, k, out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_by_three_box() {
        // I(2, (0.6, 0.8)) = [-1.2, 1.2] × [-1.6, 1.6] → 9 points.
        let region = SpectralRegion::bx(2.0, &[0.6, 0.8]).unwrap();
        let spec = enumerate_torus(2, &region).unwrap();
        assert_eq!(spec.pairs.len(), 9);
        assert!((spec.lam_max - 1.2).abs() < 1e-12);
    }

    #[test]
    fn gauss_circle_at_ten() {
        let region = SpectralRegion::ball(2, 10.0);
        let spec = enumerate_torus(2, &region).unwrap();
        // Brute-force oracle over the candidate square.
        let mut count = 0;
        for k1 in -10i64..=10 {
            for k2 in -10i64..=10 {
                if k1 * k1 + k2 * k2 <= 100 {
                    count += 1;
                }
            }
        }
        assert_eq!(count, 317);
        assert_eq!(spec.pairs.len(), 317);
    }

    #[test]
    fn boundary_tie_is_an_error() {
        // λ|c₁| = 1 exactly hits k₁ = ±1.
        let lam = 1.0 / 0.6;
        let region = SpectralRegion::bx(lam, &[0.6, 0.8]).unwrap();
        let err = enumerate_torus(2, &region).unwrap_err();
        assert!(matches!(err, QciError::BoundaryTie { .. }), "{err}");
    }

    #[test]
    fn pairs_sorted_lexicographically() {
        let region = SpectralRegion::ball(2, 3.0);
        let spec = enumerate_torus(2, &region).unwrap();
        for w in spec.pairs.windows(2) {
            assert!(w[0].quantum_numbers < w[1].quantum_numbers);
        }
    }

    #[test]
    fn memory_budget_guard() {
        let region = SpectralRegion::ball(2, 40_000.0);
        assert!(matches!(
            enumerate_torus(2, &region),
            Err(QciError::MemoryBudget(_))
        ));
    }

    #[test]
    fn character_normalization() {
        let region = SpectralRegion::ball(2, 1.5);
        let spec = enumerate_torus(2, &region).unwrap();
        let zero = spec
            .pairs
            .iter()
            .find(|p| p.quantum_numbers == vec![0, 0])
            .unwrap();
        let v = spec.eval_eigenfunction(zero, &[0.7, 1.9]).unwrap();
        let expect = 1.0 / (2.0 * std::f64::consts::PI);
        assert!((v.re - expect).abs() < 1e-15 && v.im.abs() < 1e-15);
    }
}
