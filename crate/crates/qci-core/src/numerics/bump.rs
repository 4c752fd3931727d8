//! The C^∞ smoothstep of exponential type used by cutoffs and mollifiers.

/// φ(u) = exp(-1/u) for u > 0, else 0. Smooth and flat at 0.
#[inline]
fn phi(u: f64) -> f64 {
    if u > 0.0 {
        (-1.0 / u).exp()
    } else {
        0.0
    }
}

/// Smooth monotone step: 0 for `u ≤ 0`, 1 for `u ≥ 1`, C^∞ with all
/// derivatives vanishing at both ends.
#[inline]
pub fn smooth01(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        let a = phi(u);
        a / (a + phi(1.0 - u))
    }
}
