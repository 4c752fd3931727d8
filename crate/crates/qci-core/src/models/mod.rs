//! Model QCI systems: flat tori and surfaces of revolution.
//!
//! A surface of revolution is described in geodesic polar coordinates
//! `(σ, θ) ∈ (0, L) × [0, 2π)` by the metric `g = dσ² + a(σ)² dθ²`, with
//! profile `a > 0` on the interior and `a(0) = a(L) = 0` at the poles. The
//! commuting symbols are
//!
//! ```text
//! p₁(σ, θ, Σ, Θ) = √(Σ² + Θ²/a(σ)²),      p₂ = Θ,
//! ```
//!
//! and the flat n-torus carries `p_i(x, ξ) = ξ_i`.

mod generating;
mod profile;
mod system;

pub use generating::{generating_function, GeneratingFunction};
pub use profile::{builtin_profile, profile_from_table, ProfileClosure, ProfileMetric};
pub use system::{make_surface_of_revolution, make_torus, ModelKind, ModelSystem, SymbolSystem};
