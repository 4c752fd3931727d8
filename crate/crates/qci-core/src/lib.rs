//! Verification laboratory for joint spectral asymptotics of quantum
//! completely integrable (QCI) systems.
//!
//! A QCI system is a family of commuting, self-adjoint, first-order operators
//! `P̄ = (P₁, …, Pₙ)` with elliptic sum of squares. The crate computes exact
//! joint spectra of model systems (flat tori, surfaces of revolution),
//! assembles microlocalized joint spectral projector kernels, evaluates the
//! predicted leading terms of the pointwise and integrated Weyl laws, and
//! measures the remainder scaling.
//!
//! Module map:
//!
//! - [`models`] — model systems, their principal symbols, moment maps and
//!   generating functions `S(x; η)`.
//! - [`spectrum`] — joint spectra `Λ` and orthonormal joint eigenfunctions
//!   (lattice enumeration for tori, radial Sturm–Liouville solves for
//!   surfaces of revolution).
//! - [`geometry`] — moment-map analysis: fiber-rank tests, degeneracy scans,
//!   Liouville volumes of `p̄⁻¹(𝒞 ∩ B(0, λ))`.
//! - [`kernels`] — spectral-sum kernels: rough and unit-box projectors,
//!   mollified spectral measures, smoothed projectors, Tauberian gaps.
//! - [`weyl`] — predicted leading terms, actual-vs-predicted sweeps, and
//!   remainder-exponent fits.
//! - [`config`] — experiment configuration and the report formats emitted by
//!   the `qci` binary.

pub mod config;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod models;
pub mod numerics;
pub mod report;
pub mod spectrum;
pub mod weyl;

pub use error::QciError;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, QciError>;
