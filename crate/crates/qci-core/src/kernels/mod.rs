//! Spectral-sum kernels: rough and unit-box projectors, mollified spectral
//! measures, smoothed projectors, and the Tauberian discrepancy.

pub mod cutoff;
pub mod mollifier;
mod sums;

pub use cutoff::CutoffSymbol;
pub use mollifier::{make_fejer, make_mollifier, Mollifier, MollifierKind};
pub use sums::{
    h_lambda, h_lambda_majorant, projector_kernel, smoothed_measure_kernel,
    smoothed_projector_kernel, tauberian_gap, unit_box_diag, HLambdaTerm, KernelValue,
    TauberianGap,
};
