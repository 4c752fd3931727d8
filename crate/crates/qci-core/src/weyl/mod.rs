//! Predicted leading terms of the pointwise and integrated Weyl laws, and
//! the actual-vs-predicted verification sweeps.

mod leading;
mod verify;

pub use leading::{
    integrated_prediction, leading_term_diagonal, leading_term_offdiag, PhaseMode,
};
pub use verify::{verify, ComparisonReport, ReportRow};
