//! Shared numerical machinery: quadrature rules, a symmetric tridiagonal
//! eigensolver, uniform-grid interpolation, log-log exponent fits, and
//! compensated summation.

pub mod bump;
pub mod fit;
pub mod interp;
pub mod kahan;
pub mod linalg;
pub mod quad;
pub mod tridiag;
