//! Dense complex linear algebra: matrices, elimination, the Schur eigensolver,
//! polynomial and holomorphic functional calculus, and tolerance-aware
//! spectrum sets.

mod eigen;
mod funcalc;
mod gauss;
mod matrix;
mod spectrum;

pub use eigen::{eigenvalues, schur, Schur};
pub use funcalc::{
    classical_spectral_mapping_check, holo_apply, poly_apply, poly_compose, poly_eval,
    resolvent, resolvent_identity_check, resolvent_identity_residual, FunctionKind, HolomorphicFn, RestrictionDisk,
};
pub(crate) use gauss::annihilation_residual;
pub use gauss::{denoise, nullspace, quotient, rank, rref, Quotient, Rref, RANK_THRESHOLD};
pub use matrix::ComplexMatrix;
pub use spectrum::{MatchMode, SpectrumSet};

/// The scalar field.
pub type ComplexNumber = num_complex::Complex64;

/// Shorthand constructor for a complex scalar.
#[inline]
pub fn c(re: f64, im: f64) -> ComplexNumber {
    ComplexNumber::new(re, im)
}

/// Shorthand for a real scalar.
#[inline]
pub fn r(re: f64) -> ComplexNumber {
    ComplexNumber::new(re, 0.0)
}
