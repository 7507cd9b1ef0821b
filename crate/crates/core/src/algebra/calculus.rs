use std::collections::BTreeMap;

use super::{validate_algebra, PAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{poly_apply, ComplexNumber};

/// Polynomial calculus on an algebra: every distinguished endomorphism
/// `T_c` becomes `p(T_c)`.
///
/// Structure maps are kept as they are. Each `φ_A` is multilinear, so
/// `Σ a_{k₁}⋯a_{kₙ} φ_A(T^{k₁}x₁, …, T^{kₙ}xₙ) = φ_A(p(T)x₁, …, p(T)xₙ)`
/// and the commuting square holds with `f(A)` carrying the same `φ_A`.
///
/// Components of dimension zero need no distinguished map.
pub fn poly_calculus(a: &PAlgebra, coeffs: &[ComplexNumber]) -> Result<PAlgebra> {
    for c in a.operad().colors() {
        if a.dim(c) > 0 && a.distinguished(c).is_none() {
            return Err(Error::MissingDistinguished(c.clone()));
        }
    }
    let report = validate_algebra(a);
    if !report.is_valid() {
        return Err(Error::ValidationFailure(report.violations.len()));
    }
    let mut mapped = BTreeMap::new();
    for (c, t) in a.distinguished_maps() {
        if a.dim(c) > 0 {
            mapped.insert(c.clone(), poly_apply(t, coeffs)?);
        }
    }
    a.with_distinguished(mapped)
}
