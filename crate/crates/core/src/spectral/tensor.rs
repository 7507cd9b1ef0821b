use crate::error::{Error, Result};
use crate::linalg::{denoise, quotient, ComplexMatrix};

/// `X ⊗_P Y`: the quotient of `X ⊗ Y` by `(x·p) ⊗ y − x ⊗ (p·y)`.
#[derive(Clone, Debug)]
pub struct BalancedTensor {
    pub ambient_dimension: usize,
    /// One relation per column.
    pub relation_generators: ComplexMatrix,
    pub quotient_dimension: usize,
    pub projection: ComplexMatrix,
    pub section: ComplexMatrix,
}

impl BalancedTensor {
    /// Largest column norm of `projection · relation_generators`.
    pub fn annihilation_residual(&self) -> f64 {
        crate::linalg::annihilation_residual(&self.projection, &self.relation_generators)
    }
}

/// `right_action[k]` is the matrix of `x ↦ x·p_k` on `X`, `left_action[k]`
/// that of `y ↦ p_k·y` on `Y`.
pub fn balanced_tensor(
    x_dim: usize,
    y_dim: usize,
    right_action: &[ComplexMatrix],
    left_action: &[ComplexMatrix],
) -> Result<BalancedTensor> {
    if right_action.len() != left_action.len() {
        return Err(Error::IndexMismatch {
            right: right_action.len(),
            left: left_action.len(),
        });
    }
    for (k, (r, l)) in right_action.iter().zip(left_action).enumerate() {
        if r.shape() != (x_dim, x_dim) || l.shape() != (y_dim, y_dim) {
            return Err(Error::DimensionMismatch(format!(
                "action {k} is {:?} on X and {:?} on Y, expected {x_dim}x{x_dim} and {y_dim}x{y_dim}",
                r.shape(),
                l.shape()
            )));
        }
    }
    let ambient = x_dim * y_dim;
    let (ix, iy) = (ComplexMatrix::identity(x_dim), ComplexMatrix::identity(y_dim));
    let mut gens = ComplexMatrix::zeros(ambient, ambient * right_action.len());
    for (k, (r, l)) in right_action.iter().zip(left_action).enumerate() {
        let block = r.kron(&iy).sub(&ix.kron(l));
        gens.set_block(0, k * ambient, &block);
    }
    // Rounding in actions that should cancel must not count as rank.
    let scale = right_action
        .iter()
        .chain(left_action)
        .map(ComplexMatrix::max_abs)
        .fold(1.0, f64::max);
    let gens = denoise(&gens, scale);
    let q = quotient(ambient, &gens);
    Ok(BalancedTensor {
        ambient_dimension: ambient,
        relation_generators: gens,
        quotient_dimension: q.dimension,
        projection: q.projection,
        section: q.section,
    })
}
