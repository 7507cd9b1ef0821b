use serde::Serialize;

use crate::algebra::PAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{denoise, quotient, ComplexMatrix, ComplexNumber};
use crate::operad::{Color, OperationSignature};

/// One block of a bar level: `A_c` at level 0, `φ ⊗ A_{c₁} ⊗ ⋯ ⊗ A_{cₙ}`
/// at level 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BarSummand {
    pub operation: Option<String>,
    pub signature: OperationSignature,
    pub offset: usize,
    pub dimension: usize,
}

/// A level of the bar construction with its face maps to the level below
/// (level 1) or its degeneracy to the level above (level 0).
#[derive(Clone, Debug)]
pub struct BarLevel {
    pub level: usize,
    pub summands: Vec<BarSummand>,
    pub dimension: usize,
    pub faces: Vec<ComplexMatrix>,
    pub degeneracies: Vec<ComplexMatrix>,
}

/// The reflexive coequalizer of `d₀, d₁: Bar₁ ⇉ Bar₀`.
#[derive(Clone, Debug)]
pub struct Hochschild {
    pub bar0: BarLevel,
    pub bar1: BarLevel,
    pub dimension: usize,
    pub relation_rank: usize,
    pub projection: ComplexMatrix,
    pub section: ComplexMatrix,
}

fn level0_summands(a: &PAlgebra) -> Vec<BarSummand> {
    let mut off = 0;
    a.operad()
        .colors()
        .iter()
        .map(|c| {
            let s = BarSummand {
                operation: None,
                signature: OperationSignature::unary(c),
                offset: off,
                dimension: a.dim(c),
            };
            off += s.dimension;
            s
        })
        .collect()
}

fn level1_summands(a: &PAlgebra) -> Vec<BarSummand> {
    let mut off = 0;
    a.operad()
        .basis_ops()
        .map(|(label, sig)| {
            let s = BarSummand {
                operation: Some(label.to_string()),
                signature: sig.clone(),
                offset: off,
                dimension: a.input_dim(sig),
            };
            off += s.dimension;
            s
        })
        .collect()
}

fn total(s: &[BarSummand]) -> usize {
    s.iter().map(|b| b.dimension).sum()
}

fn color_offset(level0: &[BarSummand], c: &Color) -> usize {
    level0.iter().find(|s| &s.signature.output == c).map(|s| s.offset).unwrap_or(0)
}

/// Augmentation `ε` on `P(c;c)`, normalized so that `ε(unit) = 1`.
fn augmentation(a: &PAlgebra, label: &str, color: &str) -> ComplexNumber {
    let Some(u) = a.operad().unit(color) else {
        return ComplexNumber::new(0.0, 0.0);
    };
    let norm: f64 = u.support().map(|(_, v)| v.norm_sqr()).sum();
    if norm == 0.0 {
        return ComplexNumber::new(0.0, 0.0);
    }
    u.coeff(label).conj() / norm
}

/// Levels 0 and 1 of the bar construction.
///
/// `d₀` applies the structure map. `d₁` applies the augmentation to the
/// operation, so it is nonzero only on endomorphism summands `P(c;c) ⊗ A_c`.
/// `s₀` inserts the unit.
pub fn bar_level(a: &PAlgebra, n: usize) -> Result<BarLevel> {
    let l0 = level0_summands(a);
    let l1 = level1_summands(a);
    let (n0, n1) = (total(&l0), total(&l1));
    match n {
        0 => {
            let mut s0 = ComplexMatrix::zeros(n1, n0);
            for s in &l1 {
                let label = s.operation.as_deref().unwrap_or_default();
                if !s.signature.is_endo() {
                    continue;
                }
                let c = &s.signature.output;
                if let Some(u) = a.operad().unit(c) {
                    let k = u.coeff(label);
                    if k != ComplexNumber::new(0.0, 0.0) {
                        s0.set_block(s.offset, color_offset(&l0, c), &ComplexMatrix::scalar_identity(s.dimension, k));
                    }
                }
            }
            Ok(BarLevel {
                level: 0,
                dimension: n0,
                summands: l0,
                faces: Vec::new(),
                degeneracies: vec![s0],
            })
        }
        1 => {
            let mut d0 = ComplexMatrix::zeros(n0, n1);
            let mut d1 = ComplexMatrix::zeros(n0, n1);
            for s in &l1 {
                let label = s.operation.as_deref().unwrap_or_default();
                let row = color_offset(&l0, &s.signature.output);
                d0.set_block(row, s.offset, &a.structure_maps()[label]);
                if s.signature.is_endo() {
                    let e = augmentation(a, label, &s.signature.output);
                    d1.set_block(row, s.offset, &ComplexMatrix::scalar_identity(s.dimension, e));
                }
            }
            Ok(BarLevel {
                level: 1,
                dimension: n1,
                summands: l1,
                faces: vec![d0, d1],
                degeneracies: Vec::new(),
            })
        }
        other => Err(Error::UnsupportedLevel(other)),
    }
}

/// Realization of the bar construction: `Bar₀ / im(d₀ − d₁)`.
pub fn hochschild(a: &PAlgebra) -> Result<Hochschild> {
    let bar0 = bar_level(a, 0)?;
    let bar1 = bar_level(a, 1)?;
    let scale = bar1.faces.iter().map(ComplexMatrix::max_abs).fold(1.0, f64::max);
    let rel = denoise(&bar1.faces[0].sub(&bar1.faces[1]), scale);
    let q = quotient(bar0.dimension, &rel);
    Ok(Hochschild {
        dimension: q.dimension,
        relation_rank: q.relation_rank,
        projection: q.projection,
        section: q.section,
        bar0,
        bar1,
    })
}
