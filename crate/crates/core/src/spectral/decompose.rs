use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::PAlgebra;
use crate::linalg::rref;
use crate::operad::Color;

/// Contribution of one interaction operation: `im(φ_A) ⊗ P(c;c)` for its
/// output color `c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossRecord {
    pub op: String,
    pub inputs: Vec<Color>,
    pub output_color: Color,
    pub rank: usize,
    pub residue_dim: usize,
    pub image_dim: usize,
    /// Tensor basis vectors whose images span `im(φ_A)`.
    pub provenance: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionTotals {
    pub local: usize,
    pub cross: usize,
    pub total: usize,
}

/// Local summands `A_c ⊗ P(c;c)` and the interaction summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralDecomposition {
    pub local: BTreeMap<Color, usize>,
    pub cross: Vec<CrossRecord>,
    pub totals: DecompositionTotals,
}

impl SpectralDecomposition {
    pub fn cross_dimension(&self) -> usize {
        self.totals.cross
    }

    pub fn total(&self) -> usize {
        self.totals.total
    }
}

fn basis_name(label: &str, dims: &[usize], mut col: usize) -> String {
    let mut idx = vec![0; dims.len()];
    for (slot, &d) in dims.iter().enumerate().rev() {
        idx[slot] = col % d;
        col /= d;
    }
    let parts: Vec<String> = idx.iter().map(|i| format!("e{i}")).collect();
    format!("{label}({})", parts.join("⊗"))
}

/// Every operation other than an endomorphism `P(c;c)` is an interaction:
/// arity 0, arity at least 2, or unary between distinct colors.
pub fn decompose(a: &PAlgebra) -> SpectralDecomposition {
    let p = a.operad();
    let local: BTreeMap<Color, usize> = p
        .colors()
        .iter()
        .map(|c| (c.clone(), a.dim(c) * p.endo_dim(c)))
        .collect();
    let mut cross = Vec::new();
    for (label, sig) in p.basis_ops() {
        if !sig.is_interaction() {
            continue;
        }
        let m = &a.structure_maps()[label];
        let pivots = if m.is_empty() { Vec::new() } else { rref(m).pivots };
        let residue_dim = p.endo_dim(&sig.output);
        let dims: Vec<usize> = sig.inputs.iter().map(|c| a.dim(c)).collect();
        cross.push(CrossRecord {
            op: label.to_string(),
            inputs: sig.inputs.clone(),
            output_color: sig.output.clone(),
            rank: pivots.len(),
            residue_dim,
            image_dim: pivots.len() * residue_dim,
            provenance: pivots.iter().map(|&j| basis_name(label, &dims, j)).collect(),
        });
    }
    let l: usize = local.values().sum();
    let x: usize = cross.iter().map(|r| r.image_dim).sum();
    SpectralDecomposition {
        local,
        cross,
        totals: DecompositionTotals {
            local: l,
            cross: x,
            total: l + x,
        },
    }
}
