use serde::Serialize;

use super::{balanced_tensor, decompose, hochschild, residue, BalancedTensor, ResidueObject, SpectralDecomposition};
use crate::algebra::{AlgebraMorphism, PAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, quotient, ComplexMatrix, Quotient};
use crate::operad::{Color, Combination};

/// One color's part of the spectrum object.
///
/// `X_c = A_c ⊕ ⊕_φ (φ ⊗ A_{in(φ)})` over interaction operations with
/// output `c`. Each interaction summand is divided by `ker φ_A`, and the
/// result is tensored with `P(c;c)` over the unit action.
#[derive(Clone, Debug)]
pub struct SpectrumBlock {
    pub color: Color,
    pub operations: Vec<String>,
    pub ambient_dimension: usize,
    pub coimage: Quotient,
    pub residue_dimension: usize,
    pub balanced: BalancedTensor,
}

impl SpectrumBlock {
    pub fn dimension(&self) -> usize {
        self.balanced.quotient_dimension
    }

    /// `X_c ⊗ P(c;c) → block`.
    pub fn projection(&self) -> ComplexMatrix {
        let r = ComplexMatrix::identity(self.residue_dimension);
        self.balanced.projection.mul(&self.coimage.projection.kron(&r))
    }

    /// A right inverse of [`Self::projection`].
    pub fn section(&self) -> ComplexMatrix {
        let r = ComplexMatrix::identity(self.residue_dimension);
        self.coimage.section.kron(&r).mul(&self.balanced.section)
    }
}

/// The spectrum object with both of its dimension counts.
#[derive(Clone, Debug)]
pub struct OperadicSpectrumObject {
    pub decomposition: SpectralDecomposition,
    pub residue: ResidueObject,
    pub hochschild_dimension: usize,
    pub hochschild_projection: ComplexMatrix,
    pub blocks: Vec<SpectrumBlock>,
    pub total_dimension: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumSummary<'a> {
    pub schema_version: u32,
    pub residue: &'a ResidueObject,
    pub hochschild_dimension: usize,
    pub blocks: Vec<BlockSummary>,
    pub decomposition: &'a SpectralDecomposition,
    pub total_dimension: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockSummary {
    pub color: Color,
    pub operations: Vec<String>,
    pub ambient_dimension: usize,
    pub coimage_dimension: usize,
    pub residue_dimension: usize,
    pub dimension: usize,
}

impl OperadicSpectrumObject {
    /// Block-diagonal projection from `⊕_c X_c ⊗ P(c;c)` onto the object.
    pub fn witness(&self) -> ComplexMatrix {
        let ps: Vec<ComplexMatrix> = self.blocks.iter().map(SpectrumBlock::projection).collect();
        ComplexMatrix::block_diag(&ps.iter().collect::<Vec<_>>())
    }

    pub fn section(&self) -> ComplexMatrix {
        let ss: Vec<ComplexMatrix> = self.blocks.iter().map(SpectrumBlock::section).collect();
        ComplexMatrix::block_diag(&ss.iter().collect::<Vec<_>>())
    }

    pub fn summary(&self) -> SpectrumSummary<'_> {
        SpectrumSummary {
            schema_version: crate::report::SCHEMA_VERSION,
            residue: &self.residue,
            hochschild_dimension: self.hochschild_dimension,
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockSummary {
                    color: b.color.clone(),
                    operations: b.operations.clone(),
                    ambient_dimension: b.ambient_dimension,
                    coimage_dimension: b.coimage.dimension,
                    residue_dimension: b.residue_dimension,
                    dimension: b.dimension(),
                })
                .collect(),
            decomposition: &self.decomposition,
            total_dimension: self.total_dimension,
        }
    }
}

fn interaction_ops(a: &PAlgebra, color: &str) -> Vec<String> {
    a.operad()
        .basis_ops()
        .filter(|(_, s)| s.is_interaction() && s.output == color)
        .map(|(l, _)| l.to_string())
        .collect()
}

/// Dimensions of the summands of `X_c`, starting with `A_c`.
fn ambient_parts(a: &PAlgebra, color: &str, ops: &[String]) -> Vec<usize> {
    let mut parts = vec![a.dim(color)];
    for l in ops {
        parts.push(a.input_dim(a.operad().signature_of(l).expect("label from basis")));
    }
    parts
}

/// Matrix of `ψ ↦ u_c ∘ ψ` on `P(c;c)`; unrecorded composites follow the
/// unit law.
fn unit_left_action(a: &PAlgebra, color: &str, unit: &Combination) -> ComplexMatrix {
    let p = a.operad();
    let sig = crate::operad::OperationSignature::unary(color);
    let basis = &p.space(&sig).expect("unit lives in P(c;c)").basis;
    let mut m = ComplexMatrix::zeros(basis.len(), basis.len());
    for (j, psi) in basis.iter().enumerate() {
        let comp = p
            .compose_combinations(unit, &[Combination::basis(psi.clone())])
            .unwrap_or_else(|| Combination::basis(psi.clone()));
        for (i, phi) in basis.iter().enumerate() {
            m[(i, j)] = comp.coeff(phi);
        }
    }
    m
}

fn block_for(a: &PAlgebra, color: &Color) -> Result<SpectrumBlock> {
    let ops = interaction_ops(a, color);
    let parts = ambient_parts(a, color, &ops);
    let ambient: usize = parts.iter().sum();

    // relations: ker φ_A inside each interaction summand
    let kernels: Vec<ComplexMatrix> = ops
        .iter()
        .map(|l| {
            let m = &a.structure_maps()[l];
            if m.cols() == 0 {
                ComplexMatrix::zeros(0, 0)
            } else if m.rows() == 0 {
                ComplexMatrix::identity(m.cols())
            } else {
                nullspace(m)
            }
        })
        .collect();
    let kdim: usize = kernels.iter().map(|k| k.cols()).sum();
    let mut gens = ComplexMatrix::zeros(ambient, kdim);
    let (mut row, mut col) = (parts[0], 0);
    for (k, &d) in kernels.iter().zip(&parts[1..]) {
        gens.set_block(row, col, k);
        row += d;
        col += k.cols();
    }
    let coimage = quotient(ambient, &gens);

    let r = a.operad().endo_dim(color);
    let (right, left) = match a.operad().unit(color) {
        Some(u) if r > 0 => {
            let ua = a.structure_of(u).unwrap_or_else(|| ComplexMatrix::zeros(parts[0], parts[0]));
            let mut rx = ComplexMatrix::identity(ambient);
            rx.set_block(0, 0, &ua);
            let rq = coimage.projection.mul(&rx).mul(&coimage.section);
            (vec![rq], vec![unit_left_action(a, color, u)])
        }
        _ => (Vec::new(), Vec::new()),
    };
    let balanced = balanced_tensor(coimage.dimension, r, &right, &left)?;
    Ok(SpectrumBlock {
        color: color.clone(),
        operations: ops,
        ambient_dimension: ambient,
        coimage,
        residue_dimension: r,
        balanced,
    })
}

/// Builds the spectrum object colorwise as a quotient and checks its
/// dimension against [`decompose`].
pub fn operadic_spectrum(a: &PAlgebra) -> Result<OperadicSpectrumObject> {
    let decomposition = decompose(a);
    let h = hochschild(a)?;
    let blocks = a
        .operad()
        .colors()
        .iter()
        .map(|c| block_for(a, c))
        .collect::<Result<Vec<_>>>()?;
    let total: usize = blocks.iter().map(SpectrumBlock::dimension).sum();
    if total != decomposition.total() {
        return Err(Error::InconsistentDecomposition {
            decomposition: decomposition.total(),
            coequalizer: total,
        });
    }
    Ok(OperadicSpectrumObject {
        residue: residue(a.operad()),
        hochschild_dimension: h.dimension,
        hochschild_projection: h.projection,
        decomposition,
        blocks,
        total_dimension: total,
    })
}

/// The map `σ_P(A) → σ_P(B)` induced by a morphism `f: A → B`.
pub fn induced_map(f: &AlgebraMorphism) -> Result<ComplexMatrix> {
    let (sa, sb) = (operadic_spectrum(f.source())?, operadic_spectrum(f.target())?);
    let mut blocks = Vec::new();
    for (ba, bb) in sa.blocks.iter().zip(&sb.blocks) {
        let mut parts = vec![f.map(&ba.color).clone()];
        for l in &ba.operations {
            let sig = f.source().operad().signature_of(l).expect("label from basis");
            parts.push(ComplexMatrix::kron_all(sig.inputs.iter().map(|c| f.map(c))));
        }
        let fx = ComplexMatrix::block_diag(&parts.iter().collect::<Vec<_>>());
        let lifted = fx.kron(&ComplexMatrix::identity(ba.residue_dimension));
        blocks.push(bb.projection().mul(&lifted).mul(&ba.section()));
    }
    Ok(ComplexMatrix::block_diag(&blocks.iter().collect::<Vec<_>>()))
}
