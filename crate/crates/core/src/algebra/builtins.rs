use std::collections::BTreeMap;
use std::sync::Arc;

use super::{tensor_slot_projection, PAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexNumber};
use crate::operad::{
    matrix_block_operad, network_operad, nogo_operad, trivial_operad, ColoredOperad, WeightedDigraph,
};

/// Algebra over the trivial operad: a single space `ℂ^dim` with the unit
/// acting as the identity, optionally pointed by an endomorphism.
pub fn trivial_algebra(dim: usize, distinguished: Option<ComplexMatrix>) -> Result<PAlgebra> {
    PAlgebra::new(
        trivial_operad(),
        [("*".to_string(), dim)],
        [("id".to_string(), ComplexMatrix::identity(dim))],
        distinguished.map(|t| ("*".to_string(), t)),
    )
}

/// Algebra over the matrix-block operad with `A₁ = ℂ^{n₁}`, `A₂ = ℂ^{n₂}`.
///
/// `a12: A₂ → A₁` is the action of `alpha`, `a21: A₁ → A₂` that of `beta`,
/// and `a11`, `a22` are the distinguished endomorphisms. The binary
/// operations `phi12`, `phi21` act by projecting onto their second tensor
/// factor and then applying `alpha` or `beta`; `m1`, `m2` act as zero.
pub fn block_algebra(
    a11: &ComplexMatrix,
    a12: &ComplexMatrix,
    a21: &ComplexMatrix,
    a22: &ComplexMatrix,
) -> Result<PAlgebra> {
    let n1 = a11.rows();
    let n2 = a22.rows();
    let expect = |m: &ComplexMatrix, shape: (usize, usize), name: &str| {
        if m.shape() == shape {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{name} is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                shape.0,
                shape.1
            )))
        }
    };
    expect(a11, (n1, n1), "a11")?;
    expect(a22, (n2, n2), "a22")?;
    expect(a12, (n1, n2), "a12")?;
    expect(a21, (n2, n1), "a21")?;
    let structure = [
        ("id_1", ComplexMatrix::identity(n1)),
        ("id_2", ComplexMatrix::identity(n2)),
        ("alpha", a12.clone()),
        ("beta", a21.clone()),
        ("m1", ComplexMatrix::zeros(n1, n1 * n1)),
        ("m2", ComplexMatrix::zeros(n2, n2 * n2)),
        ("phi12", a12.mul(&tensor_slot_projection(&[n1, n2], 1))),
        ("phi21", a21.mul(&tensor_slot_projection(&[n2, n1], 1))),
    ]
    .map(|(l, m)| (l.to_string(), m));
    PAlgebra::new(
        matrix_block_operad(),
        [("1".to_string(), n1), ("2".to_string(), n2)],
        structure,
        [("1".to_string(), a11.clone()), ("2".to_string(), a22.clone())],
    )
}

/// Algebra over `network_operad(graph)` with every component `ℂ` and each
/// edge acting as multiplication by its weight.
///
/// Binary operations take their weight from `pair_weights`, defaulting to
/// zero; the result carries a note saying so.
pub fn network_algebra(graph: &WeightedDigraph) -> Result<PAlgebra> {
    let operad: Arc<ColoredOperad> = Arc::new(network_operad(graph)?);
    let scalar = |w: ComplexNumber| ComplexMatrix::diag(&[w]);
    let labels = graph.edge_labels();
    let mut structure = BTreeMap::new();
    for v in &graph.vertices {
        structure.insert(format!("id_{v}"), ComplexMatrix::identity(1));
    }
    for (e, l) in graph.edges.iter().zip(&labels) {
        structure.insert(l.clone(), scalar(e.weight));
    }
    let mut unweighted = 0;
    for (i, j) in graph.converging_pairs() {
        let w = graph
            .pair_weights
            .iter()
            .find(|pw| {
                (pw.first == labels[i] && pw.second == labels[j]) || (pw.first == labels[j] && pw.second == labels[i])
            })
            .map(|pw| pw.weight);
        if w.is_none() {
            unweighted += 1;
        }
        let label = WeightedDigraph::pair_label(&labels[i], &labels[j]);
        structure.insert(label, scalar(w.unwrap_or_default()));
    }
    let components = graph.vertices.iter().map(|v| (v.clone(), 1));
    let mut a = PAlgebra::new(operad, components, structure, [])?;
    if unweighted > 0 {
        a = a.with_note(format!(
            "{unweighted} converging-edge operation(s) have no weight and act as zero"
        ));
    }
    Ok(a)
}

/// Two algebras over the no-go operad with `A₁ = A₂ = ℂ²` and both
/// distinguished maps the identity. `theta` acts as zero on the first and as
/// `e_i ⊗ e_j ↦ e_i` on the second.
pub fn nogo_witness_pair() -> (PAlgebra, PAlgebra) {
    let operad = Arc::new(nogo_operad());
    let build = |theta: ComplexMatrix| {
        PAlgebra::new(
            operad.clone(),
            [("1".to_string(), 2), ("2".to_string(), 2)],
            [
                ("id_1".to_string(), ComplexMatrix::identity(2)),
                ("id_2".to_string(), ComplexMatrix::identity(2)),
                ("theta".to_string(), theta),
            ],
            [
                ("1".to_string(), ComplexMatrix::identity(2)),
                ("2".to_string(), ComplexMatrix::identity(2)),
            ],
        )
        .expect("witness algebras are well formed")
    };
    (
        build(ComplexMatrix::zeros(2, 4)),
        build(tensor_slot_projection(&[2, 2], 0)),
    )
}
