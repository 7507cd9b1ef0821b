use super::FunctorHandle;
use crate::algebra::PAlgebra;
use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::operad::{ColoredOperad, Combination, SymmetricAction};

fn map_combination(f: &FunctorHandle, comb: &Combination, scale: crate::linalg::ComplexNumber) -> Result<Combination> {
    let terms: Vec<(&str, _)> = comb.terms().collect();
    if terms.is_empty() {
        return Ok(Combination::new());
    }
    let row = ComplexMatrix::from_fn(1, terms.len(), |_, j| terms[j].1);
    let mapped = f.map_matrix(&row)?;
    let mut out = Combination::new();
    for (j, (l, _)) in terms.iter().enumerate() {
        out.add_term(l, mapped[(0, j)] * scale);
    }
    Ok(out)
}

/// `F_*P`: the same spaces and bases, with composition coefficients
/// `F(μ) ∘ φ` and units `F(η) ∘ ε`.
///
/// Each basis operation spans a line, so the witness on a composite of
/// `m` inner operations is the scalar `φ` on `m + 1` one-dimensional
/// factors.
pub fn pushforward_operad(p: &ColoredOperad, f: &FunctorHandle) -> Result<ColoredOperad> {
    let mut composition = std::collections::BTreeMap::new();
    for (key, result) in p.composition() {
        let w = f.iterated_witness(&vec![1; key.inner.len() + 1])[(0, 0)];
        composition.insert(key.clone(), map_combination(f, result, w)?);
    }
    let mut units = std::collections::BTreeMap::new();
    for (color, u) in p.units() {
        units.insert(color.clone(), map_combination(f, u, f.unit_witness())?);
    }
    let actions = p
        .actions()
        .iter()
        .map(|a| {
            Ok(SymmetricAction {
                matrix: f.map_matrix(&a.matrix)?,
                ..a.clone()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(p.with_tables(composition, units, actions))
}

/// `F_*A` over `F_*P`: `φ'_A = F(φ_A) ∘ φ_{[φ], A_{c₁}, …, A_{cₙ}}` and
/// `T'_c = F(T_c)`.
pub fn pushforward_algebra(a: &PAlgebra, f: &FunctorHandle) -> Result<PAlgebra> {
    let operad = pushforward_operad(a.operad(), f)?;
    let mut structure = Vec::new();
    for (label, sig) in a.operad().basis_ops() {
        let mut dims = vec![1];
        dims.extend(sig.inputs.iter().map(|c| a.dim(c)));
        let w = f.iterated_witness(&dims);
        structure.push((label.to_string(), f.map_matrix(&a.structure_maps()[label])?.mul(&w)));
    }
    let distinguished = a
        .distinguished_maps()
        .iter()
        .map(|(c, t)| Ok((c.clone(), f.map_matrix(t)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = PAlgebra::new(operad, a.components().clone(), structure, distinguished)?;
    for n in a.notes() {
        out = out.with_note(n.clone());
    }
    Ok(out)
}
