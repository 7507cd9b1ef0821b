//! Algebras over colored operads: a vector space per color and a
//! multilinear structure map per basis operation.
//!
//! A structure map for `φ ∈ P(c₁,…,cₙ; c)` is stored as a matrix from
//! `A_{c₁} ⊗ ⋯ ⊗ A_{cₙ}` to `A_c`. Tensor bases are lexicographic with the
//! first slot varying slowest, so `e_{i₁} ⊗ ⋯ ⊗ e_{iₙ}` is column
//! `((i₁·d₂ + i₂)·d₃ + ⋯)·dₙ + iₙ`. This agrees with iterated Kronecker
//! products.

mod builtins;
mod calculus;
mod json;
mod morphism;
mod validate;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexNumber};
use crate::operad::{advance_index, Color, ColoredOperad, OperationSignature};

pub use builtins::{block_algebra, network_algebra, nogo_witness_pair, trivial_algebra};
pub use calculus::poly_calculus;
pub use json::AlgebraJson;
pub use morphism::AlgebraMorphism;
pub use validate::validate_algebra;

/// An algebra over a colored operad.
#[derive(Clone, Debug)]
pub struct PAlgebra {
    operad: Arc<ColoredOperad>,
    components: BTreeMap<Color, usize>,
    structure: BTreeMap<String, ComplexMatrix>,
    distinguished: BTreeMap<Color, ComplexMatrix>,
    notes: Vec<String>,
}

impl PartialEq for PAlgebra {
    fn eq(&self, other: &Self) -> bool {
        *self.operad == *other.operad
            && self.components == other.components
            && self.structure == other.structure
            && self.distinguished == other.distinguished
    }
}

impl PAlgebra {
    /// Assembles an algebra. Every color needs a component dimension; an
    /// operation without a structure map acts as zero. Shapes are checked
    /// here, the algebra axioms by [`validate_algebra`].
    pub fn new(
        operad: impl Into<Arc<ColoredOperad>>,
        components: impl IntoIterator<Item = (Color, usize)>,
        structure: impl IntoIterator<Item = (String, ComplexMatrix)>,
        distinguished: impl IntoIterator<Item = (Color, ComplexMatrix)>,
    ) -> Result<Self> {
        let operad = operad.into();
        let components: BTreeMap<Color, usize> = components.into_iter().collect();
        for c in components.keys() {
            if !operad.has_color(c) {
                return Err(Error::InvalidAlgebra(format!("component for unknown color `{c}`")));
            }
        }
        if let Some(c) = operad.colors().iter().find(|c| !components.contains_key(*c)) {
            return Err(Error::InvalidAlgebra(format!("color `{c}` has no component")));
        }
        let mut given: BTreeMap<String, ComplexMatrix> = structure.into_iter().collect();
        let mut full = BTreeMap::new();
        for (label, sig) in operad.basis_ops() {
            let shape = (components[&sig.output], input_dim(&components, sig));
            let m = given.remove(label).unwrap_or_else(|| ComplexMatrix::zeros(shape.0, shape.1));
            if m.shape() != shape {
                return Err(Error::InvalidAlgebra(format!(
                    "structure map of `{label}` is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    shape.0,
                    shape.1
                )));
            }
            full.insert(label.to_string(), m);
        }
        if let Some(label) = given.keys().next() {
            return Err(Error::InvalidAlgebra(format!("structure map for unknown operation `{label}`")));
        }
        let distinguished: BTreeMap<Color, ComplexMatrix> = distinguished.into_iter().collect();
        for (c, t) in &distinguished {
            let Some(&d) = components.get(c) else {
                return Err(Error::InvalidAlgebra(format!("distinguished map for unknown color `{c}`")));
            };
            if t.shape() != (d, d) {
                return Err(Error::InvalidAlgebra(format!(
                    "distinguished map of `{c}` is {}x{}, component has dimension {d}",
                    t.rows(),
                    t.cols()
                )));
            }
        }
        Ok(Self {
            operad,
            components,
            structure: full,
            distinguished,
            notes: Vec::new(),
        })
    }

    pub fn operad(&self) -> &ColoredOperad {
        &self.operad
    }

    pub fn operad_arc(&self) -> &Arc<ColoredOperad> {
        &self.operad
    }

    pub fn dim(&self, color: &str) -> usize {
        self.components.get(color).copied().unwrap_or(0)
    }

    pub fn components(&self) -> &BTreeMap<Color, usize> {
        &self.components
    }

    pub fn total_dim(&self) -> usize {
        self.components.values().sum()
    }

    /// Dimension of `A_{c₁} ⊗ ⋯ ⊗ A_{cₙ}`.
    pub fn input_dim(&self, sig: &OperationSignature) -> usize {
        input_dim(&self.components, sig)
    }

    pub fn structure(&self, label: &str) -> Option<&ComplexMatrix> {
        self.structure.get(label)
    }

    pub fn structure_maps(&self) -> &BTreeMap<String, ComplexMatrix> {
        &self.structure
    }

    pub fn distinguished(&self, color: &str) -> Option<&ComplexMatrix> {
        self.distinguished.get(color)
    }

    pub fn distinguished_maps(&self) -> &BTreeMap<Color, ComplexMatrix> {
        &self.distinguished
    }

    /// Caveats attached by constructors, such as unrealized operations.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Structure map of a linear combination of basis operations.
    pub fn structure_of(&self, comb: &crate::operad::Combination) -> Option<ComplexMatrix> {
        let mut out: Option<ComplexMatrix> = None;
        for (l, v) in comb.support() {
            let m = self.structure.get(l)?.scale(v);
            out = Some(match out {
                Some(acc) if acc.shape() == m.shape() => acc.add(&m),
                Some(_) => return None,
                None => m,
            });
        }
        out
    }

    /// Applies `φ_A` to one vector per input slot.
    pub fn apply(&self, label: &str, inputs: &[Vec<ComplexNumber>]) -> Result<Vec<ComplexNumber>> {
        let m = self
            .structure
            .get(label)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown operation `{label}`")))?;
        let mut x = vec![ComplexNumber::new(1.0, 0.0)];
        for v in inputs {
            x = x.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
        }
        if x.len() != m.cols() {
            return Err(Error::DimensionMismatch(format!(
                "`{label}` expects a tensor of dimension {}, got {}",
                m.cols(),
                x.len()
            )));
        }
        Ok(m.mul_vec(&x))
    }

    /// Offsets of each color's block in `⊕_c A_c`, in operad color order.
    pub fn offsets(&self) -> BTreeMap<Color, usize> {
        let mut off = 0;
        let mut out = BTreeMap::new();
        for c in self.operad.colors() {
            out.insert(c.clone(), off);
            off += self.dim(c);
        }
        out
    }

    /// Block operator on `⊕_c A_c`: distinguished maps (or zero) on the
    /// diagonal and the sum of unary cross-color structure maps `c → c'` in
    /// block `(c', c)`.
    pub fn assembled_operator(&self) -> ComplexMatrix {
        let n = self.total_dim();
        let off = self.offsets();
        let mut out = ComplexMatrix::zeros(n, n);
        for (c, t) in &self.distinguished {
            out.set_block(off[c], off[c], t);
        }
        for (label, sig) in self.operad.basis_ops() {
            if sig.arity() == 1 && !sig.is_endo() {
                let m = &self.structure[label];
                let (r0, c0) = (off[&sig.output], off[&sig.inputs[0]]);
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        out[(r0 + i, c0 + j)] += m[(i, j)];
                    }
                }
            }
        }
        out
    }

    /// Replaces the distinguished endomorphisms.
    pub fn with_distinguished(&self, distinguished: BTreeMap<Color, ComplexMatrix>) -> Result<Self> {
        let mut out = Self::new(
            self.operad.clone(),
            self.components.clone(),
            self.structure.clone(),
            distinguished,
        )?;
        out.notes = self.notes.clone();
        Ok(out)
    }

    /// Transports the algebra along invertible maps `g_c: A_c → B_c`:
    /// `φ_B = g_c ∘ φ_A ∘ (g_{c₁}⁻¹ ⊗ ⋯ ⊗ g_{cₙ}⁻¹)` and `T_B = g T_A g⁻¹`.
    /// Returns the new algebra and the isomorphism from `self` to it.
    pub fn conjugate(&self, g: &BTreeMap<Color, ComplexMatrix>) -> Result<(PAlgebra, AlgebraMorphism)> {
        let mut inv = BTreeMap::new();
        for c in self.operad.colors() {
            let d = self.dim(c);
            let gc = g
                .get(c)
                .cloned()
                .unwrap_or_else(|| ComplexMatrix::identity(d));
            if gc.shape() != (d, d) {
                return Err(Error::DimensionMismatch(format!("change of basis for `{c}` has the wrong shape")));
            }
            let gi = if d == 0 { gc.clone() } else { gc.inverse()? };
            inv.insert(c.clone(), (gc, gi));
        }
        let mut structure = BTreeMap::new();
        for (label, sig) in self.operad.basis_ops() {
            let right = ComplexMatrix::kron_all(sig.inputs.iter().map(|c| &inv[c].1));
            let m = inv[&sig.output].0.mul(&self.structure[label]).mul(&right);
            structure.insert(label.to_string(), m);
        }
        let distinguished = self
            .distinguished
            .iter()
            .map(|(c, t)| (c.clone(), inv[c].0.mul(t).mul(&inv[c].1)))
            .collect::<BTreeMap<_, _>>();
        let mut target = Self::new(self.operad.clone(), self.components.clone(), structure, distinguished)?;
        target.notes = self.notes.clone();
        let maps = inv.into_iter().map(|(c, (gc, _))| (c, gc)).collect();
        let f = AlgebraMorphism::new(self, &target, maps)?;
        Ok((target, f))
    }
}

pub(crate) fn input_dim(components: &BTreeMap<Color, usize>, sig: &OperationSignature) -> usize {
    sig.inputs.iter().map(|c| components.get(c).copied().unwrap_or(0)).product()
}

/// The linear map `⊗_k V_k → V_slot` sending `e_{i₁} ⊗ ⋯ ⊗ e_{iₙ}` to
/// `e_{i_slot}`.
pub fn tensor_slot_projection(dims: &[usize], slot: usize) -> ComplexMatrix {
    let total: usize = dims.iter().product();
    let mut out = ComplexMatrix::zeros(dims[slot], total);
    if total == 0 {
        return out;
    }
    let mut idx = vec![0; dims.len()];
    let mut col = 0;
    loop {
        out[(idx[slot], col)] = ComplexNumber::new(1.0, 0.0);
        col += 1;
        if !advance_index(&mut idx, |s| dims[s]) {
            break;
        }
    }
    out
}

/// The map `⊗_i V_{perm[i]} → ⊗_j V_j` that puts the factor in new slot `i`
/// back into old slot `perm[i]`; `old_dims[j] = dim V_j`.
pub fn tensor_unpermute(old_dims: &[usize], perm: &[usize]) -> ComplexMatrix {
    let new_dims: Vec<usize> = perm.iter().map(|&p| old_dims[p]).collect();
    let total: usize = old_dims.iter().product();
    let mut out = ComplexMatrix::zeros(total, total);
    if total == 0 {
        return out;
    }
    let mut idx = vec![0; perm.len()];
    let mut col = 0;
    loop {
        let mut old = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            old[p] = idx[i];
        }
        let row = old.iter().zip(old_dims).fold(0, |acc, (&k, &d)| acc * d + k);
        out[(row, col)] = ComplexNumber::new(1.0, 0.0);
        col += 1;
        if !advance_index(&mut idx, |s| new_dims[s]) {
            break;
        }
    }
    out
}
