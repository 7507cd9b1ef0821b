use std::collections::BTreeMap;

use super::PAlgebra;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::operad::Color;

const TOL: f64 = 1e-10;

/// A family of linear maps `f_c: A_c → B_c` between algebras over the same
/// operad.
#[derive(Clone, Debug)]
pub struct AlgebraMorphism {
    source: PAlgebra,
    target: PAlgebra,
    maps: BTreeMap<Color, ComplexMatrix>,
}

impl AlgebraMorphism {
    /// Checks that both algebras share an operad and that every map has
    /// shape `dim B_c × dim A_c`. Intertwining is checked by [`Self::is_valid`].
    pub fn new(source: &PAlgebra, target: &PAlgebra, maps: BTreeMap<Color, ComplexMatrix>) -> Result<Self> {
        if source.operad() != target.operad() {
            return Err(Error::InvalidAlgebra("morphism between algebras over different operads".into()));
        }
        for c in source.operad().colors() {
            let shape = (target.dim(c), source.dim(c));
            match maps.get(c) {
                Some(m) if m.shape() == shape => {}
                Some(m) => {
                    return Err(Error::DimensionMismatch(format!(
                        "map for `{c}` is {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        shape.0,
                        shape.1
                    )))
                }
                None => return Err(Error::DimensionMismatch(format!("no map for color `{c}`"))),
            }
        }
        if let Some(c) = maps.keys().find(|c| !source.operad().has_color(c)) {
            return Err(Error::InvalidAlgebra(format!("map for unknown color `{c}`")));
        }
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            maps,
        })
    }

    pub fn identity(a: &PAlgebra) -> Self {
        let maps = a
            .operad()
            .colors()
            .iter()
            .map(|c| (c.clone(), ComplexMatrix::identity(a.dim(c))))
            .collect();
        Self {
            source: a.clone(),
            target: a.clone(),
            maps,
        }
    }

    pub fn source(&self) -> &PAlgebra {
        &self.source
    }

    pub fn target(&self) -> &PAlgebra {
        &self.target
    }

    pub fn map(&self, color: &str) -> &ComplexMatrix {
        &self.maps[color]
    }

    pub fn maps(&self) -> &BTreeMap<Color, ComplexMatrix> {
        &self.maps
    }

    /// Largest `‖f_c ∘ φ_A − φ_B ∘ (f_{c₁} ⊗ ⋯ ⊗ f_{cₙ})‖_F` over basis
    /// operations.
    pub fn intertwining_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (label, sig) in self.source.operad().basis_ops() {
            let lhs = self.maps[&sig.output].mul(&self.source.structure_maps()[label]);
            let right = ComplexMatrix::kron_all(sig.inputs.iter().map(|c| &self.maps[c]));
            let rhs = self.target.structure_maps()[label].mul(&right);
            let scale = lhs.frobenius_norm().max(rhs.frobenius_norm()).max(1.0);
            worst = worst.max(lhs.distance(&rhs) / scale);
        }
        worst
    }

    pub fn is_valid(&self) -> bool {
        self.intertwining_deviation() <= TOL
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if self.target != other.source {
            return Err(Error::InvalidArgument("morphisms are not composable".into()));
        }
        let maps = self
            .maps
            .iter()
            .map(|(c, f)| (c.clone(), other.maps[c].mul(f)))
            .collect();
        Ok(Self {
            source: self.source.clone(),
            target: other.target.clone(),
            maps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::block_algebra;
    use crate::linalg::{c, r};

    fn block() -> PAlgebra {
        let alpha = ComplexMatrix::from_real(&[&[0.0, 1.0], &[2.0, 0.0]]);
        let beta = ComplexMatrix::from_real(&[&[1.0, 0.0], &[1.0, 3.0]]);
        block_algebra(&ComplexMatrix::real_diag(&[1.0, 2.0]), &alpha, &beta, &ComplexMatrix::zeros(2, 2)).unwrap()
    }

    #[test]
    fn identity_is_valid() {
        assert!(AlgebraMorphism::identity(&block()).is_valid());
    }

    #[test]
    fn conjugations_compose() {
        let a = block();
        let g1: BTreeMap<_, _> = [
            ("1".to_string(), ComplexMatrix::from_rows(vec![vec![r(1.0), c(0.0, 2.0)], vec![r(0.0), r(1.0)]]).unwrap()),
            ("2".to_string(), ComplexMatrix::real_diag(&[2.0, -1.0])),
        ]
        .into();
        let (b, f) = a.conjugate(&g1).unwrap();
        assert!(f.is_valid());
        let g2: BTreeMap<_, _> = [("2".to_string(), ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 1.0]]))].into();
        let (_, h) = b.conjugate(&g2).unwrap();
        let fh = f.then(&h).unwrap();
        assert!(fh.is_valid());
        assert!(h.then(&f).is_err());
    }

    #[test]
    fn non_intertwining_map() {
        let a = block();
        let maps = [
            ("1".to_string(), ComplexMatrix::real_diag(&[1.0, 2.0])),
            ("2".to_string(), ComplexMatrix::identity(2)),
        ]
        .into();
        let f = AlgebraMorphism::new(&a, &a, maps).unwrap();
        assert!(!f.is_valid());
    }
}
