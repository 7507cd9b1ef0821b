use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, ComplexNumber};

/// How a functor acts on matrix entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMap {
    Identity,
    /// Extension of scalars along complex conjugation `ℂ → ℂ`.
    Conjugation,
}

impl ScalarMap {
    fn apply(self, z: ComplexNumber) -> ComplexNumber {
        match self {
            ScalarMap::Identity => z,
            ScalarMap::Conjugation => z.conj(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Stage {
    scalars: ScalarMap,
    /// Input entries must be real within `REAL_TOL`.
    requires_real: bool,
}

const REAL_TOL: f64 = 1e-12;

type WitnessFn = Arc<dyn Fn(usize, usize) -> ComplexMatrix + Send + Sync>;

/// A strong monoidal functor on finite-dimensional complex vector spaces
/// that keeps dimensions and acts on matrices entrywise.
///
/// `witness(dx, dy)` is the structure map `F(X) ⊗ F(Y) → F(X ⊗ Y)`,
/// `unit_witness` the scalar of `1 → F(1)`.
#[derive(Clone)]
pub struct FunctorHandle {
    name: String,
    stages: Vec<Stage>,
    witness: WitnessFn,
    unit_witness: ComplexNumber,
}

impl fmt::Debug for FunctorHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctorHandle")
            .field("name", &self.name)
            .field("stages", &self.stages)
            .field("unit_witness", &self.unit_witness)
            .finish_non_exhaustive()
    }
}

fn identity_witness() -> WitnessFn {
    Arc::new(|dx, dy| ComplexMatrix::identity(dx * dy))
}

impl FunctorHandle {
    fn plain(name: &str, stages: Vec<Stage>) -> Self {
        Self {
            name: name.to_string(),
            stages,
            witness: identity_witness(),
            unit_witness: c(1.0, 0.0),
        }
    }

    pub fn identity() -> Self {
        Self::plain("identity", Vec::new())
    }

    /// `− ⊗_ℝ ℂ` on data whose entries are real.
    pub fn complexification() -> Self {
        Self::plain(
            "complexification",
            vec![Stage {
                scalars: ScalarMap::Identity,
                requires_real: true,
            }],
        )
    }

    /// Extension of scalars along the conjugation embedding of `ℂ`.
    pub fn conjugate_embedding() -> Self {
        Self::plain(
            "conjugate",
            vec![Stage {
                scalars: ScalarMap::Conjugation,
                requires_real: false,
            }],
        )
    }

    /// Forgets nothing visible at this level: data pass through unchanged.
    pub fn forgetful() -> Self {
        Self::plain("forgetful", Vec::new())
    }

    /// Identity on data with `φ_{X,Y} = s·I` and unit witness `1/s`.
    pub fn scaled(name: impl Into<String>, s: ComplexNumber) -> Self {
        Self {
            name: name.into(),
            stages: Vec::new(),
            witness: Arc::new(move |dx, dy| ComplexMatrix::scalar_identity(dx * dy, s)),
            unit_witness: s.inv(),
        }
    }

    /// Identity on data with caller-supplied witnesses.
    pub fn with_witness(
        name: impl Into<String>,
        witness: impl Fn(usize, usize) -> ComplexMatrix + Send + Sync + 'static,
        unit_witness: ComplexNumber,
    ) -> Self {
        Self {
            name: name.into(),
            stages: Vec::new(),
            witness: Arc::new(witness),
            unit_witness,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn witness(&self, dx: usize, dy: usize) -> ComplexMatrix {
        (self.witness)(dx, dy)
    }

    pub fn unit_witness(&self) -> ComplexNumber {
        self.unit_witness
    }

    pub fn map_scalar(&self, z: ComplexNumber) -> ComplexNumber {
        self.stages.iter().fold(z, |z, s| s.scalars.apply(z))
    }

    /// `F` on a morphism. Fails with `NonRealData` when a stage needs real
    /// input and gets something else.
    pub fn map_matrix(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let mut out = m.clone();
        for s in &self.stages {
            if s.requires_real && !out.is_real(REAL_TOL) {
                let worst = out.entries().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
                return Err(Error::NonRealData {
                    functor: self.name.clone(),
                    detail: format!("imaginary part {worst:e}"),
                });
            }
            out = out.map(|z| s.scalars.apply(z));
        }
        Ok(out)
    }

    fn map_unchecked(&self, m: &ComplexMatrix) -> ComplexMatrix {
        m.map(|z| self.map_scalar(z))
    }

    /// Structure map `F(X₁) ⊗ ⋯ ⊗ F(Xₙ) → F(X₁ ⊗ ⋯ ⊗ Xₙ)` built left to
    /// right; for `n = 0` it is the unit witness.
    pub fn iterated_witness(&self, dims: &[usize]) -> ComplexMatrix {
        match dims.len() {
            0 => ComplexMatrix::diag(&[self.unit_witness]),
            1 => ComplexMatrix::identity(dims[0]),
            _ => {
                let mut w = ComplexMatrix::identity(dims[0]);
                let mut left = dims[0];
                for &d in &dims[1..] {
                    w = self.witness(left, d).mul(&w.kron(&ComplexMatrix::identity(d)));
                    left *= d;
                }
                w
            }
        }
    }

    /// `g ∘ self`, with witnesses `G(φ^F) ∘ φ^G` and `G(ε^F)·ε^G`.
    pub fn then(&self, g: &FunctorHandle) -> FunctorHandle {
        let (f1, g1) = (self.clone(), g.clone());
        let mut stages = self.stages.clone();
        stages.extend(g.stages.iter().copied());
        FunctorHandle {
            name: format!("{}∘{}", g.name, self.name),
            stages,
            witness: Arc::new(move |dx, dy| g1.map_unchecked(&f1.witness(dx, dy)).mul(&g1.witness(dx, dy))),
            unit_witness: g.map_scalar(self.unit_witness) * g.unit_witness,
        }
    }

    /// Largest deviation in the associativity and unit squares over all
    /// dimensions up to `max_dim`, and the witnesses that are singular.
    pub fn coherence(&self, max_dim: usize) -> Coherence {
        let mut deviation: f64 = 0.0;
        let mut singular = Vec::new();
        if self.unit_witness.norm() == 0.0 || !self.unit_witness.norm().is_finite() {
            singular.push((0, 0));
        }
        let eps = ComplexMatrix::diag(&[self.unit_witness]);
        for x in 1..=max_dim {
            for y in 1..=max_dim {
                let w = self.witness(x, y);
                if w.shape() != (x * y, x * y) || crate::linalg::rank(&w) < x * y {
                    singular.push((x, y));
                }
                for z in 1..=max_dim {
                    let lhs = self
                        .witness(x * y, z)
                        .mul(&w.kron(&ComplexMatrix::identity(z)));
                    let rhs = self
                        .witness(x, y * z)
                        .mul(&ComplexMatrix::identity(x).kron(&self.witness(y, z)));
                    deviation = deviation.max(lhs.distance(&rhs));
                }
            }
            let ix = ComplexMatrix::identity(x);
            let left = self.witness(1, x).mul(&eps.kron(&ix));
            let right = self.witness(x, 1).mul(&ix.kron(&eps));
            deviation = deviation.max(left.distance(&ix)).max(right.distance(&ix));
        }
        Coherence { deviation, singular }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coherence {
    pub deviation: f64,
    /// Dimension pairs whose witness is not invertible; `(0, 0)` stands for
    /// the unit witness.
    pub singular: Vec<(usize, usize)>,
}

/// Named functors available to pushforwards and the command line.
#[derive(Clone, Debug)]
pub struct FunctorRegistry {
    functors: BTreeMap<String, FunctorHandle>,
}

impl Default for FunctorRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl FunctorRegistry {
    pub fn empty() -> Self {
        Self {
            functors: BTreeMap::new(),
        }
    }

    /// `identity`, `complexification`, `conjugate` and `forgetful`.
    pub fn builtin() -> Self {
        let mut r = Self::empty();
        for f in [
            FunctorHandle::identity(),
            FunctorHandle::complexification(),
            FunctorHandle::conjugate_embedding(),
            FunctorHandle::forgetful(),
        ] {
            r.register(f);
        }
        r
    }

    pub fn register(&mut self, f: FunctorHandle) {
        self.functors.insert(f.name.clone(), f);
    }

    pub fn get(&self, name: &str) -> Result<&FunctorHandle> {
        self.functors
            .get(name)
            .ok_or_else(|| Error::UnregisteredFunctor(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.functors.keys().map(String::as_str)
    }

    /// Registers and returns `g ∘ f`.
    pub fn compose(&mut self, f: &str, g: &str) -> Result<FunctorHandle> {
        let h = self.get(f)?.then(self.get(g)?);
        self.register(h.clone());
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::r;

    #[test]
    fn builtins_are_coherent() {
        for name in ["identity", "complexification", "conjugate", "forgetful"] {
            let f = FunctorRegistry::builtin().get(name).unwrap().clone();
            let coh = f.coherence(3);
            assert_eq!(coh.deviation, 0.0, "{name}");
            assert!(coh.singular.is_empty());
        }
    }

    #[test]
    fn scaled_is_coherent_and_zero_is_not() {
        let coh = FunctorHandle::scaled("s", c(2.0, -1.0)).coherence(3);
        assert!(coh.deviation < 1e-12 && coh.singular.is_empty());
        let z = FunctorHandle::with_witness("zero", |dx, dy| ComplexMatrix::zeros(dx * dy, dx * dy), r(1.0));
        assert!(!z.coherence(2).singular.is_empty());
    }

    #[test]
    fn complexification_rejects_complex_data() {
        let f = FunctorHandle::complexification();
        let m = ComplexMatrix::diag(&[c(1.0, 1.0)]);
        assert!(matches!(f.map_matrix(&m), Err(Error::NonRealData { .. })));
        assert!(f.map_matrix(&ComplexMatrix::identity(2)).is_ok());
    }

    #[test]
    fn composites() {
        let mut reg = FunctorRegistry::builtin();
        let h = reg.compose("conjugate", "conjugate").unwrap();
        let m = ComplexMatrix::diag(&[c(1.0, 2.0)]);
        assert_eq!(h.map_matrix(&m).unwrap(), m);
        assert!(reg.get("conjugate∘conjugate").is_ok());
        assert_eq!(reg.get("nope").unwrap_err(), Error::UnregisteredFunctor("nope".into()));
        let s = FunctorHandle::scaled("a", r(2.0)).then(&FunctorHandle::scaled("b", r(3.0)));
        assert_eq!(s.witness(2, 2), ComplexMatrix::scalar_identity(4, r(6.0)));
        assert!((s.unit_witness() - r(1.0 / 6.0)).norm() < 1e-15);
    }
}
