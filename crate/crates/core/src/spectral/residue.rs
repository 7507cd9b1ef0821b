use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::operad::{Color, ColoredOperad};

/// The coproduct `⊕_c P(c;c)` with its block inclusions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueObject {
    pub operad: String,
    pub summands: BTreeMap<Color, usize>,
    pub total_dimension: usize,
    pub inclusion_offsets: BTreeMap<Color, usize>,
}

impl ResidueObject {
    /// The inclusion `ι_c: P(c;c) → ⊕_c P(c;c)`.
    pub fn inclusion(&self, color: &str) -> Option<ComplexMatrix> {
        let d = *self.summands.get(color)?;
        let mut m = ComplexMatrix::zeros(self.total_dimension, d);
        m.set_block(self.inclusion_offsets[color], 0, &ComplexMatrix::identity(d));
        Some(m)
    }
}

/// Blocks are laid out in the operad's color order.
pub fn residue(p: &ColoredOperad) -> ResidueObject {
    let mut summands = BTreeMap::new();
    let mut offsets = BTreeMap::new();
    let mut off = 0;
    for c in p.colors() {
        let d = p.endo_dim(c);
        summands.insert(c.clone(), d);
        offsets.insert(c.clone(), off);
        off += d;
    }
    ResidueObject {
        operad: p.name().to_string(),
        summands,
        total_dimension: off,
        inclusion_offsets: offsets,
    }
}

/// The map `u: ⊕_c P(c;c) → R` with `u ∘ ι_c = ρ_c`. It is forced block by
/// block, so existence and uniqueness are the same computation.
///
/// A color whose endomorphism space is zero may be left out of `corrector`.
pub fn residue_universal_map(p: &ColoredOperad, corrector: &BTreeMap<Color, ComplexMatrix>) -> Result<ComplexMatrix> {
    let res = residue(p);
    if let Some(c) = corrector.keys().find(|c| !p.has_color(c)) {
        return Err(Error::DimensionMismatch(format!("corrector given for unknown color `{c}`")));
    }
    let mut rows: Option<usize> = None;
    for (c, m) in corrector {
        if m.cols() != res.summands[c] {
            return Err(Error::DimensionMismatch(format!(
                "corrector for `{c}` has {} columns, P({c};{c}) has dimension {}",
                m.cols(),
                res.summands[c]
            )));
        }
        match rows {
            Some(r) if r != m.rows() => {
                return Err(Error::DimensionMismatch(format!(
                    "corrector row counts differ ({r} vs {})",
                    m.rows()
                )))
            }
            _ => rows = Some(m.rows()),
        }
    }
    let rows = rows.unwrap_or(0);
    let mut u = ComplexMatrix::zeros(rows, res.total_dimension);
    for c in p.colors() {
        match corrector.get(c) {
            Some(m) => u.set_block(0, res.inclusion_offsets[c], m),
            None if res.summands[c] == 0 => {}
            None => return Err(Error::DimensionMismatch(format!("no corrector for color `{c}`"))),
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{matrix_block_operad, trivial_operad, OperationSignature};

    #[test]
    fn dimensions() {
        assert_eq!(residue(&trivial_operad()).total_dimension, 1);
        let r = residue(&matrix_block_operad());
        assert_eq!(r.total_dimension, 2);
        assert_eq!(r.inclusion_offsets["2"], 1);
    }

    #[test]
    fn zero_endomorphism_space() {
        let p = ColoredOperad::builder("lonely")
            .colors(["a", "b"])
            .op("f", OperationSignature::new(["a"], "b"))
            .build()
            .unwrap();
        let r = residue(&p);
        assert_eq!(r.summands["a"], 0);
        assert_eq!(r.total_dimension, 0);
    }

    #[test]
    fn universal_map() {
        let p = matrix_block_operad();
        let res = residue(&p);
        let incl: BTreeMap<_, _> = p.colors().iter().map(|c| (c.clone(), res.inclusion(c).unwrap())).collect();
        assert_eq!(residue_universal_map(&p, &incl).unwrap(), ComplexMatrix::identity(2));
        let ones: BTreeMap<_, _> = p.colors().iter().map(|c| (c.clone(), ComplexMatrix::identity(1))).collect();
        assert_eq!(residue_universal_map(&p, &ones).unwrap(), ComplexMatrix::from_real(&[&[1.0, 1.0]]));
        let mut bad = ones.clone();
        bad.insert("2".into(), ComplexMatrix::zeros(2, 1));
        assert!(matches!(residue_universal_map(&p, &bad), Err(Error::DimensionMismatch(_))));
    }
}
