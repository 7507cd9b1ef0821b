use super::{tensor_unpermute, PAlgebra};
use crate::linalg::ComplexMatrix;
use crate::operad::Combination;
use crate::report::{Axiom, ValidationReport};

const TOL: f64 = 1e-10;

fn rel_tol(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    TOL * a.frobenius_norm().max(b.frobenius_norm()).max(1.0)
}

/// Checks that units act as identities, that structure maps respect every
/// recorded composite and every supplied symmetric action.
pub fn validate_algebra(a: &PAlgebra) -> ValidationReport {
    let mut report = ValidationReport::new();
    let p = a.operad();

    for color in p.colors() {
        let Some(u) = p.unit(color) else { continue };
        report.instances_checked += 1;
        let id = ComplexMatrix::identity(a.dim(color));
        match a.structure_of(u) {
            Some(m) if m.shape() == id.shape() => {
                let d = m.distance(&id);
                if d > rel_tol(&m, &id) {
                    report.push(Axiom::LeftUnit, format!("unit of {color} acts as a non-identity map"), d);
                }
            }
            Some(_) | None if u.is_zero() => {
                if a.dim(color) > 0 {
                    report.push(Axiom::LeftUnit, format!("unit of {color} is zero"), 1.0);
                }
            }
            _ => report.push(Axiom::Shape, format!("unit of {color} has no usable structure map"), f64::INFINITY),
        }
    }

    for (key, result) in p.composition() {
        let Ok(sig) = crate::operad::composite_signature(p, key) else {
            continue;
        };
        report.instances_checked += 1;
        let inner: Vec<&ComplexMatrix> = key.inner.iter().map(|l| &a.structure_maps()[l]).collect();
        let rhs = a.structure_maps()[&key.outer].mul(&ComplexMatrix::kron_all(inner.iter().copied()));
        let lhs = if result.is_zero() {
            ComplexMatrix::zeros(a.dim(&sig.output), a.input_dim(&sig))
        } else {
            match a.structure_of(result) {
                Some(m) => m,
                None => {
                    report.push(Axiom::Shape, format!("{key}: result has no structure map"), f64::INFINITY);
                    continue;
                }
            }
        };
        if lhs.shape() != rhs.shape() {
            report.push(Axiom::Shape, format!("{key}: shapes {:?} vs {:?}", lhs.shape(), rhs.shape()), f64::INFINITY);
            continue;
        }
        let d = lhs.distance(&rhs);
        if d > rel_tol(&lhs, &rhs) {
            report.push(Axiom::Compatibility, format!("({key})_A differs from the composite of structure maps"), d);
        }
    }

    for act in p.actions() {
        let target = act.signature.permuted(&act.permutation);
        let (rows, cols) = (p.dim(&target), p.dim(&act.signature));
        if act.matrix.shape() != (rows, cols) || cols == 0 {
            continue;
        }
        let (Some(src), Some(dst)) = (p.space(&act.signature), p.space(&target)) else {
            continue;
        };
        let dims: Vec<usize> = act.signature.inputs.iter().map(|c| a.dim(c)).collect();
        let s = tensor_unpermute(&dims, &act.permutation);
        for (j, label) in src.basis.iter().enumerate() {
            report.instances_checked += 1;
            let mut image = Combination::new();
            for (k, l) in dst.basis.iter().enumerate() {
                image.add_term(l, act.matrix[(k, j)]);
            }
            let lhs = a
                .structure_of(&image)
                .unwrap_or_else(|| ComplexMatrix::zeros(a.dim(&target.output), a.input_dim(&target)));
            let rhs = a.structure_maps()[label].mul(&s);
            let d = lhs.distance(&rhs);
            if d > rel_tol(&lhs, &rhs) {
                report.push(
                    Axiom::Equivariance,
                    format!("{:?}·{label} does not act as {label} with permuted inputs", act.permutation),
                    d,
                );
            }
        }
    }

    for color in p.colors() {
        if let Some(t) = a.distinguished(color) {
            if t.shape() != (a.dim(color), a.dim(color)) {
                report.push(Axiom::Shape, format!("distinguished map of {color} has the wrong shape"), f64::INFINITY);
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{block_algebra, network_algebra, nogo_witness_pair, trivial_algebra};
    use crate::linalg::{c, r};
    use crate::operad::{trivial_operad, WeightedDigraph};

    #[test]
    fn constructors_validate() {
        let alpha = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let beta = ComplexMatrix::from_real(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let a = block_algebra(&ComplexMatrix::real_diag(&[1.0, 2.0]), &alpha, &beta, &ComplexMatrix::zeros(2, 2)).unwrap();
        assert!(validate_algebra(&a).is_valid());
        assert!(validate_algebra(&trivial_algebra(3, None).unwrap()).is_valid());
        let (x, y) = nogo_witness_pair();
        assert!(validate_algebra(&x).is_valid());
        assert!(validate_algebra(&y).is_valid());
        let n = network_algebra(&WeightedDigraph::cycle(&[r(2.0), c(0.0, 3.0)])).unwrap();
        assert!(validate_algebra(&n).is_valid());
    }

    #[test]
    fn doubled_unit_is_reported() {
        let a = PAlgebra::new(
            trivial_operad(),
            [("*".to_string(), 2)],
            [("id".to_string(), ComplexMatrix::identity(2).scale(r(2.0)))],
            [],
        )
        .unwrap();
        let rep = validate_algebra(&a);
        assert!(rep.count(Axiom::LeftUnit) == 1);
        // the recorded composite id∘id = id also fails: 2·I ≠ 4·I
        assert!(rep.count(Axiom::Compatibility) == 1);
    }
}
