use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{advance_index, ColoredOperad, Combination, CompositionKey, OperationSignature};
use crate::exec::Exec;
use crate::linalg::ComplexMatrix;
use crate::report::{Axiom, ValidationReport};

/// Above this many associativity triples a seeded random sample is checked.
pub const MAX_ASSOCIATIVITY_TRIPLES: usize = 100_000;

#[derive(Clone, Debug)]
pub struct ValidateOptions {
    pub exec: Exec,
    pub seed: u64,
    pub max_triples: usize,
    /// Absolute coefficient tolerance, scaled by the largest coefficient
    /// involved when that exceeds one.
    pub tolerance: f64,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            exec: Exec::default(),
            seed: 0,
            max_triples: MAX_ASSOCIATIVITY_TRIPLES,
            tolerance: 1e-12,
        }
    }
}

/// Checks table well-formedness, the unit axioms, associativity on every
/// recorded composite and equivariance of the supplied symmetric actions.
pub fn validate_operad(p: &ColoredOperad) -> ValidationReport {
    validate_operad_with(p, &ValidateOptions::default())
}

pub fn validate_operad_with(p: &ColoredOperad, opts: &ValidateOptions) -> ValidationReport {
    let mut report = ValidationReport::new();
    let good_keys = check_tables(p, &mut report);
    check_units(p, opts, &mut report);
    check_associativity(p, &good_keys, opts, &mut report);
    check_actions(p, opts, &mut report);
    report
}

/// Reports malformed composition and unit entries; returns the well-formed
/// composition keys with the signature of their result.
fn check_tables(p: &ColoredOperad, report: &mut ValidationReport) -> Vec<(CompositionKey, OperationSignature)> {
    let mut good = Vec::new();
    for (key, result) in p.composition() {
        match composite_signature(p, key) {
            Ok(sig) => {
                if let Some((bad, _)) = result
                    .support()
                    .find(|(l, _)| p.signature_of(l) != Some(&sig))
                {
                    report.push(
                        Axiom::MalformedTable,
                        format!("{key}: result label `{bad}` is not a basis element of P{sig}"),
                        f64::INFINITY,
                    );
                } else {
                    good.push((key.clone(), sig));
                }
            }
            Err(msg) => report.push(Axiom::MalformedTable, format!("{key}: {msg}"), f64::INFINITY),
        }
    }
    for color in p.colors() {
        let endo = OperationSignature::unary(color);
        match (p.unit(color), p.endo_dim(color)) {
            (None, 0) => {}
            (None, _) => report.push(
                Axiom::MalformedTable,
                format!("color {color} has a nonzero P{endo} but no unit"),
                f64::INFINITY,
            ),
            (Some(u), _) => {
                if let Some((bad, _)) = u.support().find(|(l, _)| p.signature_of(l) != Some(&endo)) {
                    report.push(
                        Axiom::MalformedTable,
                        format!("unit of {color} uses `{bad}`, which is not in P{endo}"),
                        f64::INFINITY,
                    );
                }
            }
        }
    }
    good
}

/// Signature where `key` must land, or why it cannot be formed.
pub(crate) fn composite_signature(p: &ColoredOperad, key: &CompositionKey) -> Result<OperationSignature, String> {
    let outer = p
        .signature_of(&key.outer)
        .ok_or_else(|| format!("unknown operation `{}`", key.outer))?;
    if outer.arity() != key.inner.len() {
        return Err(format!(
            "`{}` has arity {} but {} inner operations were given",
            key.outer,
            outer.arity(),
            key.inner.len()
        ));
    }
    let mut inputs = Vec::new();
    for (slot, l) in key.inner.iter().enumerate() {
        let sig = p.signature_of(l).ok_or_else(|| format!("unknown operation `{l}`"))?;
        if sig.output != outer.inputs[slot] {
            return Err(format!(
                "`{l}` lands in {} but slot {slot} of `{}` expects {}",
                sig.output, key.outer, outer.inputs[slot]
            ));
        }
        inputs.extend(sig.inputs.iter().cloned());
    }
    Ok(OperationSignature {
        inputs,
        output: outer.output.clone(),
    })
}

fn scaled_tol(base: f64, a: &Combination, b: &Combination) -> f64 {
    let scale = a.terms().chain(b.terms()).map(|(_, v)| v.norm()).fold(1.0, f64::max);
    base * scale
}

fn check_units(p: &ColoredOperad, opts: &ValidateOptions, report: &mut ValidationReport) {
    let usable = |c: &str| p.unit(c).filter(|u| !u.is_zero());
    for (label, sig) in p.basis_ops() {
        let phi = Combination::basis(label);
        if sig.arity() > 0 && sig.inputs.iter().all(|c| usable(c).is_some()) {
            report.instances_checked += 1;
            let units: Vec<Combination> = sig.inputs.iter().map(|c| usable(c).unwrap().clone()).collect();
            match p.compose_combinations(&phi, &units) {
                Some(got) => {
                    let d = got.distance(&phi);
                    if d > scaled_tol(opts.tolerance, &got, &phi) {
                        report.push(Axiom::RightUnit, format!("{label}∘(1,…,1) = {got}"), d);
                    }
                }
                None => report.push(
                    Axiom::RightUnit,
                    format!("{label}∘(1,…,1) is not recorded"),
                    f64::INFINITY,
                ),
            }
        }
        if let Some(u) = usable(&sig.output) {
            report.instances_checked += 1;
            match p.compose_combinations(u, std::slice::from_ref(&phi)) {
                Some(got) => {
                    let d = got.distance(&phi);
                    if d > scaled_tol(opts.tolerance, &got, &phi) {
                        report.push(Axiom::LeftUnit, format!("1∘{label} = {got}"), d);
                    }
                }
                None => report.push(Axiom::LeftUnit, format!("1∘{label} is not recorded"), f64::INFINITY),
            }
        }
    }
}

/// One associativity instance: a recorded composite and a choice of inner
/// operations for every input of its result.
struct Triple<'a> {
    key: &'a CompositionKey,
    chi: Vec<&'a str>,
}

fn check_associativity(
    p: &ColoredOperad,
    keys: &[(CompositionKey, OperationSignature)],
    opts: &ValidateOptions,
    report: &mut ValidationReport,
) {
    // operations grouped by output color, in basis order
    let by_output = |color: &str| -> Vec<&str> {
        p.basis_ops()
            .filter(|(_, s)| s.output == color)
            .map(|(l, _)| l)
            .collect()
    };
    let candidates: Vec<Vec<Vec<&str>>> = keys
        .iter()
        .map(|(_, sig)| sig.inputs.iter().map(|c| by_output(c)).collect())
        .collect();
    let counts: Vec<usize> = candidates
        .iter()
        .map(|slots| slots.iter().map(Vec::len).fold(1usize, |a, b| a.saturating_mul(b)))
        .collect();
    let total = counts.iter().fold(0usize, |a, &b| a.saturating_add(b));

    let mut triples = Vec::new();
    if total <= opts.max_triples {
        for ((key, _), slots) in keys.iter().zip(&candidates) {
            if slots.iter().any(Vec::is_empty) {
                continue;
            }
            let mut idx = vec![0; slots.len()];
            loop {
                triples.push(Triple {
                    key,
                    chi: idx.iter().enumerate().map(|(s, &k)| slots[s][k]).collect(),
                });
                if !advance_index(&mut idx, |s| slots[s].len()) {
                    break;
                }
            }
        }
    } else {
        report.warnings.push(format!(
            "{total} associativity triples exceed the limit of {}; checked a random sample (seed {})",
            opts.max_triples, opts.seed
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let cumulative: Vec<usize> = counts
            .iter()
            .scan(0usize, |acc, &c| {
                *acc = acc.saturating_add(c);
                Some(*acc)
            })
            .collect();
        for _ in 0..opts.max_triples {
            let pick = rng.gen_range(0..total);
            let k = cumulative.partition_point(|&c| c <= pick);
            let slots = &candidates[k];
            triples.push(Triple {
                key: &keys[k].0,
                chi: slots.iter().map(|s| s[rng.gen_range(0..s.len())]).collect(),
            });
        }
    }

    let results = opts.exec.map(&triples, |t| associativity_instance(p, t, opts.tolerance));
    let mut skipped = 0;
    for r in results {
        match r {
            Instance::Ok => report.instances_checked += 1,
            Instance::Skipped => skipped += 1,
            Instance::Violated(what, d) => {
                report.instances_checked += 1;
                report.push(Axiom::Associativity, what, d);
            }
        }
    }
    if skipped > 0 {
        report.warnings.push(format!(
            "{skipped} associativity triple(s) involve composites that are not recorded and were skipped"
        ));
    }
}

enum Instance {
    Ok,
    Skipped,
    Violated(String, f64),
}

fn associativity_instance(p: &ColoredOperad, t: &Triple<'_>, tol: f64) -> Instance {
    let rho = &p.composition()[t.key];
    let chi: Vec<Combination> = t.chi.iter().map(|l| Combination::basis(*l)).collect();
    let Some(lhs) = p.compose_combinations(rho, &chi) else {
        return Instance::Skipped;
    };
    let mut inner = Vec::with_capacity(t.key.inner.len());
    let mut offset = 0;
    for psi in &t.key.inner {
        let arity = p.signature_of(psi).map_or(0, OperationSignature::arity);
        let slice = &chi[offset..offset + arity];
        offset += arity;
        let psi_c = Combination::basis(psi.clone());
        if arity == 0 {
            inner.push(psi_c);
            continue;
        }
        match p.compose_combinations(&psi_c, slice) {
            Some(x) => inner.push(x),
            None => return Instance::Skipped,
        }
    }
    let Some(rhs) = p.compose_combinations(&Combination::basis(t.key.outer.clone()), &inner) else {
        return Instance::Skipped;
    };
    let d = lhs.distance(&rhs);
    if d > scaled_tol(tol, &lhs, &rhs) {
        Instance::Violated(
            format!("({})∘({}) = {lhs} but {}∘(…) = {rhs}", t.key, t.chi.join(","), t.key.outer),
            d,
        )
    } else {
        Instance::Ok
    }
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter().all(|&p| p < seen.len() && !std::mem::replace(&mut seen[p], true))
}

fn check_actions(p: &ColoredOperad, opts: &ValidateOptions, report: &mut ValidationReport) {
    let tol = opts.tolerance.max(1e-10);
    let mut well_formed = Vec::new();
    for (i, a) in p.actions().iter().enumerate() {
        let what = format!("action {:?} on P{}", a.permutation, a.signature);
        if !is_permutation(&a.permutation) || a.permutation.len() != a.signature.arity() {
            report.push(Axiom::MalformedTable, format!("{what}: not a permutation of the inputs"), f64::INFINITY);
            continue;
        }
        let target = a.signature.permuted(&a.permutation);
        let shape = (p.dim(&target), p.dim(&a.signature));
        if shape.1 == 0 || a.matrix.shape() != shape {
            report.push(
                Axiom::MalformedTable,
                format!("{what}: matrix is {:?}, expected {shape:?}", a.matrix.shape()),
                f64::INFINITY,
            );
            continue;
        }
        report.instances_checked += 1;
        if a.permutation.iter().enumerate().all(|(k, &v)| k == v) {
            let d = a.matrix.distance(&ComplexMatrix::identity(shape.0));
            if d > tol {
                report.push(Axiom::Equivariance, format!("{what}: identity acts nontrivially"), d);
            }
        }
        well_formed.push(i);
    }
    let acts = p.actions();
    for &i in &well_formed {
        for &j in &well_formed {
            let (s, t) = (&acts[i], &acts[j]);
            if t.signature != s.signature.permuted(&s.permutation) {
                continue;
            }
            let composite: Vec<usize> = t.permutation.iter().map(|&k| s.permutation[k]).collect();
            let Some(r) = well_formed
                .iter()
                .map(|&k| &acts[k])
                .find(|r| r.signature == s.signature && r.permutation == composite)
            else {
                continue;
            };
            report.instances_checked += 1;
            let d = r.matrix.distance(&t.matrix.mul(&s.matrix));
            if d > tol {
                report.push(
                    Axiom::Equivariance,
                    format!(
                        "{:?} then {:?} on P{} disagrees with {:?}",
                        s.permutation, t.permutation, s.signature, composite
                    ),
                    d,
                );
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{matrix_block_operad, network_operad, trivial_operad, SymmetricAction, WeightedDigraph};
    use super::*;
    use crate::linalg::{c, r};

    #[test]
    fn builtins_are_valid() {
        assert!(validate_operad(&trivial_operad()).is_valid());
        let rep = validate_operad(&matrix_block_operad());
        assert!(rep.is_valid(), "{rep:?}");
        assert!(rep.instances_checked > 0);
        let g = WeightedDigraph::cycle(&[r(2.0), r(3.0), r(5.0)]);
        assert!(validate_operad(&network_operad(&g).unwrap()).is_valid());
    }

    #[test]
    fn scaled_unit_is_reported() {
        let p = ColoredOperad::builder("bad")
            .color("*")
            .op("id", OperationSignature::unary("*"))
            .unit("*", Combination::term("id", c(2.0, 0.0)))
            .compose(CompositionKey::new("id", ["id"]), Combination::basis("id"))
            .build()
            .unwrap();
        let rep = validate_operad(&p);
        assert!(rep.count(Axiom::RightUnit) + rep.count(Axiom::LeftUnit) > 0);
        assert!((rep.violations[0].discrepancy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn broken_associativity_is_reported() {
        // id∘id = 2·id breaks both units and associativity
        let p = ColoredOperad::builder("bad")
            .color("*")
            .op("id", OperationSignature::unary("*"))
            .op("f", OperationSignature::unary("*"))
            .unit("*", Combination::basis("id"))
            .compose(CompositionKey::new("id", ["id"]), Combination::basis("id"))
            .compose(CompositionKey::new("id", ["f"]), Combination::basis("f"))
            .compose(CompositionKey::new("f", ["id"]), Combination::basis("f"))
            .compose(CompositionKey::new("f", ["f"]), Combination::basis("id"))
            .build()
            .unwrap();
        assert!(validate_operad(&p).is_valid());
        let bad = ColoredOperad::builder("bad")
            .color("*")
            .op("id", OperationSignature::unary("*"))
            .op("f", OperationSignature::unary("*"))
            .op("g", OperationSignature::unary("*"))
            .unit("*", Combination::basis("id"))
            .compose(CompositionKey::new("f", ["g"]), Combination::basis("f"))
            .compose(CompositionKey::new("g", ["g"]), Combination::basis("f"))
            .compose(CompositionKey::new("f", ["f"]), Combination::basis("id"))
            .build()
            .unwrap();
        let rep = validate_operad(&bad);
        // (f∘g)∘g = f∘g = f while f∘(g∘g) = f∘f = id
        assert!(rep.count(Axiom::Associativity) > 0, "{rep:?}");
    }

    #[test]
    fn malformed_entries() {
        let p = ColoredOperad::builder("bad")
            .colors(["a", "b"])
            .op("id_a", OperationSignature::unary("a"))
            .op("f", OperationSignature::new(["a"], "b"))
            .unit("a", Combination::basis("f"))
            .compose(CompositionKey::new("f", ["f"]), Combination::basis("f"))
            .compose(CompositionKey::new("nope", ["f"]), Combination::basis("f"))
            .build()
            .unwrap();
        let rep = validate_operad(&p);
        assert!(rep.count(Axiom::MalformedTable) >= 3, "{rep:?}");
    }

    #[test]
    fn actions_are_checked() {
        let sig = OperationSignature::new(["*", "*"], "*");
        let swap = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let base = || {
            ColoredOperad::builder("sym")
                .color("*")
                .op("id", OperationSignature::unary("*"))
                .unit("*", Combination::basis("id"))
                .compose(CompositionKey::new("id", ["id"]), Combination::basis("id"))
                .space(sig.clone(), ["x", "y"])
                .compose(CompositionKey::new("x", ["id", "id"]), Combination::basis("x"))
                .compose(CompositionKey::new("y", ["id", "id"]), Combination::basis("y"))
                .compose(CompositionKey::new("id", ["x"]), Combination::basis("x"))
                .compose(CompositionKey::new("id", ["y"]), Combination::basis("y"))
        };
        let good = base()
            .action(SymmetricAction { signature: sig.clone(), permutation: vec![1, 0], matrix: swap.clone() })
            .action(SymmetricAction { signature: sig.clone(), permutation: vec![0, 1], matrix: ComplexMatrix::identity(2) })
            .build()
            .unwrap();
        assert!(validate_operad(&good).is_valid());
        // swapping twice must give the identity
        let bad = base()
            .action(SymmetricAction {
                signature: sig.clone(),
                permutation: vec![1, 0],
                matrix: ComplexMatrix::identity(2).scale(c(0.0, 1.0)),
            })
            .action(SymmetricAction { signature: sig.clone(), permutation: vec![0, 1], matrix: ComplexMatrix::identity(2) })
            .build()
            .unwrap();
        assert_eq!(validate_operad(&bad).count(Axiom::Equivariance), 1);
    }

    #[test]
    fn sampling_kicks_in() {
        let opts = ValidateOptions { max_triples: 3, ..ValidateOptions::default() };
        let rep = validate_operad_with(&matrix_block_operad(), &opts);
        assert!(rep.is_valid());
        assert!(rep.warnings.iter().any(|w| w.contains("random sample")));
    }
}
