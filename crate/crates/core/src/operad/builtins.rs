use std::collections::BTreeSet;

use super::{ColoredOperad, Combination, CompositionKey, OperationSignature, WeightedDigraph};
use crate::error::Result;

/// Label of the identity operation of a color in the built-in operads.
pub(crate) fn identity_label(color: &str) -> String {
    format!("id_{color}")
}

/// Builds an operad whose only recorded composites are the unit ones:
/// `φ∘(1,…,1) = φ` and `1∘φ = φ` for every basis operation `φ`.
pub(crate) fn unital_operad(
    name: &str,
    colors: &[String],
    ops: &[(String, OperationSignature)],
    unit_label: impl Fn(&str) -> String,
) -> Result<ColoredOperad> {
    let mut b = ColoredOperad::builder(name).colors(colors.iter().cloned());
    for col in colors {
        b = b
            .op(unit_label(col), OperationSignature::unary(col))
            .unit(col.clone(), Combination::basis(unit_label(col)));
    }
    let mut keys = BTreeSet::new();
    let all: Vec<(String, OperationSignature)> = colors
        .iter()
        .map(|c| (unit_label(c), OperationSignature::unary(c)))
        .chain(ops.iter().cloned())
        .collect();
    for (label, sig) in ops {
        b = b.op(label.clone(), sig.clone());
    }
    for (label, sig) in &all {
        let right = CompositionKey::new(label.clone(), sig.inputs.iter().map(|c| unit_label(c)));
        let left = CompositionKey::new(unit_label(&sig.output), [label.clone()]);
        for key in [right, left] {
            if keys.insert(key.clone()) {
                b = b.compose(key, Combination::basis(label.clone()));
            }
        }
    }
    b.build()
}

/// One color `*` whose only operation is the unit `id`.
pub fn trivial_operad() -> ColoredOperad {
    unital_operad("trivial", &["*".to_string()], &[], |_| "id".to_string())
        .expect("trivial operad is well formed")
}

/// Two colors `1`, `2` with units `id_1`, `id_2`, binary operations
/// `m1 ∈ P(1,1;1)`, `m2 ∈ P(2,2;2)`, `phi12 ∈ P(1,2;1)`, `phi21 ∈ P(2,1;2)`
/// and unary cross-color operations `alpha ∈ P(2;1)`, `beta ∈ P(1;2)`.
///
/// Only unit composites are recorded. Composites such as `alpha∘beta` land
/// in `P(1;1)` but are derived from an algebra rather than fixed here, since
/// fixing them would force `αβ` to be a multiple of the identity.
pub fn matrix_block_operad() -> ColoredOperad {
    let colors = ["1".to_string(), "2".to_string()];
    let ops = [
        ("m1", OperationSignature::new(["1", "1"], "1")),
        ("m2", OperationSignature::new(["2", "2"], "2")),
        ("phi12", OperationSignature::new(["1", "2"], "1")),
        ("phi21", OperationSignature::new(["2", "1"], "2")),
        ("alpha", OperationSignature::new(["2"], "1")),
        ("beta", OperationSignature::new(["1"], "2")),
    ]
    .map(|(l, s)| (l.to_string(), s));
    unital_operad("matrix_block", &colors, &ops, identity_label).expect("block operad is well formed")
}

/// One color per vertex with identity `id_v`, one unary operation per edge
/// and one binary operation `theta[e,f]` per pair of distinct edges with a
/// common target.
pub fn network_operad(graph: &WeightedDigraph) -> Result<ColoredOperad> {
    graph.check()?;
    let labels = graph.edge_labels();
    let mut ops: Vec<(String, OperationSignature)> = graph
        .edges
        .iter()
        .zip(&labels)
        .map(|(e, l)| (l.clone(), OperationSignature::new([e.from.as_str()], e.to.as_str())))
        .collect();
    for (i, j) in graph.converging_pairs() {
        let (e, f) = (&graph.edges[i], &graph.edges[j]);
        ops.push((
            WeightedDigraph::pair_label(&labels[i], &labels[j]),
            OperationSignature::new([e.from.as_str(), f.from.as_str()], e.to.as_str()),
        ));
    }
    unital_operad("network", &graph.vertices, &ops, identity_label)
}

/// Two colors with units and a single binary operation
/// `theta ∈ P(1,2;1)`.
pub fn nogo_operad() -> ColoredOperad {
    let colors = ["1".to_string(), "2".to_string()];
    let ops = [("theta".to_string(), OperationSignature::new(["1", "2"], "1"))];
    unital_operad("nogo", &colors, &ops, identity_label).expect("no-go operad is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::r;

    #[test]
    fn trivial_shape() {
        let p = trivial_operad();
        assert_eq!(p.colors(), &["*".to_string()]);
        assert_eq!(p.endo_dim("*"), 1);
        assert_eq!(p.spaces().count(), 1);
    }

    #[test]
    fn block_shape() {
        let p = matrix_block_operad();
        assert_eq!(p.endo_dim("1"), 1);
        assert_eq!(p.endo_dim("2"), 1);
        assert_eq!(p.spaces().count(), 8);
        assert!(p.spaces().all(|s| s.dimension() == 1));
        assert_eq!(p.dim(&OperationSignature::new(["1", "2"], "1")), 1);
        assert_eq!(p.dim(&OperationSignature::new(["2", "1"], "1")), 0);
    }

    #[test]
    fn network_shapes() {
        let p = network_operad(&WeightedDigraph::cycle(&[r(2.0), r(3.0)])).unwrap();
        assert_eq!(p.colors().len(), 2);
        let unary_cross = p.basis_ops().filter(|(_, s)| s.arity() == 1 && !s.is_endo()).count();
        assert_eq!(unary_cross, 2);

        let lone = network_operad(&WeightedDigraph::new(["v"])).unwrap();
        assert_eq!(lone.spaces().count(), 1);
        assert_eq!(lone.endo_dim("v"), 1);

        let tri = network_operad(&WeightedDigraph::cycle(&[r(2.0), r(3.0), r(5.0)])).unwrap();
        let sig = tri.unary_path_signature(&["1->2", "2->3", "3->1"]).unwrap();
        assert_eq!(sig, OperationSignature::unary("1"));
        assert_eq!(tri.dim(&sig), 1);
    }

    #[test]
    fn converging_edges_get_a_binary_operation() {
        let g = WeightedDigraph::new(["a", "b", "t"]).edge("a", "t", r(1.0)).edge("b", "t", r(1.0));
        let p = network_operad(&g).unwrap();
        let sig = p.signature_of("theta[a->t,b->t]").unwrap();
        assert_eq!(sig, &OperationSignature::new(["a", "b"], "t"));
    }

    #[test]
    fn graph_errors() {
        use crate::error::Error;
        assert!(matches!(network_operad(&WeightedDigraph::default()), Err(Error::EmptyGraph)));
        let looped = WeightedDigraph::new(["a"]).edge("a", "a", r(1.0));
        assert!(matches!(network_operad(&looped), Err(Error::InvalidGraph(_))));
        let dangling = WeightedDigraph::new(["a"]).edge("a", "b", r(1.0));
        assert!(matches!(network_operad(&dangling), Err(Error::InvalidGraph(_))));
    }
}
