//! Seeded generators for matrices, operads and algebras.
//!
//! Everything here is driven by a caller-supplied [`Rng`], so a fixed seed
//! reproduces the same objects on every platform.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{block_algebra, network_algebra, trivial_algebra, PAlgebra};
use crate::error::Result;
use crate::linalg::{c, ComplexMatrix, ComplexNumber};
use crate::operad::{ColoredOperad, Combination, CompositionKey, OperationSignature, PairWeight, WeightedDigraph};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the square `[-1, 1] × [-1, 1]`.
pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> ComplexNumber {
    c(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex(rng))
}

/// `I + E` with every row of `E` of 1-norm below 0.85, so the result is
/// strictly diagonally dominant and well conditioned.
pub fn invertible<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let e = matrix(rng, n, n).scale(c(0.6 / n.max(1) as f64, 0.0));
    ComplexMatrix::identity(n).add(&e)
}

/// `S·D·S⁻¹` with eigenvalues drawn from the square of half-width 2.
/// Returns the matrix and its eigenvalues.
pub fn diagonalizable<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (ComplexMatrix, Vec<ComplexNumber>) {
    let eig: Vec<ComplexNumber> = (0..n).map(|_| complex(rng) * 2.0).collect();
    let s = invertible(rng, n);
    let m = s
        .mul(&ComplexMatrix::diag(&eig))
        .mul(&s.inverse().expect("diagonally dominant"));
    (m, eig)
}

/// Coefficients, constant term first, of a polynomial of degree at most
/// `max_degree`.
pub fn polynomial<R: Rng + ?Sized>(rng: &mut R, max_degree: usize) -> Vec<ComplexNumber> {
    let deg = rng.gen_range(0..=max_degree);
    (0..=deg).map(|_| complex(rng)).collect()
}

/// A point at distance at least `gap` from every value in `avoid`.
pub fn point_off<R: Rng + ?Sized>(rng: &mut R, avoid: &[ComplexNumber], radius: f64, gap: f64) -> ComplexNumber {
    loop {
        let z = complex(rng) * radius;
        if avoid.iter().all(|w| (z - w).norm() >= gap) {
            return z;
        }
    }
}

/// Trivial-operad algebra of dimension `1..=max_dim` with a random
/// distinguished endomorphism.
pub fn trivial<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> PAlgebra {
    let n = rng.gen_range(1..=max_dim.max(1));
    trivial_algebra(n, Some(matrix(rng, n, n))).expect("shapes agree")
}

pub fn block<R: Rng + ?Sized>(rng: &mut R, max_dim: usize) -> PAlgebra {
    let n1 = rng.gen_range(1..=max_dim.max(1));
    let n2 = rng.gen_range(1..=max_dim.max(1));
    block_algebra(
        &matrix(rng, n1, n1),
        &matrix(rng, n1, n2),
        &matrix(rng, n2, n1),
        &matrix(rng, n2, n2),
    )
    .expect("shapes agree")
}

/// A digraph on `1..=max_vertices` vertices without self-loops. Each
/// ordered pair carries an edge with probability 1/2; weights are random
/// and some converging pairs get a weight.
pub fn digraph<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize) -> WeightedDigraph {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut g = WeightedDigraph::new((0..n).map(|i| format!("v{i}")));
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(0.5) {
                g = g.edge(&format!("v{i}"), &format!("v{j}"), complex(rng));
            }
        }
    }
    let labels = g.edge_labels();
    for (i, j) in g.converging_pairs() {
        if rng.gen_bool(0.5) {
            g.pair_weights.push(PairWeight {
                first: labels[i].clone(),
                second: labels[j].clone(),
                weight: complex(rng),
            });
        }
    }
    g
}

pub fn network<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize) -> PAlgebra {
    network_algebra(&digraph(rng, max_vertices)).expect("generated graphs are simple")
}

/// Shape of the operads produced by [`unital_algebra`] and
/// [`partial_unit_algebra`].
#[derive(Clone, Copy, Debug)]
pub struct RandomAlgebraOptions {
    pub max_colors: usize,
    pub max_dim: usize,
    pub max_arity: usize,
    pub max_ops: usize,
    /// Probability that an operation is an extra endomorphism `P(c;c)`.
    pub endo_probability: f64,
    /// Act by zero on every operation that is not an endomorphism.
    pub zero_interaction: bool,
}

impl Default for RandomAlgebraOptions {
    fn default() -> Self {
        Self {
            max_colors: 3,
            max_dim: 3,
            max_arity: 2,
            max_ops: 5,
            endo_probability: 0.2,
            zero_interaction: false,
        }
    }
}

fn random_operad<R: Rng + ?Sized>(rng: &mut R, opts: &RandomAlgebraOptions, unital: &[bool]) -> Result<ColoredOperad> {
    let colors: Vec<String> = (0..unital.len()).map(|i| format!("c{i}")).collect();
    let mut ops: Vec<(String, OperationSignature)> = Vec::new();
    for (i, col) in colors.iter().enumerate() {
        if unital[i] {
            ops.push((format!("id_{col}"), OperationSignature::unary(col)));
        }
    }
    let n_ops = rng.gen_range(0..=opts.max_ops);
    for k in 0..n_ops {
        let out = rng.gen_range(0..colors.len());
        let sig = if unital[out] && rng.gen_bool(opts.endo_probability) {
            OperationSignature::unary(&colors[out])
        } else {
            let arity = rng.gen_range(0..=opts.max_arity);
            let inputs: Vec<&str> = (0..arity).map(|_| colors[rng.gen_range(0..colors.len())].as_str()).collect();
            OperationSignature::new(inputs, colors[out].as_str())
        };
        ops.push((format!("op{k}"), sig));
    }
    let mut b = ColoredOperad::builder("random").colors(colors.iter().cloned());
    for (i, col) in colors.iter().enumerate() {
        if unital[i] {
            b = b.unit(col.clone(), Combination::basis(format!("id_{col}")));
        }
    }
    let unit = |col: &str| unital[colors.iter().position(|x| x == col).expect("known color")];
    let mut keys = std::collections::BTreeSet::new();
    for (label, sig) in &ops {
        b = b.op(label.clone(), sig.clone());
        if sig.inputs.iter().all(|x| unit(x)) {
            keys.insert(CompositionKey::new(label.clone(), sig.inputs.iter().map(|x| format!("id_{x}"))));
        }
        if unit(&sig.output) {
            keys.insert(CompositionKey::new(format!("id_{}", sig.output), [label.clone()]));
        }
    }
    for key in keys {
        let result = Combination::basis(key.outer.clone());
        // for `1∘φ` the result is the inner operation
        let result = if key.outer.starts_with("id_") && key.inner.len() == 1 && !key.inner[0].starts_with("id_") {
            Combination::basis(key.inner[0].clone())
        } else {
            result
        };
        b = b.compose(key, result);
    }
    b.build()
}

fn random_algebra_over<R: Rng + ?Sized>(rng: &mut R, operad: ColoredOperad, opts: &RandomAlgebraOptions) -> PAlgebra {
    let operad = Arc::new(operad);
    let components: Vec<(String, usize)> = operad
        .colors()
        .iter()
        .map(|col| (col.clone(), rng.gen_range(1..=opts.max_dim.max(1))))
        .collect();
    let dim = |col: &str| components.iter().find(|(x, _)| x == col).expect("known color").1;
    let mut structure = Vec::new();
    let mut distinguished = Vec::new();
    for (label, sig) in operad.basis_ops() {
        let rows = dim(&sig.output);
        let cols: usize = sig.inputs.iter().map(|x| dim(x)).product();
        let m = if label.starts_with("id_") {
            ComplexMatrix::identity(rows)
        } else if opts.zero_interaction && !sig.is_endo() {
            ComplexMatrix::zeros(rows, cols)
        } else {
            matrix(rng, rows, cols)
        };
        structure.push((label.to_string(), m));
    }
    for (col, d) in &components {
        distinguished.push((col.clone(), matrix(rng, *d, *d)));
    }
    PAlgebra::new(operad, components, structure, distinguished).expect("shapes agree")
}

/// An algebra over a random operad in which every color has a unit and only
/// the unit composites are recorded. Such algebras satisfy the axioms for
/// any choice of the non-unit structure maps.
pub fn unital_algebra<R: Rng + ?Sized>(rng: &mut R, opts: &RandomAlgebraOptions) -> PAlgebra {
    let k = rng.gen_range(1..=opts.max_colors.max(1));
    let operad = random_operad(rng, opts, &vec![true; k]).expect("generated operads are well formed");
    random_algebra_over(rng, operad, opts)
}

/// Like [`unital_algebra`], but each color has a unit only with
/// probability 1/2 and then no endomorphisms at all.
pub fn partial_unit_algebra<R: Rng + ?Sized>(rng: &mut R, opts: &RandomAlgebraOptions) -> PAlgebra {
    let k = rng.gen_range(1..=opts.max_colors.max(1));
    let unital: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.5)).collect();
    let operad = random_operad(rng, opts, &unital).expect("generated operads are well formed");
    random_algebra_over(rng, operad, opts)
}

/// One of the constructor families or a random unital algebra.
pub fn any_algebra<R: Rng + ?Sized>(rng: &mut R) -> PAlgebra {
    match rng.gen_range(0..4) {
        0 => trivial(rng, 6),
        1 => block(rng, 3),
        2 => network(rng, 4),
        _ => unital_algebra(rng, &RandomAlgebraOptions::default()),
    }
}

/// Random invertible change of basis on every component.
pub fn conjugation<R: Rng + ?Sized>(rng: &mut R, a: &PAlgebra) -> std::collections::BTreeMap<String, ComplexMatrix> {
    a.components()
        .iter()
        .map(|(col, &d)| (col.clone(), invertible(rng, d)))
        .collect()
}
