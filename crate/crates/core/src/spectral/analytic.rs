use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::PAlgebra;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::linalg::{eigenvalues, ComplexMatrix, SpectrumSet};
use crate::operad::Color;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Per-color spectra of the distinguished endomorphisms.
pub fn naive_spectrum(a: &PAlgebra, tol: f64) -> Result<BTreeMap<Color, SpectrumSet>> {
    let mut out = BTreeMap::new();
    for c in a.operad().colors() {
        let s = match a.distinguished(c) {
            _ if a.dim(c) == 0 => SpectrumSet::empty(tol),
            Some(t) => eigenvalues(t, tol)?,
            None => return Err(Error::MissingDistinguished(c.clone())),
        };
        out.insert(c.clone(), s);
    }
    Ok(out)
}

/// A directed loop of unary cross-color operations and the spectrum of
/// their composite at `base_color`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopSpectrum {
    pub base_color: Color,
    /// Operations in the order they are applied.
    pub operations: Vec<String>,
    pub spectrum: SpectrumSet,
}

impl LoopSpectrum {
    pub fn composite(&self, a: &PAlgebra) -> ComplexMatrix {
        loop_composite(a, &self.operations)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticSpectrum {
    pub max_loop_length: usize,
    pub per_color: BTreeMap<Color, SpectrumSet>,
    /// Colors without a distinguished endomorphism.
    pub missing_distinguished: Vec<Color>,
    pub loops: Vec<LoopSpectrum>,
    /// Values of the pairwise distinct loop spectra.
    pub interaction: SpectrumSet,
    /// Interaction operations that no loop realizes (arity other than 1).
    pub unrealized: Vec<String>,
    pub union: SpectrumSet,
}

impl AnalyticSpectrum {
    /// Interaction values of loops based at `color`.
    pub fn interaction_at(&self, color: &str) -> SpectrumSet {
        self.loops
            .iter()
            .filter(|l| l.base_color == color)
            .fold(SpectrumSet::empty(self.interaction.tolerance()), |acc, l| acc.union(&l.spectrum))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticOptions {
    /// Defaults to twice the number of colors.
    pub max_loop_length: Option<usize>,
    pub tolerance: f64,
    pub exec: Exec,
}

impl Default for AnalyticOptions {
    fn default() -> Self {
        Self {
            max_loop_length: None,
            tolerance: DEFAULT_TOLERANCE,
            exec: Exec::default(),
        }
    }
}

pub(crate) fn loop_composite(a: &PAlgebra, ops: &[String]) -> ComplexMatrix {
    let first = a.operad().signature_of(&ops[0]).expect("loop label");
    let mut m = ComplexMatrix::identity(a.dim(&first.inputs[0]));
    for l in ops {
        m = a.structure_maps()[l].mul(&m);
    }
    m
}

/// Elementary directed cycles of nonzero unary cross-color operations, each
/// listed once, starting at its smallest color in operad order.
pub fn enumerate_loops(a: &PAlgebra, max_len: usize) -> Vec<(Color, Vec<String>)> {
    let p = a.operad();
    let n = p.colors().len();
    let mut adj: Vec<Vec<(usize, String)>> = vec![Vec::new(); n];
    for (label, sig) in p.basis_ops() {
        if sig.arity() != 1 || sig.is_endo() || a.structure_maps()[label].is_zero() {
            continue;
        }
        let (Some(i), Some(j)) = (p.color_index(&sig.inputs[0]), p.color_index(&sig.output)) else {
            continue;
        };
        if a.dim(&sig.inputs[0]) > 0 && a.dim(&sig.output) > 0 {
            adj[i].push((j, label.to_string()));
        }
    }
    let mut out = Vec::new();
    for s in 0..n {
        let mut on_path = vec![false; n];
        let mut path = Vec::new();
        dfs(s, s, &adj, max_len, &mut on_path, &mut path, &mut |ops| {
            out.push((p.colors()[s].clone(), ops.to_vec()));
        });
    }
    out
}

fn dfs(
    start: usize,
    v: usize,
    adj: &[Vec<(usize, String)>],
    max_len: usize,
    on_path: &mut [bool],
    path: &mut Vec<String>,
    emit: &mut impl FnMut(&[String]),
) {
    on_path[v] = true;
    for (w, label) in &adj[v] {
        if path.len() + 1 > max_len {
            break;
        }
        path.push(label.clone());
        if *w == start {
            emit(path);
        } else if *w > start && !on_path[*w] {
            dfs(start, *w, adj, max_len, on_path, path, emit);
        }
        path.pop();
    }
    on_path[v] = false;
}

pub fn analytic_spectrum(a: &PAlgebra, max_loop_length: usize) -> Result<AnalyticSpectrum> {
    analytic_spectrum_with(
        a,
        &AnalyticOptions {
            max_loop_length: Some(max_loop_length),
            ..Default::default()
        },
    )
}

/// Per-color spectra where distinguished maps exist, and spectra of loop
/// composites of unary cross-color operations.
pub fn analytic_spectrum_with(a: &PAlgebra, opts: &AnalyticOptions) -> Result<AnalyticSpectrum> {
    let tol = opts.tolerance;
    let max_len = opts.max_loop_length.unwrap_or(2 * a.operad().colors().len());
    if max_len < 2 {
        return Err(Error::InvalidArgument(format!("max_loop_length must be at least 2, got {max_len}")));
    }
    let mut per_color = BTreeMap::new();
    let mut missing = Vec::new();
    for c in a.operad().colors() {
        match a.distinguished(c) {
            Some(t) if a.dim(c) > 0 => {
                per_color.insert(c.clone(), eigenvalues(t, tol)?);
            }
            Some(_) => {
                per_color.insert(c.clone(), SpectrumSet::empty(tol));
            }
            None => {
                per_color.insert(c.clone(), SpectrumSet::empty(tol));
                if a.dim(c) > 0 {
                    missing.push(c.clone());
                }
            }
        }
    }

    let found = enumerate_loops(a, max_len);
    let spectra = opts
        .exec
        .map(&found, |(_, ops)| eigenvalues(&loop_composite(a, ops), tol));
    let mut loops = Vec::with_capacity(found.len());
    for ((base, ops), s) in found.into_iter().zip(spectra) {
        loops.push(LoopSpectrum {
            base_color: base,
            operations: ops,
            spectrum: s?,
        });
    }

    let mut distinct: Vec<&SpectrumSet> = Vec::new();
    for l in &loops {
        if !distinct.iter().any(|s| s.approx_eq(&l.spectrum)) {
            distinct.push(&l.spectrum);
        }
    }
    let interaction = distinct
        .iter()
        .fold(SpectrumSet::empty(tol), |acc, s| acc.union(s));

    let unrealized = a
        .operad()
        .basis_ops()
        .filter(|(_, s)| s.is_interaction() && s.arity() != 1)
        .map(|(l, _)| l.to_string())
        .collect();

    let union = per_color
        .values()
        .fold(interaction.clone(), |acc, s| acc.union(s))
        .dedup();

    Ok(AnalyticSpectrum {
        max_loop_length: max_len,
        per_color,
        missing_distinguished: missing,
        loops,
        interaction,
        unrealized,
        union,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{block_algebra, network_algebra, nogo_witness_pair};
    use crate::linalg::r;
    use crate::operad::WeightedDigraph;

    fn alpha_beta() -> PAlgebra {
        let alpha = ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let beta = ComplexMatrix::from_real(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let z = ComplexMatrix::zeros(2, 2);
        block_algebra(&z, &alpha, &beta, &z).unwrap()
    }

    #[test]
    fn block_loop() {
        let s = analytic_spectrum(&alpha_beta(), 4).unwrap();
        assert_eq!(s.loops.len(), 1);
        assert_eq!(s.loops[0].operations, vec!["beta", "alpha"]);
        assert!(s.interaction_at("1").approx_eq(&SpectrumSet::new(vec![r(0.0), r(1.0)], 1e-10)));
        assert_eq!(s.unrealized, vec!["m1", "phi12", "phi21", "m2"]);
    }

    #[test]
    fn network_two_cycle() {
        let n = network_algebra(&WeightedDigraph::cycle(&[r(2.0), r(3.0)])).unwrap();
        let s = analytic_spectrum_with(&n, &AnalyticOptions::default()).unwrap();
        assert!(s.interaction.approx_eq(&SpectrumSet::new(vec![r(6.0)], 1e-12)));
        assert_eq!(s.missing_distinguished, vec!["1", "2"]);
        assert!(naive_spectrum(&n, 1e-8).is_err());
    }

    #[test]
    fn acyclic_and_short_limit() {
        let g = WeightedDigraph::new(["a", "b", "c"]).edge("a", "b", r(1.0)).edge("b", "c", r(2.0));
        let s = analytic_spectrum(&network_algebra(&g).unwrap(), 6).unwrap();
        assert!(s.interaction.is_empty());
        let tri = network_algebra(&WeightedDigraph::cycle(&[r(2.0), r(3.0), r(5.0)])).unwrap();
        assert!(analytic_spectrum(&tri, 2).unwrap().loops.is_empty());
        assert_eq!(analytic_spectrum(&tri, 3).unwrap().interaction.values(), &[r(30.0)]);
        assert!(analytic_spectrum(&tri, 1).is_err());
    }

    #[test]
    fn sequential_matches_parallel() {
        let g = WeightedDigraph::new(["1", "2", "3"])
            .edge("1", "2", r(2.0))
            .edge("2", "1", r(3.0))
            .edge("2", "3", r(5.0))
            .edge("3", "1", r(7.0));
        let n = network_algebra(&g).unwrap();
        let par = analytic_spectrum_with(&n, &AnalyticOptions::default()).unwrap();
        let seq = analytic_spectrum_with(&n, &AnalyticOptions { exec: Exec::Sequential, ..Default::default() }).unwrap();
        assert_eq!(par, seq);
        assert_eq!(par.loops.len(), 2);
    }

    #[test]
    fn naive_nogo() {
        let (a, b) = nogo_witness_pair();
        let (na, nb) = (naive_spectrum(&a, 1e-10).unwrap(), naive_spectrum(&b, 1e-10).unwrap());
        for c in ["1", "2"] {
            assert!(na[c].approx_eq(&nb[c]));
            assert!(na[c].approx_eq(&SpectrumSet::new(vec![r(1.0), r(1.0)], 1e-10)));
        }
    }
}
