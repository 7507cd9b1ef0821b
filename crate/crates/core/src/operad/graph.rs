use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexNumber;

/// A weighted directed edge. The label defaults to `from->to`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DigraphEdge {
    pub from: String,
    pub to: String,
    pub weight: ComplexNumber,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl DigraphEdge {
    pub fn new(from: impl Into<String>, to: impl Into<String>, weight: ComplexNumber) -> Self {
        Self {
            from: from.into(),
            to: to.into(),
            weight,
            label: None,
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn name(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| format!("{}->{}", self.from, self.to))
    }
}

/// Weight for the binary operation built from two edges sharing a target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairWeight {
    pub first: String,
    pub second: String,
    pub weight: ComplexNumber,
}

/// Weighted digraph input for the network constructors.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct WeightedDigraph {
    pub vertices: Vec<String>,
    pub edges: Vec<DigraphEdge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pair_weights: Vec<PairWeight>,
}

impl WeightedDigraph {
    pub fn new<S: Into<String>>(vertices: impl IntoIterator<Item = S>) -> Self {
        Self {
            vertices: vertices.into_iter().map(Into::into).collect(),
            edges: Vec::new(),
            pair_weights: Vec::new(),
        }
    }

    pub fn edge(mut self, from: &str, to: &str, weight: ComplexNumber) -> Self {
        self.edges.push(DigraphEdge::new(from, to, weight));
        self
    }

    /// Directed cycle `v₀ → v₁ → … → v₀` with the given weights.
    pub fn cycle(weights: &[ComplexNumber]) -> Self {
        let n = weights.len();
        let mut g = Self::new((1..=n).map(|i| i.to_string()));
        for (i, &w) in weights.iter().enumerate() {
            g = g.edge(&(i + 1).to_string(), &((i + 1) % n + 1).to_string(), w);
        }
        g
    }

    pub fn edge_labels(&self) -> Vec<String> {
        self.edges.iter().map(DigraphEdge::name).collect()
    }

    /// Label of the binary operation built from edges `e` and `f`.
    pub fn pair_label(e: &str, f: &str) -> String {
        format!("theta[{e},{f}]")
    }

    /// Unordered pairs of distinct edges sharing a target, each listed once
    /// with the earlier edge first.
    pub fn converging_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.edges.len() {
            for j in i + 1..self.edges.len() {
                if self.edges[i].to == self.edges[j].to {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Structural checks shared by the operad and algebra constructors.
    pub fn check(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut vs = HashSet::new();
        for v in &self.vertices {
            if !vs.insert(v.as_str()) {
                return Err(Error::InvalidGraph(format!("duplicate vertex `{v}`")));
            }
        }
        let mut labels: HashSet<String> = self.vertices.iter().map(|v| format!("id_{v}")).collect();
        for e in &self.edges {
            for end in [&e.from, &e.to] {
                if !vs.contains(end.as_str()) {
                    return Err(Error::InvalidGraph(format!("edge endpoint `{end}` is not a vertex")));
                }
            }
            if e.from == e.to {
                return Err(Error::InvalidGraph(format!(
                    "self-loop at `{}`; the endomorphism space of a vertex is spanned by its identity",
                    e.from
                )));
            }
            if !e.weight.re.is_finite() || !e.weight.im.is_finite() {
                return Err(Error::InvalidGraph(format!("edge `{}` has a non-finite weight", e.name())));
            }
            if !labels.insert(e.name()) {
                return Err(Error::InvalidGraph(format!("duplicate edge label `{}`", e.name())));
            }
        }
        let names = self.edge_labels();
        let pairs = self.converging_pairs();
        for pw in &self.pair_weights {
            let fi = names.iter().position(|n| *n == pw.first);
            let si = names.iter().position(|n| *n == pw.second);
            let ok = match (fi, si) {
                (Some(a), Some(b)) => pairs.contains(&(a.min(b), a.max(b))),
                _ => false,
            };
            if !ok {
                return Err(Error::InvalidGraph(format!(
                    "pair weight ({}, {}) does not name two edges with a common target",
                    pw.first, pw.second
                )));
            }
        }
        Ok(())
    }
}
