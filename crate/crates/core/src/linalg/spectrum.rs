use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::ComplexNumber;
use crate::error::{Error, Result};

/// How two spectrum sets are paired up when compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchMode {
    /// Each value of the first set, in canonical order, takes its nearest
    /// unused partner. Fast, and exact whenever clusters are well separated.
    Greedy,
    /// Maximum bipartite matching on the within-tolerance graph.
    #[default]
    Exact,
}

/// A finite multiset of complex numbers compared up to an absolute
/// tolerance. Values are kept in canonical `(re, im)` order.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "SpectrumRepr", into = "SpectrumRepr")]
pub struct SpectrumSet {
    values: Vec<ComplexNumber>,
    tolerance: f64,
}

#[derive(Serialize, Deserialize)]
struct SpectrumRepr {
    values: Vec<ComplexNumber>,
    tolerance: f64,
}

impl TryFrom<SpectrumRepr> for SpectrumSet {
    type Error = Error;

    fn try_from(r: SpectrumRepr) -> Result<Self> {
        if !(r.tolerance > 0.0 && r.tolerance.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "spectrum tolerance must be positive, got {}",
                r.tolerance
            )));
        }
        if r.values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite spectrum value".into()));
        }
        Ok(SpectrumSet::new(r.values, r.tolerance))
    }
}

impl From<SpectrumSet> for SpectrumRepr {
    fn from(s: SpectrumSet) -> Self {
        SpectrumRepr {
            values: s.values,
            tolerance: s.tolerance,
        }
    }
}

pub(crate) fn canonical_cmp(a: &ComplexNumber, b: &ComplexNumber) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

impl SpectrumSet {
    pub fn new(mut values: Vec<ComplexNumber>, tolerance: f64) -> Self {
        values.sort_by(canonical_cmp);
        Self { values, tolerance }
    }

    pub fn empty(tolerance: f64) -> Self {
        Self::new(Vec::new(), tolerance)
    }

    pub fn values(&self) -> &[ComplexNumber] {
        &self.values
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_tolerance(&self, tolerance: f64) -> Self {
        Self {
            values: self.values.clone(),
            tolerance,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Multiset equality using the larger of the two tolerances.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.equals(other, MatchMode::default())
    }

    pub fn equals(&self, other: &Self, mode: MatchMode) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let tol = self.tolerance.max(other.tolerance);
        match mode {
            MatchMode::Greedy => greedy_match(&self.values, &other.values, tol).is_some(),
            MatchMode::Exact => max_matching(&self.values, &other.values, tol) == self.len(),
        }
    }

    /// True when `self` embeds into `other` with multiplicity.
    pub fn is_submultiset_of(&self, other: &Self) -> bool {
        let tol = self.tolerance.max(other.tolerance);
        max_matching(&self.values, &other.values, tol) == self.len()
    }

    /// True when some value lies within tolerance of `z`.
    pub fn contains(&self, z: ComplexNumber) -> bool {
        self.values.iter().any(|v| (v - z).norm() <= self.tolerance)
    }

    /// Smallest threshold under which the two sets match, or `None` when the
    /// cardinalities differ. Zero for two empty sets.
    pub fn matching_distance(&self, other: &Self) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        if self.is_empty() {
            return Some(0.0);
        }
        let mut cands: Vec<f64> = self
            .values
            .iter()
            .flat_map(|a| other.values.iter().map(move |b| (a - b).norm()))
            .collect();
        cands.sort_by(f64::total_cmp);
        cands.dedup();
        let n = self.len();
        let (mut lo, mut hi) = (0, cands.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if max_matching(&self.values, &other.values, cands[mid]) == n {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(cands[lo])
    }

    /// Collapses values that lie within tolerance of an earlier kept value.
    pub fn dedup(&self) -> Self {
        let mut kept: Vec<ComplexNumber> = Vec::new();
        for &v in &self.values {
            if !kept.iter().any(|k| (k - v).norm() <= self.tolerance) {
                kept.push(v);
            }
        }
        Self::new(kept, self.tolerance)
    }

    pub fn map(&self, f: impl Fn(ComplexNumber) -> ComplexNumber) -> Self {
        Self::new(self.values.iter().map(|&z| f(z)).collect(), self.tolerance)
    }

    /// Multiset union; the result carries the larger tolerance.
    pub fn union(&self, other: &Self) -> Self {
        let mut v = self.values.clone();
        v.extend_from_slice(&other.values);
        Self::new(v, self.tolerance.max(other.tolerance))
    }
}

fn greedy_match(a: &[ComplexNumber], b: &[ComplexNumber], tol: f64) -> Option<()> {
    let mut used = vec![false; b.len()];
    for x in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        if best.1 > tol {
            return None;
        }
        used[best.0] = true;
    }
    Some(())
}

/// Size of a maximum matching in the bipartite graph joining values within
/// `tol` of each other (augmenting paths).
fn max_matching(a: &[ComplexNumber], b: &[ComplexNumber], tol: f64) -> usize {
    let adj: Vec<Vec<usize>> = a
        .iter()
        .map(|x| {
            b.iter()
                .enumerate()
                .filter(|(_, y)| (x - *y).norm() <= tol)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; b.len()];
    let mut size = 0;
    for i in 0..a.len() {
        let mut seen = vec![false; b.len()];
        if augment(i, &adj, &mut owner, &mut seen) {
            size += 1;
        }
    }
    size
}

fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if owner[j].is_none_or(|k| augment(k, adj, owner, seen)) {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}

impl PartialEq for SpectrumSet {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other)
    }
}
