//! Finite colored operads over ℂ: operation spaces with named bases, sparse
//! composition tables, units and symmetric actions.

mod builtins;
mod graph;
mod json;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, ComplexNumber};

pub use builtins::{matrix_block_operad, network_operad, nogo_operad, trivial_operad};
pub use graph::{DigraphEdge, PairWeight, WeightedDigraph};
pub use json::OperadJson;
pub(crate) use validate::composite_signature;
pub use validate::{validate_operad, validate_operad_with, ValidateOptions, MAX_ASSOCIATIVITY_TRIPLES};

pub type Color = String;

/// Input colors and output color of an operation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OperationSignature {
    pub inputs: Vec<Color>,
    pub output: Color,
}

impl OperationSignature {
    pub fn new<S: Into<String>>(inputs: impl IntoIterator<Item = S>, output: impl Into<String>) -> Self {
        Self {
            inputs: inputs.into_iter().map(Into::into).collect(),
            output: output.into(),
        }
    }

    /// The endomorphism signature `(c; c)`.
    pub fn unary(color: &str) -> Self {
        Self::new([color], color)
    }

    pub fn arity(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_endo(&self) -> bool {
        self.inputs.len() == 1 && self.inputs[0] == self.output
    }

    /// Operations that are not of the form `(c; c)`.
    pub fn is_interaction(&self) -> bool {
        !self.is_endo()
    }

    /// Signature after reordering inputs so that new slot `i` holds old slot
    /// `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            inputs: perm.iter().map(|&p| self.inputs[p].clone()).collect(),
            output: self.output.clone(),
        }
    }
}

impl fmt::Display for OperationSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.inputs.join(","), self.output)
    }
}

/// `P(c₁,…,cₙ; c)` with a basis of labels. Dimension zero is never stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperationSpace {
    pub signature: OperationSignature,
    pub basis: Vec<String>,
}

impl OperationSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// A sparse linear combination of basis labels.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Combination(BTreeMap<String, ComplexNumber>);

impl Combination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn basis(label: impl Into<String>) -> Self {
        Self::term(label, c(1.0, 0.0))
    }

    pub fn term(label: impl Into<String>, coeff: ComplexNumber) -> Self {
        let mut m = BTreeMap::new();
        m.insert(label.into(), coeff);
        Self(m)
    }

    pub fn add_term(&mut self, label: &str, coeff: ComplexNumber) {
        *self.0.entry(label.to_string()).or_insert(c(0.0, 0.0)) += coeff;
    }

    pub fn add_scaled(&mut self, other: &Combination, s: ComplexNumber) {
        for (l, &v) in &other.0 {
            self.add_term(l, v * s);
        }
    }

    pub fn scale(&self, s: ComplexNumber) -> Self {
        Self(self.0.iter().map(|(l, &v)| (l.clone(), v * s)).collect())
    }

    pub fn map_coeffs(&self, f: impl Fn(ComplexNumber) -> ComplexNumber) -> Self {
        Self(self.0.iter().map(|(l, &v)| (l.clone(), f(v))).collect())
    }

    pub fn coeff(&self, label: &str) -> ComplexNumber {
        self.0.get(label).copied().unwrap_or(c(0.0, 0.0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, ComplexNumber)> {
        self.0.iter().map(|(l, &v)| (l.as_str(), v))
    }

    /// Terms with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = (&str, ComplexNumber)> {
        self.terms().filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.support().next().is_none()
    }

    /// Largest coefficient difference.
    pub fn distance(&self, other: &Combination) -> f64 {
        let labels: BTreeSet<&String> = self.0.keys().chain(other.0.keys()).collect();
        labels
            .into_iter()
            .map(|l| (self.coeff(l) - other.coeff(l)).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .support()
            .map(|(l, v)| {
                if v == c(1.0, 0.0) {
                    l.to_string()
                } else {
                    format!("({v})·{l}")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Key of a composition table entry: outer label and one inner label per
/// input slot of the outer operation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CompositionKey {
    pub outer: String,
    pub inner: Vec<String>,
}

impl CompositionKey {
    pub fn new<S: Into<String>>(outer: impl Into<String>, inner: impl IntoIterator<Item = S>) -> Self {
        Self {
            outer: outer.into(),
            inner: inner.into_iter().map(Into::into).collect(),
        }
    }
}

impl fmt::Display for CompositionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∘({})", self.outer, self.inner.join(","))
    }
}

/// Action of a permutation on one operation space. New slot `i` holds old
/// slot `permutation[i]`; `matrix` maps the source space to the space of the
/// permuted signature.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricAction {
    pub signature: OperationSignature,
    pub permutation: Vec<usize>,
    pub matrix: ComplexMatrix,
}

/// A finite colored operad.
///
/// Composition tables are partial: a missing key means the composite is not
/// materialized and is derived on demand where needed, so validation only
/// constrains recorded entries.
#[derive(Clone, Debug)]
pub struct ColoredOperad {
    name: String,
    colors: Vec<Color>,
    spaces: BTreeMap<OperationSignature, OperationSpace>,
    composition: BTreeMap<CompositionKey, Combination>,
    units: BTreeMap<Color, Combination>,
    actions: Vec<SymmetricAction>,
    labels: HashMap<String, (OperationSignature, usize)>,
}

impl PartialEq for ColoredOperad {
    fn eq(&self, other: &Self) -> bool {
        self.colors == other.colors
            && self.spaces == other.spaces
            && self.composition == other.composition
            && self.units == other.units
            && self.actions == other.actions
    }
}

impl ColoredOperad {
    pub fn builder(name: impl Into<String>) -> OperadBuilder {
        OperadBuilder {
            name: name.into(),
            colors: Vec::new(),
            spaces: Vec::new(),
            composition: Vec::new(),
            units: Vec::new(),
            actions: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn has_color(&self, color: &str) -> bool {
        self.colors.iter().any(|c| c == color)
    }

    pub fn color_index(&self, color: &str) -> Option<usize> {
        self.colors.iter().position(|c| c == color)
    }

    /// Nonzero operation spaces in signature order.
    pub fn spaces(&self) -> impl Iterator<Item = &OperationSpace> {
        self.spaces.values()
    }

    pub fn space(&self, sig: &OperationSignature) -> Option<&OperationSpace> {
        self.spaces.get(sig)
    }

    pub fn dim(&self, sig: &OperationSignature) -> usize {
        self.spaces.get(sig).map_or(0, OperationSpace::dimension)
    }

    /// `dim P(c; c)`.
    pub fn endo_dim(&self, color: &str) -> usize {
        self.dim(&OperationSignature::unary(color))
    }

    /// Every basis operation as `(label, signature)`, in signature order and
    /// then basis order.
    pub fn basis_ops(&self) -> impl Iterator<Item = (&str, &OperationSignature)> {
        self.spaces
            .values()
            .flat_map(|s| s.basis.iter().map(move |l| (l.as_str(), &s.signature)))
    }

    pub fn signature_of(&self, label: &str) -> Option<&OperationSignature> {
        self.labels.get(label).map(|(s, _)| s)
    }

    /// Position of a basis label within its operation space.
    pub fn basis_index(&self, label: &str) -> Option<usize> {
        self.labels.get(label).map(|(_, i)| *i)
    }

    pub fn composition(&self) -> &BTreeMap<CompositionKey, Combination> {
        &self.composition
    }

    pub fn compose(&self, outer: &str, inner: &[&str]) -> Option<&Combination> {
        let key = CompositionKey::new(outer, inner.iter().copied());
        self.composition.get(&key)
    }

    /// Multilinear extension of the table to combinations. `None` when some
    /// needed entry is not recorded.
    pub fn compose_combinations(&self, outer: &Combination, inner: &[Combination]) -> Option<Combination> {
        let mut out = Combination::new();
        let inner_terms: Vec<Vec<(&str, ComplexNumber)>> =
            inner.iter().map(|c| c.support().collect()).collect();
        for (o, oc) in outer.support() {
            let mut idx = vec![0usize; inner.len()];
            if inner_terms.iter().any(Vec::is_empty) {
                continue;
            }
            loop {
                let labels: Vec<&str> = idx.iter().enumerate().map(|(s, &k)| inner_terms[s][k].0).collect();
                let coeff = idx
                    .iter()
                    .enumerate()
                    .fold(oc, |acc, (s, &k)| acc * inner_terms[s][k].1);
                let r = self.compose(o, &labels)?;
                out.add_scaled(r, coeff);
                if !advance_index(&mut idx, |s| inner_terms[s].len()) {
                    break;
                }
            }
        }
        Some(out)
    }

    pub fn unit(&self, color: &str) -> Option<&Combination> {
        self.units.get(color)
    }

    pub fn units(&self) -> &BTreeMap<Color, Combination> {
        &self.units
    }

    pub fn actions(&self) -> &[SymmetricAction] {
        &self.actions
    }

    /// Signature of the composite of a chain of unary operations applied in
    /// the given order: the first label acts first. Longer composites are not
    /// stored; this derives where the composite lives.
    pub fn unary_path_signature(&self, labels: &[&str]) -> Result<OperationSignature> {
        let first = labels
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty operation path".into()))?;
        let mut current = self
            .signature_of(first)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown operation `{first}`")))?
            .clone();
        if current.arity() != 1 {
            return Err(Error::InvalidArgument(format!("`{first}` is not unary")));
        }
        let start = current.inputs[0].clone();
        for l in &labels[1..] {
            let sig = self
                .signature_of(l)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown operation `{l}`")))?;
            if sig.arity() != 1 || sig.inputs[0] != current.output {
                return Err(Error::InvalidArgument(format!(
                    "`{l}` with signature {sig} cannot follow an operation landing in {}",
                    current.output
                )));
            }
            current = sig.clone();
        }
        Ok(OperationSignature::new([start], current.output))
    }

    /// Copy with a different name.
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Copy with composition coefficients, unit coefficients and action
    /// matrices rewritten.
    pub(crate) fn with_tables(
        &self,
        composition: BTreeMap<CompositionKey, Combination>,
        units: BTreeMap<Color, Combination>,
        actions: Vec<SymmetricAction>,
    ) -> Self {
        Self {
            name: self.name.clone(),
            colors: self.colors.clone(),
            spaces: self.spaces.clone(),
            composition,
            units,
            actions,
            labels: self.labels.clone(),
        }
    }
}

/// Odometer increment; false once every index has wrapped.
pub(crate) fn advance_index(idx: &mut [usize], len: impl Fn(usize) -> usize) -> bool {
    for s in (0..idx.len()).rev() {
        idx[s] += 1;
        if idx[s] < len(s) {
            return true;
        }
        idx[s] = 0;
    }
    false
}

/// Incremental construction of a [`ColoredOperad`].
///
/// `build` rejects structural problems that would make labels ambiguous:
/// duplicate colors or labels, unknown colors in signatures and repeated
/// signatures. Inconsistent table entries are accepted and surface in
/// validation instead.
#[derive(Clone, Debug)]
pub struct OperadBuilder {
    name: String,
    colors: Vec<Color>,
    spaces: Vec<OperationSpace>,
    composition: Vec<(CompositionKey, Combination)>,
    units: Vec<(Color, Combination)>,
    actions: Vec<SymmetricAction>,
}

impl OperadBuilder {
    pub fn color(mut self, color: impl Into<String>) -> Self {
        self.colors.push(color.into());
        self
    }

    pub fn colors<S: Into<String>>(mut self, colors: impl IntoIterator<Item = S>) -> Self {
        self.colors.extend(colors.into_iter().map(Into::into));
        self
    }

    pub fn space<S: Into<String>>(mut self, signature: OperationSignature, basis: impl IntoIterator<Item = S>) -> Self {
        self.spaces.push(OperationSpace {
            signature,
            basis: basis.into_iter().map(Into::into).collect(),
        });
        self
    }

    /// Adds a basis label to the space with this signature, creating the
    /// space if needed.
    pub fn op(mut self, label: impl Into<String>, signature: OperationSignature) -> Self {
        let label = label.into();
        match self.spaces.iter_mut().find(|s| s.signature == signature) {
            Some(s) => s.basis.push(label),
            None => self.spaces.push(OperationSpace {
                signature,
                basis: vec![label],
            }),
        }
        self
    }

    pub fn compose(mut self, key: CompositionKey, result: Combination) -> Self {
        self.composition.push((key, result));
        self
    }

    pub fn unit(mut self, color: impl Into<String>, unit: Combination) -> Self {
        self.units.push((color.into(), unit));
        self
    }

    pub fn action(mut self, action: SymmetricAction) -> Self {
        self.actions.push(action);
        self
    }

    pub fn build(self) -> Result<ColoredOperad> {
        let mut seen = BTreeSet::new();
        for col in &self.colors {
            if !seen.insert(col.clone()) {
                return Err(Error::InvalidOperad(format!("duplicate color `{col}`")));
            }
        }
        let mut spaces = BTreeMap::new();
        let mut labels = HashMap::new();
        for space in self.spaces {
            let sig = &space.signature;
            if let Some(bad) = sig.inputs.iter().chain([&sig.output]).find(|c| !seen.contains(*c)) {
                return Err(Error::InvalidOperad(format!("signature {sig} uses unknown color `{bad}`")));
            }
            for (i, l) in space.basis.iter().enumerate() {
                if labels.insert(l.clone(), (sig.clone(), i)).is_some() {
                    return Err(Error::InvalidOperad(format!("duplicate basis label `{l}`")));
                }
            }
            if space.basis.is_empty() {
                continue;
            }
            if spaces.insert(sig.clone(), space.clone()).is_some() {
                return Err(Error::InvalidOperad(format!("signature {sig} listed twice")));
            }
        }
        let mut composition = BTreeMap::new();
        for (k, v) in self.composition {
            if composition.insert(k.clone(), v).is_some() {
                return Err(Error::InvalidOperad(format!("composite {k} listed twice")));
            }
        }
        let mut units = BTreeMap::new();
        for (col, u) in self.units {
            if !seen.contains(&col) {
                return Err(Error::InvalidOperad(format!("unit for unknown color `{col}`")));
            }
            if units.insert(col.clone(), u).is_some() {
                return Err(Error::InvalidOperad(format!("unit for `{col}` listed twice")));
            }
        }
        Ok(ColoredOperad {
            name: self.name,
            colors: self.colors,
            spaces,
            composition,
            units,
            actions: self.actions,
            labels,
        })
    }
}
