use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ColoredOperad, Combination, CompositionKey, OperationSignature, OperationSpace, SymmetricAction};
use crate::error::Result;
use crate::linalg::ComplexNumber;
use crate::report::SCHEMA_VERSION;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub label: String,
    pub coeff: ComplexNumber,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompositionJson {
    pub outer: String,
    pub inner: Vec<String>,
    pub result: Vec<TermJson>,
}

/// On-disk form of an operad.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperadJson {
    #[serde(default = "default_version")]
    pub schema_version: u32,
    #[serde(default)]
    pub name: Option<String>,
    pub colors: Vec<String>,
    pub spaces: Vec<SpaceJson>,
    #[serde(default)]
    pub composition: Vec<CompositionJson>,
    #[serde(default)]
    pub units: BTreeMap<String, Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub symmetric_actions: Vec<SymmetricAction>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceJson {
    pub inputs: Vec<String>,
    pub output: String,
    pub basis: Vec<String>,
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

fn to_terms(c: &Combination) -> Vec<TermJson> {
    c.terms()
        .map(|(l, v)| TermJson {
            label: l.to_string(),
            coeff: v,
        })
        .collect()
}

fn from_terms(terms: &[TermJson]) -> Combination {
    let mut c = Combination::new();
    for t in terms {
        c.add_term(&t.label, t.coeff);
    }
    c
}

impl From<&ColoredOperad> for OperadJson {
    fn from(p: &ColoredOperad) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            name: Some(p.name().to_string()),
            colors: p.colors().to_vec(),
            spaces: p
                .spaces()
                .map(|s: &OperationSpace| SpaceJson {
                    inputs: s.signature.inputs.clone(),
                    output: s.signature.output.clone(),
                    basis: s.basis.clone(),
                })
                .collect(),
            composition: p
                .composition()
                .iter()
                .map(|(k, v)| CompositionJson {
                    outer: k.outer.clone(),
                    inner: k.inner.clone(),
                    result: to_terms(v),
                })
                .collect(),
            units: p.units().iter().map(|(c, u)| (c.clone(), to_terms(u))).collect(),
            symmetric_actions: p.actions().to_vec(),
        }
    }
}

impl OperadJson {
    pub fn into_operad(self) -> Result<ColoredOperad> {
        let mut b = ColoredOperad::builder(self.name.unwrap_or_else(|| "custom".into())).colors(self.colors);
        for s in self.spaces {
            b = b.space(OperationSignature::new(s.inputs, s.output), s.basis);
        }
        for e in self.composition {
            b = b.compose(CompositionKey::new(e.outer, e.inner), from_terms(&e.result));
        }
        for (c, u) in self.units {
            b = b.unit(c, from_terms(&u));
        }
        for a in self.symmetric_actions {
            b = b.action(a);
        }
        b.build()
    }
}

impl ColoredOperad {
    pub fn to_json(&self) -> OperadJson {
        OperadJson::from(self)
    }

    pub fn from_json_str(s: &str) -> std::result::Result<Result<Self>, serde_json::Error> {
        let j: OperadJson = serde_json::from_str(s)?;
        Ok(j.into_operad())
    }
}
