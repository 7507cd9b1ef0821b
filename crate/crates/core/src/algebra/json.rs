use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PAlgebra;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::operad::{
    matrix_block_operad, network_operad, nogo_operad, trivial_operad, ColoredOperad, OperadJson, WeightedDigraph,
};
use crate::report::SCHEMA_VERSION;

/// On-disk form of an algebra.
///
/// `operad_ref` names a built-in operad (`trivial`, `matrix_block`, `nogo`,
/// `network`) or is `inline`, in which case `operad` holds the operad
/// itself. `network` takes its operad from `graph`. Missing structure maps
/// act as zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraJson {
    #[serde(default = "default_version")]
    pub schema_version: u32,
    pub operad_ref: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operad: Option<OperadJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<WeightedDigraph>,
    pub components: BTreeMap<String, usize>,
    #[serde(default)]
    pub structure: BTreeMap<String, ComplexMatrix>,
    #[serde(default)]
    pub distinguished: BTreeMap<String, ComplexMatrix>,
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

impl AlgebraJson {
    pub fn resolve_operad(&self) -> Result<ColoredOperad> {
        match self.operad_ref.as_str() {
            "trivial" => Ok(trivial_operad()),
            "matrix_block" => Ok(matrix_block_operad()),
            "nogo" => Ok(nogo_operad()),
            "network" => {
                let g = self
                    .graph
                    .as_ref()
                    .ok_or_else(|| Error::InvalidAlgebra("operad_ref `network` needs a `graph`".into()))?;
                network_operad(g)
            }
            "inline" => self
                .operad
                .clone()
                .ok_or_else(|| Error::InvalidAlgebra("operad_ref `inline` needs an `operad`".into()))?
                .into_operad(),
            other => Err(Error::InvalidAlgebra(format!("unknown operad_ref `{other}`"))),
        }
    }

    pub fn into_algebra(self) -> Result<PAlgebra> {
        let operad = self.resolve_operad()?;
        PAlgebra::new(operad, self.components, self.structure, self.distinguished)
    }

    /// Serializes `a`. Built-in operads are written by name; anything else
    /// is inlined. Zero-size matrices are omitted since they carry no data.
    pub fn from_algebra(a: &PAlgebra, graph: Option<&WeightedDigraph>) -> Self {
        let p = a.operad();
        let builtin = match (p.name(), graph) {
            ("network", Some(g)) if network_operad(g).map(|q| &q == p).unwrap_or(false) => Some("network"),
            ("trivial", _) if *p == trivial_operad() => Some("trivial"),
            ("matrix_block", _) if *p == matrix_block_operad() => Some("matrix_block"),
            ("nogo", _) if *p == nogo_operad() => Some("nogo"),
            _ => None,
        };
        let keep = |m: &ComplexMatrix| !m.is_empty();
        Self {
            schema_version: SCHEMA_VERSION,
            operad_ref: builtin.unwrap_or("inline").to_string(),
            operad: if builtin.is_none() { Some(p.to_json()) } else { None },
            graph: if builtin == Some("network") { graph.cloned() } else { None },
            components: a.components().clone(),
            structure: a
                .structure_maps()
                .iter()
                .filter(|(_, m)| keep(m))
                .map(|(l, m)| (l.clone(), m.clone()))
                .collect(),
            distinguished: a
                .distinguished_maps()
                .iter()
                .filter(|(_, m)| keep(m))
                .map(|(c, m)| (c.clone(), m.clone()))
                .collect(),
        }
    }
}

impl PAlgebra {
    pub fn from_json_str(s: &str) -> std::result::Result<Result<Self>, serde_json::Error> {
        let j: AlgebraJson = serde_json::from_str(s)?;
        Ok(j.into_algebra())
    }
}
