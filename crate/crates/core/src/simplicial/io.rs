use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Checks, GluingSpec, Triangulation, TriangulationSpec};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingDocument {
    pub plus: String,
    pub minus: String,
    pub vertex_map: BTreeMap<String, String>,
}

fn yes() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

/// On-disk triangulation format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationDocument {
    pub name: String,
    pub dim: usize,
    pub oriented: bool,
    pub vertices: Vec<String>,
    pub top_simplices: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub subcomplexes: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gluing: Option<GluingDocument>,
    /// Enforce at most two cofaces per codimension-one face.
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub manifold: bool,
    /// Reject incoherent orientations; switched off only for negative
    /// controls.
    #[serde(default = "yes", skip_serializing_if = "is_true")]
    pub validate_orientation: bool,
}

impl TriangulationDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn build(self) -> Result<Triangulation> {
        let checks = Checks {
            manifold: self.manifold,
            orientation: self.validate_orientation,
        };
        let spec = TriangulationSpec {
            name: self.name,
            dim: Some(self.dim),
            oriented: self.oriented,
            vertices: self.vertices,
            top_simplices: self.top_simplices,
            orientation: self.orientation,
            subcomplexes: self.subcomplexes,
        };
        let mut tri = Triangulation::new(spec, checks)?;
        if let Some(g) = self.gluing {
            tri.set_gluing(Some(GluingSpec {
                plus: g.plus,
                minus: g.minus,
                vertex_map: g.vertex_map,
            }))?;
        }
        Ok(tri)
    }
}

impl Triangulation {
    pub fn from_json(text: &str) -> Result<Self> {
        TriangulationDocument::from_json(text)?.build()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Document with sorted top simplices and explicit signs. Named
    /// subcomplexes are written as their maximal simplices.
    pub fn to_document(&self) -> TriangulationDocument {
        let mut subcomplexes = BTreeMap::new();
        for (name, sub) in self.subcomplexes() {
            let mut listed: Vec<Vec<usize>> = Vec::new();
            for k in (0..=self.dim()).rev() {
                for i in sub.members(k) {
                    let s = &self.simplices(k)[i];
                    let covered = listed.iter().any(|t| s.iter().all(|v| t.contains(v)));
                    if !covered {
                        listed.push(s.clone());
                    }
                }
            }
            listed.sort();
            subcomplexes.insert(name.clone(), listed);
        }
        let signs = self.top_signs();
        TriangulationDocument {
            name: self.name().to_string(),
            dim: self.dim(),
            oriented: self.is_oriented(),
            vertices: self.vertices().to_vec(),
            top_simplices: self.simplices(self.dim()).to_vec(),
            orientation: if self.is_oriented() && signs.iter().any(|&s| s != 1) {
                Some(signs.to_vec())
            } else {
                None
            },
            subcomplexes,
            gluing: self.gluing().map(|g| GluingDocument {
                plus: g.plus.clone(),
                minus: g.minus.clone(),
                vertex_map: g.vertex_map.clone(),
            }),
            manifold: self.checks().manifold,
            validate_orientation: self.checks().orientation,
        }
    }

    pub fn to_json(&self) -> String {
        self.to_document().to_json()
    }
}
