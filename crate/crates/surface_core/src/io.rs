//! JSON file format for triangulations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::SurfaceError;
use crate::signed::SignedTriangulation;
use crate::surface::MarkedSurface;
use crate::triangulation::IdealTriangulation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceFile {
    pub genus: u32,
    pub punctures: u32,
    pub boundary: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationFile {
    pub surface: SurfaceFile,
    pub arcs: Vec<String>,
    #[serde(default)]
    pub boundary_segments: Vec<String>,
    pub triangles: Vec<Vec<String>>,
    pub corners: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signs: Option<BTreeMap<String, i8>>,
}

fn triple(v: &[String], what: &str, k: usize) -> Result<[String; 3], SurfaceError> {
    <[String; 3]>::try_from(v.to_vec())
        .map_err(|_| SurfaceError::Invalid(format!("{what} {k} has {} entries, expected 3", v.len())))
}

impl TriangulationFile {
    pub fn from_json(text: &str) -> Result<Self, SurfaceError> {
        serde_json::from_str(text).map_err(|e| SurfaceError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn triangulation(&self) -> Result<IdealTriangulation, SurfaceError> {
        let s = &self.surface;
        let surface = MarkedSurface::new(s.genus, s.punctures, s.boundary.clone())?;
        let tris = self
            .triangles
            .iter()
            .enumerate()
            .map(|(k, t)| triple(t, "triangle", k))
            .collect::<Result<Vec<_>, _>>()?;
        let corners = self
            .corners
            .iter()
            .enumerate()
            .map(|(k, c)| triple(c, "corner triple", k))
            .collect::<Result<Vec<_>, _>>()?;
        IdealTriangulation::from_labels(surface, &self.arcs, &self.boundary_segments, &tris, &corners)
    }

    pub fn signed(&self) -> Result<SignedTriangulation, SurfaceError> {
        let t = self.triangulation()?;
        SignedTriangulation::new(t, &self.signs.clone().unwrap_or_default())
    }

    pub fn from_triangulation(t: &IdealTriangulation) -> Self {
        let s = t.surface();
        TriangulationFile {
            surface: SurfaceFile { genus: s.genus, punctures: s.punctures, boundary: s.boundary.clone() },
            arcs: t.arcs().to_vec(),
            boundary_segments: t.boundary_segments().to_vec(),
            triangles: t
                .triangles()
                .iter()
                .map(|tri| tri.iter().map(|x| t.side_label(*x).to_string()).collect())
                .collect(),
            corners: t
                .corners()
                .iter()
                .map(|c| c.iter().map(|&v| t.vertices()[v].clone()).collect())
                .collect(),
            signs: None,
        }
    }

    pub fn from_signed(st: &SignedTriangulation) -> Self {
        let mut f = Self::from_triangulation(&st.triangulation);
        if !st.signs().is_empty() {
            f.signs = Some(st.signs_by_label());
        }
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::*;

    #[test]
    fn round_trip() {
        for t in [polygon(5), annulus(2, 1), once_punctured_disc(3), three_punctured_sphere()] {
            let st = SignedTriangulation::all_plus(t);
            let text = TriangulationFile::from_signed(&st).to_json();
            let back = TriangulationFile::from_json(&text).unwrap().signed().unwrap();
            assert_eq!(back, st);
        }
    }

    #[test]
    fn bad_arity() {
        let mut f = TriangulationFile::from_triangulation(&polygon(5));
        f.triangles[0].pop();
        assert!(matches!(f.triangulation(), Err(SurfaceError::Invalid(_))));
    }
}
