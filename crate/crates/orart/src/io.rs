//! JSON document types for the batch front end.
//!
//! Each analysis input is a small self-describing JSON file; the types
//! here give them a fixed schema and a `build` step that turns the
//! parsed document into the in-memory structure the library works on.
//! Parsing keeps serde_json's line/column diagnostics, wrapped in
//! [`Error::Schema`] so callers can map them to a uniform exit code.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::complexes::{CubeComplex, SimplicialComplex};
use crate::cone::FiniteMetricSpace;
use crate::error::{Error, Result};
use crate::metric_graph::MetricGraph;

/// Reads and parses one JSON document, attributing failures to the file.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

/// Pretty-prints any serializable report.
pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// A graph with edge lengths: `{"vertices": [..], "edges": [{"from",
/// "to", "length"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricGraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<MetricEdgeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricEdgeDoc {
    pub from: String,
    pub to: String,
    pub length: f64,
}

impl MetricGraphDoc {
    pub fn build(&self) -> Result<MetricGraph> {
        let edges: Vec<(String, String, f64)> = self
            .edges
            .iter()
            .map(|e| (e.from.clone(), e.to.clone(), e.length))
            .collect();
        MetricGraph::new(self.vertices.clone(), edges)
    }
}

/// A cube complex given by its top cells: `{"vertices": n, "cubes":
/// [[corner indices], ..]}`. Each cube lists its `2^d` corners in
/// coordinate order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CubeComplexDoc {
    pub vertices: usize,
    pub cubes: Vec<Vec<usize>>,
}

impl CubeComplexDoc {
    pub fn build(&self) -> Result<CubeComplex> {
        CubeComplex::new(self.vertices, self.cubes.clone())
    }
}

/// A simplicial complex given by generating faces: `{"vertices": n,
/// "faces": [[vertex indices], ..]}`; the downward closure is taken.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimplicialComplexDoc {
    pub vertices: usize,
    pub faces: Vec<Vec<usize>>,
}

impl SimplicialComplexDoc {
    pub fn build(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::from_faces(self.vertices, self.faces.iter().cloned())
    }
}

/// A list of Euclidean points, all of one dimension: `{"points":
/// [[coords], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointSetDoc {
    pub points: Vec<Vec<f64>>,
}

impl PointSetDoc {
    /// Checks the points are finite and equal-dimensional.
    pub fn build(&self) -> Result<Vec<Vec<f64>>> {
        if self.points.is_empty() {
            return Err(Error::EmptyInput("points"));
        }
        let dim = self.points[0].len();
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch(dim, p.len()));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::Domain(format!("point {i} has a non-finite entry")));
            }
        }
        Ok(self.points.clone())
    }
}

/// A finite set of affine maps `x -> linear · x + translation`:
/// `{"isometries": [{"linear": [[row], ..], "translation": [..]}, ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsometrySetDoc {
    pub isometries: Vec<IsometryDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsometryDoc {
    pub linear: Vec<Vec<f64>>,
    pub translation: Vec<f64>,
}

impl IsometrySetDoc {
    pub fn build(&self) -> Result<Vec<crate::bruhat_tits::Isometry>> {
        self.isometries
            .iter()
            .map(|i| crate::bruhat_tits::Isometry::new(i.linear.clone(), i.translation.clone()))
            .collect()
    }
}

/// A finite metric space by its distance matrix: `{"labels": [..],
/// "distances": [[row], ..]}`. Axioms are checked on build.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricSpaceDoc {
    pub labels: Vec<String>,
    pub distances: Vec<Vec<f64>>,
}

impl MetricSpaceDoc {
    pub fn build(&self) -> Result<FiniteMetricSpace> {
        FiniteMetricSpace::new(self.labels.clone(), self.distances.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_graph::{SpecialGraph, SpecialGraphSpec};

    #[test]
    fn special_graph_documents_round_trip() {
        let text = r#"{
            "vertices": [
                {"id": "v1", "special": false},
                {"id": "v2", "special": true}
            ],
            "edges": [
                {"from": "v1", "to": "v2", "special": true}
            ]
        }"#;
        let spec: SpecialGraphSpec = serde_json::from_str(text).unwrap();
        let graph = SpecialGraph::from_spec(&spec).unwrap();
        assert!(graph.is_valid());
        let back = serde_json::to_string(&graph.to_spec()).unwrap();
        let reparsed: SpecialGraphSpec = serde_json::from_str(&back).unwrap();
        let again = SpecialGraph::from_spec(&reparsed).unwrap();
        assert_eq!(again.vertex_names(), graph.vertex_names());
        assert_eq!(again.special_edges(), graph.special_edges());
    }

    #[test]
    fn metric_graph_document_builds_the_graph() {
        let doc: MetricGraphDoc = serde_json::from_str(
            r#"{"vertices": ["a", "b", "c"],
                "edges": [{"from": "a", "to": "b", "length": 1.0},
                          {"from": "b", "to": "c", "length": 2.0}]}"#,
        )
        .unwrap();
        let graph = doc.build().unwrap();
        assert_eq!(graph.vertex_count(), 3);
        assert_eq!(graph.edge_count(), 2);
    }

    #[test]
    fn cube_and_simplicial_documents_build() {
        let cube: CubeComplexDoc =
            serde_json::from_str(r#"{"vertices": 4, "cubes": [[0, 1, 2, 3]]}"#).unwrap();
        let complex = cube.build().unwrap();
        assert_eq!(complex.dim(), 2);

        let simp: SimplicialComplexDoc =
            serde_json::from_str(r#"{"vertices": 3, "faces": [[0, 1, 2]]}"#).unwrap();
        assert_eq!(simp.build().unwrap().dim(), 2);
    }

    #[test]
    fn point_set_rejects_ragged_or_nonfinite_input() {
        let ragged = PointSetDoc {
            points: vec![vec![0.0, 0.0], vec![1.0]],
        };
        assert!(matches!(
            ragged.build(),
            Err(Error::DimensionMismatch(2, 1))
        ));
        let bad = PointSetDoc {
            points: vec![vec![f64::NAN]],
        };
        assert!(matches!(bad.build(), Err(Error::Domain(_))));
    }

    #[test]
    fn parse_errors_carry_position_diagnostics() {
        let err = serde_json::from_str::<MetricGraphDoc>("{\"vertices\": [],\n  \"edges\": 3}")
            .map_err(Error::from)
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "diagnostic was: {msg}");
    }

    #[test]
    fn isometry_and_metric_space_documents_build() {
        let iso: IsometrySetDoc = serde_json::from_str(
            r#"{"isometries": [{"linear": [[0.0, -1.0], [1.0, 0.0]],
                                "translation": [0.0, 0.0]}]}"#,
        )
        .unwrap();
        let maps = iso.build().unwrap();
        assert_eq!(maps.len(), 1);
        assert_eq!(maps[0].dim(), 2);

        let space: MetricSpaceDoc = serde_json::from_str(
            r#"{"labels": ["p", "q"], "distances": [[0.0, 1.0], [1.0, 0.0]]}"#,
        )
        .unwrap();
        assert_eq!(space.build().unwrap().len(), 2);
    }
}
