//! Desk-scale computational toolkit for comparison geometry and
//! right-angled group theory.
//!
//! The crate has three strands that feed each other:
//!
//! * **Comparison geometry.** Constant-curvature model planes, laws of
//!   cosines, comparison triangles, and sampled curvature-bound tests for
//!   finite metric spaces ([`model_spaces`], [`metric_graph`], [`cone`],
//!   [`bruhat_tits`]).
//! * **Combinatorial nonpositive curvature.** Simplicial and cube
//!   complexes, flag/link conditions ([`complexes`]).
//! * **Graphs with oriented edges and their groups.** Mixed graphs whose
//!   unmarked edges commute generators and whose marked, directed edges
//!   twist them; word rewriting, clique subgroups, quadratic algebras over
//!   the two-element field, and chain-level cell counts
//!   ([`special_graph`], [`raag`], [`f2algebra`], [`salvetti`],
//!   [`graph_of_groups`]).
//!
//! Everything is exact or explicitly toleranced, single-threaded, and
//! deterministic: the same inputs (and seeds, where sampling is involved)
//! produce byte-identical reports.

pub mod bruhat_tits;
pub mod complexes;
pub mod cone;
pub mod error;
pub mod f2algebra;
pub mod graph_of_groups;
pub mod io;
pub mod metric_graph;
pub mod model_spaces;
pub mod raag;
pub mod report;
pub mod salvetti;
pub mod special_graph;

mod util;

pub use error::{Error, Result};
pub use report::{CatReport, DistanceOracle, Verdict, Witness};
