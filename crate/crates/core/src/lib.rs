//! Random graph lifts, noise operators, spectral certificates, exact
//! combinatorial optimizers and Path/Local Statistics feasibility machinery
//! for regular graphs.

pub mod certificates;
pub mod ensembles;
pub mod error;
pub mod exact;
pub mod graph;
pub mod harness;
pub mod linalg;
pub mod rng;
pub mod sdp;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{
    degree_profile, double_cover, find_bipartition, graph_distance, BipartiteLayout, GraphJson,
    Multigraph, SimpleGraph,
};
pub use ensembles::LiftedGraph;
pub use linalg::Matrix;
pub use spectral::{RegularGraph, Spectrum};
