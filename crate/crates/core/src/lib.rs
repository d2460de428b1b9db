//! Local graph clustering with flow and spectral methods.
//!
//! The crate provides a compact weighted graph type with cut, volume and
//! conductance evaluators; a floating-point max-flow solver; flow-based
//! cut improvement (MQI, FlowImprove and the strongly local
//! LocalFlowImprove); spectral relaxations (Fiedler vectors, the Dirichlet
//! eigenvector behind SpectralMQI, MOV and ℓ1-regularized PageRank); sweep
//! cut rounding; and exhaustive or dense reference solvers for small
//! instances.

pub mod embedding;
pub mod error;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod io;
mod linalg;
pub mod maxflow;
pub mod oracles;
pub mod refcut;
pub mod result;
pub mod rounding;
pub mod spectral;

pub use embedding::{EmbeddingKind, EmbeddingVector, SeedSpec, SeedVector};
pub use error::{Error, Result};
pub use flow::{flow_improve, local_flow_improve, local_flow_improve_kappa, mqi};
pub use graph::{Graph, NodeSet, ReferenceSet, SetStats};
pub use io::LabelMap;
pub use maxflow::{solve_maxflow, solve_maxflow_local, CutSolution, FlowNetwork};
pub use refcut::{augmented_cut_value, materialize, AugmentedGraphSpec, SinkReference};
pub use result::ClusterResult;
pub use rounding::{sweep_cut, SweepObjective, SweepProfile, SweepResult};
pub use spectral::{
    fiedler, l1_pagerank, l1pr_cluster, mov_correlate, mov_solve, spectral_mqi, spectral_mqi_cluster,
};
