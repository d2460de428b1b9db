use std::collections::BTreeMap;
use std::time::Duration;

use crate::embedding::EmbeddingVector;
use crate::error::Result;
use crate::graph::{Graph, NodeSet};

/// Output of a clustering run.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult {
    pub set: NodeSet,
    pub objective_name: String,
    pub objective: f64,
    pub conductance: f64,
    pub cut: f64,
    pub volume: f64,
    pub touched_nodes: usize,
    pub iterations: usize,
    pub runtime_ms: f64,
    /// Additional named scalars (eigenvalues, chosen ρ, ...).
    pub extras: BTreeMap<String, f64>,
    /// Embedding the set was rounded from, if any.
    pub vector: Option<EmbeddingVector>,
}

impl ClusterResult {
    /// Fills in cut, volume and conductance of `set` from `g`.
    pub fn new(g: &Graph, set: NodeSet, objective_name: &str, objective: f64) -> Result<Self> {
        let stats = g.stats(&set)?;
        Ok(ClusterResult {
            conductance: stats.conductance(g.total_volume()),
            cut: stats.cut + 0.0,
            volume: stats.volume + 0.0,
            set,
            objective_name: objective_name.to_string(),
            objective,
            touched_nodes: 0,
            iterations: 0,
            runtime_ms: 0.0,
            extras: BTreeMap::new(),
            vector: None,
        })
    }

    pub fn with_touched(mut self, touched: usize) -> Self {
        self.touched_nodes = touched;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_runtime(mut self, elapsed: Duration) -> Self {
        self.runtime_ms = elapsed.as_secs_f64() * 1e3;
        self
    }

    pub fn with_extra(mut self, key: &str, value: f64) -> Self {
        self.extras.insert(key.to_string(), value);
        self
    }

    pub fn with_vector(mut self, vector: EmbeddingVector) -> Self {
        self.vector = Some(vector);
        self
    }
}
