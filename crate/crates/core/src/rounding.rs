//! Sweep-cut rounding of a vertex embedding to a vertex set.

use std::collections::HashMap;

use crate::embedding::EmbeddingVector;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet, SetStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepObjective {
    #[default]
    Conductance,
    Expansion,
}

impl SweepObjective {
    pub fn name(self) -> &'static str {
        match self {
            SweepObjective::Conductance => "conductance",
            SweepObjective::Expansion => "expansion",
        }
    }

    pub fn evaluate(self, stats: &SetStats, total_volume: f64) -> f64 {
        match self {
            SweepObjective::Conductance => stats.conductance(total_volume),
            SweepObjective::Expansion => stats.expansion(total_volume),
        }
    }
}

/// Objective values of the nested prefix sets of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepProfile {
    /// Swept vertices in order of decreasing value.
    pub order: Vec<usize>,
    /// `values[j]` is the objective of the first `j + 1` vertices.
    pub values: Vec<f64>,
    pub argmin: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub set: NodeSet,
    pub value: f64,
    pub profile: SweepProfile,
}

/// Sorts vertices by decreasing value (ties by ascending id) and returns the
/// prefix minimizing `objective`.
///
/// With `restrict_to_support` only vertices with nonzero value are swept.
/// The prefix containing every vertex of the graph is never considered.
pub fn sweep_cut(
    g: &Graph,
    x: &EmbeddingVector,
    objective: SweepObjective,
    restrict_to_support: bool,
) -> Result<SweepResult> {
    let n = g.num_nodes();
    if x.n != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: x.n,
        });
    }
    let mut entries = x.entries();
    if restrict_to_support {
        entries.retain(|&(_, v)| v != 0.0);
    }
    if let Some(&(i, v)) = entries.iter().find(|&&(_, v)| v.is_nan()) {
        return Err(Error::InvalidParameter(format!("embedding value at {i} is {v}")));
    }
    if !entries.iter().any(|&(_, v)| v.is_finite()) {
        return Err(Error::Degenerate("embedding has no finite entries to sweep".into()));
    }
    entries.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let order: Vec<usize> = entries.iter().map(|&(i, _)| i).collect();
    let prefixes = if order.len() == n { n - 1 } else { order.len() };
    if prefixes == 0 {
        return Err(Error::Degenerate("nothing to sweep".into()));
    }

    let total = g.total_volume();
    let mut rank: HashMap<usize, usize> = HashMap::with_capacity(prefixes);
    let mut stats = SetStats {
        cut: 0.0,
        volume: 0.0,
    };
    let mut values = Vec::with_capacity(prefixes);
    let mut argmin = 0;
    for (j, &v) in order.iter().take(prefixes).enumerate() {
        let inside: f64 = g
            .neighbors(v)
            .filter(|(u, _)| rank.contains_key(u))
            .map(|(_, w)| w)
            .sum();
        rank.insert(v, j);
        stats.cut += g.degree(v) - 2.0 * inside;
        stats.volume += g.degree(v);
        let value = objective.evaluate(&stats, total);
        if value < values.get(argmin).copied().unwrap_or(f64::INFINITY) {
            argmin = j;
        }
        values.push(value);
    }

    let set = NodeSet::new(order[..=argmin].to_vec());
    let value = objective.evaluate(&g.stats(&set)?, total);
    Ok(SweepResult {
        set,
        value,
        profile: SweepProfile {
            order,
            values,
            argmin,
        },
    })
}
