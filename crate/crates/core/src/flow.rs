//! Flow-based cut improvement.
//!
//! All three methods share one loop: starting from `W = R`, build the
//! reference cut graph from parameters chosen from `W`, take the source side
//! of its minimum cut as the next `W`, and stop as soon as the objective no
//! longer strictly decreases. The [`MetaInstantiation`] trait supplies the
//! objective and the parameter rule.
//!
//! | method              | objective                                     | α, β, γ                     |
//! |---------------------|-----------------------------------------------|-----------------------------|
//! | [`Mqi`]             | cut(S)/vol(S), S ⊆ R                          | cut(W), ∞, vol(W)           |
//! | [`FlowImprove`]     | cut(S)/(vol(S∩R) − θ vol(S∩R^c))              | φ(W), θφ(W), 1              |
//! | [`LocalFlowImprove`]| cut(S)/(vol(S∩R) − ε vol(S∩R^c)), ε = θκ      | φ(W), εφ(W), 1              |

use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet, ReferenceSet};
use crate::maxflow::{solve_maxflow, solve_maxflow_local};
use crate::refcut::{materialize, AugmentedGraphSpec};
use crate::result::ClusterResult;

pub const DEFAULT_MAX_ITERS: usize = 100;

/// Relative decrease required to accept a new working set.
const ACCEPT_TOL: f64 = 1e-12;

/// Whether min-cut problems are solved on the whole graph or grown locally
/// from the seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locality {
    Full,
    Local,
}

/// Reference cut graph weights for one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutParameters {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// One instantiation of the local flow meta-algorithm.
pub trait MetaInstantiation {
    fn name(&self) -> &'static str;

    fn objective_name(&self) -> &'static str;

    /// The objective being decreased, evaluated on a working set.
    fn objective(&self, g: &Graph, seed: &ReferenceSet<'_>, w: &NodeSet) -> f64;

    /// Reference cut graph weights given the current working set and its
    /// objective value.
    fn parameters(&self, g: &Graph, seed: &ReferenceSet<'_>, w: &NodeSet, objective: f64)
        -> CutParameters;

    fn locality(&self) -> Locality;
}

/// Best subset of the seed under cut(S)/vol(S).
#[derive(Debug, Clone, Copy, Default)]
pub struct Mqi;

impl MetaInstantiation for Mqi {
    fn name(&self) -> &'static str {
        "mqi"
    }

    fn objective_name(&self) -> &'static str {
        "cut_over_volume"
    }

    fn objective(&self, g: &Graph, seed: &ReferenceSet<'_>, w: &NodeSet) -> f64 {
        // Only subsets of R are feasible.
        seed.ratio(g, w, f64::INFINITY)
    }

    fn parameters(&self, g: &Graph, _: &ReferenceSet<'_>, w: &NodeSet, _: f64) -> CutParameters {
        CutParameters {
            alpha: g.cut_unchecked(w),
            beta: f64::INFINITY,
            gamma: g.volume_unchecked(w),
        }
    }

    fn locality(&self) -> Locality {
        Locality::Local
    }
}

/// Global minimizer of the seed-penalized conductance φ_R.
#[derive(Debug, Clone, Copy, Default)]
pub struct FlowImprove;

impl MetaInstantiation for FlowImprove {
    fn name(&self) -> &'static str {
        "flow-improve"
    }

    fn objective_name(&self) -> &'static str {
        "phi_r"
    }

    fn objective(&self, g: &Graph, seed: &ReferenceSet<'_>, w: &NodeSet) -> f64 {
        seed.ratio(g, w, seed.theta)
    }

    fn parameters(&self, _: &Graph, seed: &ReferenceSet<'_>, _: &NodeSet, objective: f64) -> CutParameters {
        CutParameters {
            alpha: objective,
            beta: seed.theta * objective,
            gamma: 1.0,
        }
    }

    fn locality(&self) -> Locality {
        Locality::Full
    }
}

/// How the extra outside-of-seed penalty of Local-Flow-Improve is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Penalty {
    /// ε = θ + δ with δ >= 0.
    Delta(f64),
    /// ε = θκ with κ >= 1 (may be infinite).
    Kappa(f64),
}

/// Flow-Improve with the outside-of-seed penalty raised from θ to ε, which
/// makes each min-cut problem strongly local.
#[derive(Debug, Clone, Copy)]
pub struct LocalFlowImprove {
    pub penalty: Penalty,
}

impl LocalFlowImprove {
    pub fn with_delta(delta: f64) -> Result<Self> {
        if delta.is_nan() || delta < 0.0 {
            return Err(Error::InvalidParameter(format!("delta must be >= 0, got {delta}")));
        }
        Ok(LocalFlowImprove {
            penalty: Penalty::Delta(delta),
        })
    }

    pub fn with_kappa(kappa: f64) -> Result<Self> {
        if kappa.is_nan() || kappa < 1.0 {
            return Err(Error::InvalidParameter(format!("kappa must be >= 1, got {kappa}")));
        }
        Ok(LocalFlowImprove {
            penalty: Penalty::Kappa(kappa),
        })
    }

    /// The effective penalty ε for seed `seed`.
    pub fn epsilon(&self, seed: &ReferenceSet<'_>) -> f64 {
        match self.penalty {
            Penalty::Delta(delta) => seed.theta + delta,
            Penalty::Kappa(kappa) => seed.theta * kappa,
        }
    }
}

impl MetaInstantiation for LocalFlowImprove {
    fn name(&self) -> &'static str {
        "local-flow-improve"
    }

    fn objective_name(&self) -> &'static str {
        "phi_r_kappa"
    }

    fn objective(&self, g: &Graph, seed: &ReferenceSet<'_>, w: &NodeSet) -> f64 {
        seed.ratio(g, w, self.epsilon(seed))
    }

    fn parameters(&self, _: &Graph, seed: &ReferenceSet<'_>, _: &NodeSet, objective: f64) -> CutParameters {
        CutParameters {
            alpha: objective,
            beta: self.epsilon(seed) * objective,
            gamma: 1.0,
        }
    }

    fn locality(&self) -> Locality {
        Locality::Local
    }
}

/// A finished meta-algorithm run.
#[derive(Debug, Clone)]
pub struct MetaRun {
    pub result: ClusterResult,
    /// Objective of every accepted working set, starting with R.
    pub trace: Vec<f64>,
    /// Whether the run stopped because no improving set was found (as opposed
    /// to hitting the iteration cap).
    pub converged: bool,
}

/// Runs the local flow meta-algorithm and returns the final working set.
pub fn local_flow_meta(
    g: &Graph,
    r: &NodeSet,
    inst: &dyn MetaInstantiation,
    max_iters: usize,
) -> Result<ClusterResult> {
    run_meta(g, r, inst, max_iters).map(|run| run.result)
}

/// [`local_flow_meta`] with the objective trace.
pub fn run_meta(
    g: &Graph,
    r: &NodeSet,
    inst: &dyn MetaInstantiation,
    max_iters: usize,
) -> Result<MetaRun> {
    let start = Instant::now();
    let seed = ReferenceSet::new(g, r)?;
    if max_iters == 0 {
        return Err(Error::InvalidParameter("max_iters must be positive".into()));
    }

    let mut current = r.clone();
    let mut objective = inst.objective(g, &seed, &current);
    let mut trace = vec![objective];
    let mut explored = r.clone();
    let mut solves = 0;
    let mut converged = false;

    while solves < max_iters {
        let params = inst.parameters(g, &seed, &current, objective);
        let spec = AugmentedGraphSpec::from_seed(g, r, params.alpha, params.beta, params.gamma)?;
        let candidate = match inst.locality() {
            Locality::Full => {
                explored = NodeSet::full(g.num_nodes());
                solve_maxflow(&materialize(&spec, g))?.s_side
            }
            Locality::Local => {
                let local = solve_maxflow_local(&spec, g, &explored)?;
                explored = local.explored;
                local.solution.s_side
            }
        };
        solves += 1;
        if candidate.is_empty() {
            converged = true;
            break;
        }
        let next = inst.objective(g, &seed, &candidate);
        if next < objective * (1.0 - ACCEPT_TOL) {
            log::debug!("{}: iteration {solves} objective {objective} -> {next}", inst.name());
            current = candidate;
            objective = next;
            trace.push(objective);
        } else {
            converged = true;
            break;
        }
    }

    let result = ClusterResult::new(g, current, inst.objective_name(), objective)?
        .with_iterations(solves)
        .with_touched(explored.len())
        .with_runtime(start.elapsed())
        .with_extra("theta", seed.theta);
    Ok(MetaRun {
        result,
        trace,
        converged,
    })
}

/// Best subset S ⊆ R under cut(S)/vol(S).
pub fn mqi(g: &Graph, r: &NodeSet) -> Result<ClusterResult> {
    local_flow_meta(g, r, &Mqi, DEFAULT_MAX_ITERS)
}

/// Global minimizer of φ_R(S) over all S ⊆ V.
pub fn flow_improve(g: &Graph, r: &NodeSet) -> Result<ClusterResult> {
    local_flow_meta(g, r, &FlowImprove, DEFAULT_MAX_ITERS)
}

/// Strongly local Flow-Improve with ε = vol(R)/vol(R^c) + δ.
pub fn local_flow_improve(g: &Graph, r: &NodeSet, delta: f64) -> Result<ClusterResult> {
    let inst = LocalFlowImprove::with_delta(delta)?;
    let seed = ReferenceSet::new(g, r)?;
    let epsilon = inst.epsilon(&seed);
    Ok(local_flow_meta(g, r, &inst, DEFAULT_MAX_ITERS)?
        .with_extra("epsilon", epsilon)
        .with_extra("kappa", epsilon / seed.theta))
}

/// Local-Flow-Improve parametrized directly by κ >= 1.
pub fn local_flow_improve_kappa(g: &Graph, r: &NodeSet, kappa: f64) -> Result<ClusterResult> {
    let inst = LocalFlowImprove::with_kappa(kappa)?;
    let seed = ReferenceSet::new(g, r)?;
    let epsilon = inst.epsilon(&seed);
    Ok(local_flow_meta(g, r, &inst, DEFAULT_MAX_ITERS)?
        .with_extra("epsilon", epsilon)
        .with_extra("kappa", kappa))
}

/// Upper bound vol(R)(1 + 2/ε) + cut(R) on the volume of a
/// Local-Flow-Improve output, with ε = θ + δ.
pub fn lfi_volume_bound(g: &Graph, r: &NodeSet, delta: f64) -> Result<f64> {
    let seed = ReferenceSet::new(g, r)?;
    let epsilon = seed.theta + delta;
    Ok(seed.volume * (1.0 + 2.0 / epsilon) + g.cut_unchecked(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn set(ids: &[usize]) -> NodeSet {
        NodeSet::new(ids.to_vec())
    }

    #[test]
    fn mqi_on_dumbbell() {
        let g = generators::dumbbell();
        let out = mqi(&g, &set(&[0, 1, 2, 3])).unwrap();
        assert_eq!(out.set, set(&[0, 1, 2]));
        assert!((out.objective - 1.0 / 7.0).abs() < 1e-12);
        let run = run_meta(&g, &set(&[0, 1, 2, 3]), &Mqi, 50).unwrap();
        assert!(run.converged);
        assert!(run.trace.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn mqi_singleton_seed() {
        let g = generators::dumbbell();
        let out = mqi(&g, &set(&[4])).unwrap();
        assert_eq!(out.set, set(&[4]));
        assert_eq!(out.objective, 1.0);
        assert_eq!(out.iterations, 1);
    }

    #[test]
    fn mqi_keeps_optimal_clique() {
        let g = generators::clique_ring(8, 6);
        let r = generators::ring_clique(3, 6);
        let out = mqi(&g, &r).unwrap();
        assert_eq!(out.set, r);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.touched_nodes, 6);
    }

    #[test]
    fn flow_improve_on_dumbbell() {
        let g = generators::dumbbell();
        let r = set(&[0, 1, 2, 3]);
        let out = flow_improve(&g, &r).unwrap();
        assert_eq!(out.set, set(&[0, 1, 2]));
        assert!((out.objective - 1.0 / 7.0).abs() < 1e-12);
        assert!(out.conductance <= out.objective + 1e-12);
        assert_eq!(out.touched_nodes, 6);
    }

    #[test]
    fn flow_improve_grows_partial_clique() {
        let g = generators::clique_ring(8, 6);
        let r = set(&[12, 13, 14, 15]);
        let out = flow_improve(&g, &r).unwrap();
        assert_eq!(out.set, generators::ring_clique(2, 6));
    }

    #[test]
    fn local_flow_improve_limits_on_dumbbell() {
        let g = generators::dumbbell();
        let r = set(&[0, 1, 2, 3]);
        assert_eq!(local_flow_improve(&g, &r, 0.0).unwrap().set, set(&[0, 1, 2]));
        assert_eq!(local_flow_improve(&g, &r, 1e9).unwrap().set, set(&[0, 1, 2]));
    }

    #[test]
    fn parameter_validation() {
        let g = generators::dumbbell();
        let r = set(&[0, 1]);
        assert!(local_flow_improve(&g, &r, -1.0).is_err());
        assert!(local_flow_improve_kappa(&g, &r, 0.5).is_err());
        assert!(matches!(mqi(&g, &NodeSet::empty()), Err(Error::EmptySeed)));
        assert!(matches!(
            flow_improve(&g, &NodeSet::full(6)),
            Err(Error::SeedTooLarge { .. })
        ));
    }
}
