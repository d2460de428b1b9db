//! Max-flow / min-cut on real capacities.
//!
//! [`solve_maxflow`] runs Dinic's blocking-flow method on an explicit
//! [`FlowNetwork`]. [`solve_maxflow_local`] solves the same problem for a
//! reference cut graph without materializing it: it solves a sequence of
//! small networks in which every unexplored vertex is merged into the sink,
//! and only grows the explored region where the merged sink would have to
//! absorb more flow than the vertex's own sink arc can carry.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::refcut::AugmentedGraphSpec;

/// Residual capacities at or below `RESIDUAL_TOL * scale` count as saturated.
const RESIDUAL_TOL: f64 = 1e-12;
/// Relative tolerance of the per-solve duality check.
const DUALITY_TOL: f64 = 1e-9;

/// One directed arc of a [`FlowNetwork`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub capacity: f64,
}

/// A flow network over `graph_nodes` ordinary vertices plus a source and a
/// sink. Vertex ids `0..graph_nodes` are graph vertices; the source is
/// `graph_nodes` and the sink `graph_nodes + 1`.
///
/// Capacities may be `f64::INFINITY`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlowNetwork {
    graph_nodes: usize,
    arcs: Vec<FlowArc>,
}

impl FlowNetwork {
    pub fn new(graph_nodes: usize) -> Self {
        FlowNetwork {
            graph_nodes,
            arcs: Vec::new(),
        }
    }

    pub fn graph_nodes(&self) -> usize {
        self.graph_nodes
    }

    /// Total vertex count including source and sink.
    pub fn num_nodes(&self) -> usize {
        self.graph_nodes + 2
    }

    pub fn source(&self) -> usize {
        self.graph_nodes
    }

    pub fn sink(&self) -> usize {
        self.graph_nodes + 1
    }

    pub fn arcs(&self) -> &[FlowArc] {
        &self.arcs
    }

    pub fn add_arc(&mut self, from: usize, to: usize, capacity: f64) -> Result<()> {
        let n = self.num_nodes();
        if from >= n || to >= n {
            return Err(Error::InvalidSet {
                vertex: from.max(to),
                n,
            });
        }
        if from == to {
            return Err(Error::InvalidParameter(format!("arc loop on {from}")));
        }
        if capacity.is_nan() || capacity < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "arc capacity must be nonnegative, got {capacity}"
            )));
        }
        self.arcs.push(FlowArc { from, to, capacity });
        Ok(())
    }

    /// Adds two opposing arcs of capacity `capacity`.
    pub fn add_edge(&mut self, u: usize, v: usize, capacity: f64) -> Result<()> {
        self.add_arc(u, v, capacity)?;
        self.add_arc(v, u, capacity)
    }

    /// Capacity of the cut ({s} ∪ S, {t} ∪ S^c) where `s_side` lists graph
    /// vertices only.
    pub fn cut_capacity(&self, s_side: &NodeSet) -> f64 {
        let source = self.source();
        let on_source_side = |v: usize| v == source || (v < self.graph_nodes && s_side.contains(v));
        self.arcs
            .iter()
            .filter(|a| on_source_side(a.from) && !on_source_side(a.to))
            .map(|a| a.capacity)
            .sum()
    }
}

/// A maximum flow value together with the minimal source side of a min cut.
#[derive(Debug, Clone, PartialEq)]
pub struct CutSolution {
    pub flow_value: f64,
    /// Graph vertices reachable from the source in the final residual
    /// network. Never includes the source or sink themselves.
    pub s_side: NodeSet,
}

/// Output of [`solve_maxflow_local`].
#[derive(Debug, Clone, PartialEq)]
pub struct LocalCutSolution {
    pub solution: CutSolution,
    /// Graph vertices that were materialized during the solve.
    pub explored: NodeSet,
    /// Number of max-flow subproblems solved.
    pub rounds: usize,
}

impl LocalCutSolution {
    pub fn touched(&self) -> usize {
        self.explored.len()
    }
}

/// Dinic's algorithm on floating-point capacities. Arcs are stored in pairs
/// `(e, e ^ 1)`.
#[derive(Debug, Clone)]
pub(crate) struct Dinic {
    adjacency: Vec<Vec<usize>>,
    head: Vec<usize>,
    residual: Vec<f64>,
    original: Vec<f64>,
    level: Vec<i64>,
    cursor: Vec<usize>,
}

impl Dinic {
    pub fn new(n: usize) -> Self {
        Dinic {
            adjacency: vec![Vec::new(); n],
            head: Vec::new(),
            residual: Vec::new(),
            original: Vec::new(),
            level: vec![-1; n],
            cursor: vec![0; n],
        }
    }

    /// Adds arc `u -> v` with capacity `forward` and its partner `v -> u`
    /// with capacity `backward`. Returns the index of the forward arc.
    pub fn add_pair(&mut self, u: usize, v: usize, forward: f64, backward: f64) -> usize {
        let e = self.head.len();
        self.head.push(v);
        self.residual.push(forward);
        self.original.push(forward);
        self.adjacency[u].push(e);
        self.head.push(u);
        self.residual.push(backward);
        self.original.push(backward);
        self.adjacency[v].push(e + 1);
        e
    }

    fn tail(&self, e: usize) -> usize {
        self.head[e ^ 1]
    }

    /// Net flow currently carried by arc `e`.
    pub fn flow(&self, e: usize) -> f64 {
        self.original[e] - self.residual[e]
    }

    fn bfs(&mut self, s: usize, t: usize, eps: f64) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adjacency[u] {
                let v = self.head[e];
                if self.residual[e] > eps && self.level[v] < 0 {
                    self.level[v] = self.level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        self.level[t] >= 0
    }

    /// Pushes a blocking flow in the current level graph.
    fn blocking_flow(&mut self, s: usize, t: usize, eps: f64) -> f64 {
        self.cursor.iter_mut().for_each(|c| *c = 0);
        let mut total = 0.0;
        let mut path: Vec<usize> = Vec::new();
        let mut u = s;
        loop {
            if u == t {
                let bottleneck = path
                    .iter()
                    .map(|&e| self.residual[e])
                    .fold(f64::INFINITY, f64::min);
                for &e in &path {
                    self.residual[e] -= bottleneck;
                    self.residual[e ^ 1] += bottleneck;
                }
                total += bottleneck;
                // Retreat to the tail of the first saturated arc.
                let cut = path
                    .iter()
                    .position(|&e| self.residual[e] <= eps)
                    .unwrap_or(0);
                u = self.tail(path[cut]);
                path.truncate(cut);
                continue;
            }
            let mut advanced = false;
            while self.cursor[u] < self.adjacency[u].len() {
                let e = self.adjacency[u][self.cursor[u]];
                let v = self.head[e];
                if self.residual[e] > eps && self.level[v] == self.level[u] + 1 {
                    path.push(e);
                    u = v;
                    advanced = true;
                    break;
                }
                self.cursor[u] += 1;
            }
            if advanced {
                continue;
            }
            // Dead end: remove u from the level graph and back up.
            self.level[u] = -1;
            match path.pop() {
                None => return total,
                Some(e) => {
                    u = self.tail(e);
                    self.cursor[u] += 1;
                }
            }
        }
    }

    pub fn max_flow(&mut self, s: usize, t: usize, eps: f64) -> f64 {
        let mut total = 0.0;
        while self.bfs(s, t, eps) {
            total += self.blocking_flow(s, t, eps);
        }
        total
    }

    pub fn reachable(&self, s: usize, eps: f64) -> Vec<bool> {
        let mut seen = vec![false; self.adjacency.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adjacency[u] {
                let v = self.head[e];
                if self.residual[e] > eps && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Original capacity leaving the vertex set `side`.
    pub fn cut_capacity(&self, side: &[bool]) -> f64 {
        (0..self.head.len())
            .filter(|&e| side[self.tail(e)] && !side[self.head[e]])
            .map(|e| self.original[e])
            .sum()
    }
}

/// Finite capacities summed, and the largest finite capacity.
fn capacity_scale(caps: impl Iterator<Item = f64>) -> (f64, f64) {
    caps.filter(|c| c.is_finite())
        .fold((0.0, 0.0), |(sum, max), c| (sum + c, f64::max(max, c)))
}

fn check_duality(flow: f64, cut: f64) -> Result<()> {
    if (flow - cut).abs() <= DUALITY_TOL * cut.abs().max(1.0) {
        Ok(())
    } else {
        Err(Error::Duality { flow, cut })
    }
}

/// Solves max-flow on an explicit network and returns the minimal min cut.
pub fn solve_maxflow(net: &FlowNetwork) -> Result<CutSolution> {
    let (finite_total, finite_max) = capacity_scale(net.arcs.iter().map(|a| a.capacity));
    let sentinel = 1.0 + finite_total;
    let eps = RESIDUAL_TOL * finite_max.max(1.0);
    let mut dinic = Dinic::new(net.num_nodes());
    for arc in &net.arcs {
        let cap = if arc.capacity.is_infinite() {
            sentinel
        } else {
            arc.capacity
        };
        dinic.add_pair(arc.from, arc.to, cap, 0.0);
    }
    let (s, t) = (net.source(), net.sink());
    let flow_value = dinic.max_flow(s, t, eps);
    if flow_value >= sentinel * (1.0 - RESIDUAL_TOL) {
        return Err(Error::UnboundedFlow);
    }
    let side = dinic.reachable(s, eps);
    check_duality(flow_value, dinic.cut_capacity(&side))?;
    let s_side = (0..net.graph_nodes).filter(|&v| side[v]).collect();
    Ok(CutSolution { flow_value, s_side })
}

/// Solves the min-cut problem of the reference cut graph described by `spec`
/// while materializing only a neighborhood of the seed.
///
/// The explored region starts as `warm_start ∪ supp(h)`. The result is the
/// same cut as [`solve_maxflow`] on [`crate::refcut::materialize`] would give.
pub fn solve_maxflow_local(
    spec: &AugmentedGraphSpec,
    g: &Graph,
    warm_start: &NodeSet,
) -> Result<LocalCutSolution> {
    g.validate_set(warm_start)?;
    let source_total: f64 = spec.source_capacity_total();
    if !source_total.is_finite() {
        return Err(Error::InvalidParameter(
            "local max-flow requires finite total source capacity".into(),
        ));
    }

    let mut explored: Vec<usize> = warm_start.iter().chain(spec.seed_support()).collect();
    explored.sort_unstable();
    explored.dedup();
    let mut rounds = 0;

    loop {
        rounds += 1;
        let index: HashMap<usize, usize> =
            explored.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let m = explored.len();
        let (s, t) = (m, m + 1);

        // (capacity, forward, backward, boundary-target)
        let mut pairs: Vec<(usize, usize, f64, f64, Option<usize>)> = Vec::new();
        for (k, &u) in explored.iter().enumerate() {
            let a = spec.source_weight(u);
            if a > 0.0 {
                pairs.push((s, k, a, 0.0, None));
            }
            let b = spec.sink_weight(g, u);
            if b > 0.0 {
                pairs.push((k, t, b, 0.0, None));
            }
            for (v, w) in g.neighbors(u) {
                let cap = spec.gamma * w;
                match index.get(&v) {
                    Some(&kv) if u < v => pairs.push((k, kv, cap, cap, None)),
                    Some(_) => {}
                    None => pairs.push((k, t, cap, 0.0, Some(v))),
                }
            }
        }
        let (finite_total, finite_max) =
            capacity_scale(pairs.iter().flat_map(|p| [p.2, p.3]));
        let sentinel = 1.0 + finite_total;
        let eps = RESIDUAL_TOL * finite_max.max(1.0);

        let mut dinic = Dinic::new(m + 2);
        let mut boundary: Vec<(usize, usize)> = Vec::new();
        for &(u, v, fwd, bwd, outside) in &pairs {
            let fwd = if fwd.is_infinite() { sentinel } else { fwd };
            let e = dinic.add_pair(u, v, fwd, bwd);
            if let Some(x) = outside {
                boundary.push((e, x));
            }
        }
        let flow_value = dinic.max_flow(s, t, eps);

        let mut inflow: HashMap<usize, f64> = HashMap::new();
        for &(e, x) in &boundary {
            *inflow.entry(x).or_insert(0.0) += dinic.flow(e);
        }
        let mut violators: Vec<usize> = inflow
            .into_iter()
            .filter(|&(x, f)| {
                let cap = spec.sink_weight(g, x);
                f > cap + eps + RESIDUAL_TOL * cap
            })
            .map(|(x, _)| x)
            .collect();

        if violators.is_empty() {
            let side = dinic.reachable(s, eps);
            check_duality(flow_value, dinic.cut_capacity(&side))?;
            let s_side = (0..m).filter(|&k| side[k]).map(|k| explored[k]).collect();
            return Ok(LocalCutSolution {
                solution: CutSolution { flow_value, s_side },
                explored: NodeSet::new(explored),
                rounds,
            });
        }
        violators.sort_unstable();
        log::debug!(
            "local max-flow round {rounds}: {} explored, adding {}",
            m,
            violators.len()
        );
        explored.extend(violators);
        explored.sort_unstable();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::refcut::{materialize, AugmentedGraphSpec};

    #[test]
    fn single_path() {
        // s -> a -> t with capacities 2, 1
        let mut net = FlowNetwork::new(1);
        net.add_arc(net.source(), 0, 2.0).unwrap();
        net.add_arc(0, net.sink(), 1.0).unwrap();
        let sol = solve_maxflow(&net).unwrap();
        assert_eq!(sol.flow_value, 1.0);
        assert_eq!(sol.s_side.as_slice(), &[0]);
    }

    #[test]
    fn disjoint_paths_add_up() {
        let mut net = FlowNetwork::new(2);
        let (s, t) = (net.source(), net.sink());
        net.add_arc(s, 0, 1.0).unwrap();
        net.add_arc(0, t, 1.0).unwrap();
        net.add_arc(s, 1, 3.0).unwrap();
        net.add_arc(1, t, 3.0).unwrap();
        assert_eq!(solve_maxflow(&net).unwrap().flow_value, 4.0);
    }

    #[test]
    fn dumbbell_split_by_infinite_terminals() {
        let g = generators::dumbbell();
        let mut net = FlowNetwork::new(6);
        for (u, v, w) in g.edges() {
            net.add_edge(u, v, w).unwrap();
        }
        for v in 0..3 {
            net.add_arc(net.source(), v, f64::INFINITY).unwrap();
        }
        for v in 3..6 {
            net.add_arc(v, net.sink(), f64::INFINITY).unwrap();
        }
        let sol = solve_maxflow(&net).unwrap();
        assert!((sol.flow_value - 1.0).abs() < 1e-12);
        assert_eq!(sol.s_side.as_slice(), &[0, 1, 2]);
    }

    #[test]
    fn infinite_path_is_unbounded() {
        let mut net = FlowNetwork::new(1);
        net.add_arc(net.source(), 0, f64::INFINITY).unwrap();
        net.add_arc(0, net.sink(), f64::INFINITY).unwrap();
        assert!(matches!(solve_maxflow(&net), Err(Error::UnboundedFlow)));
    }

    #[test]
    fn no_path_gives_empty_side_and_zero_flow() {
        let mut net = FlowNetwork::new(2);
        net.add_arc(net.source(), 0, 1.0).unwrap();
        net.add_arc(1, net.sink(), 1.0).unwrap();
        let sol = solve_maxflow(&net).unwrap();
        assert_eq!(sol.flow_value, 0.0);
        assert_eq!(sol.s_side.as_slice(), &[0]);
    }

    #[test]
    fn rejects_bad_arcs() {
        let mut net = FlowNetwork::new(2);
        assert!(net.add_arc(0, 5, 1.0).is_err());
        assert!(net.add_arc(0, 1, -1.0).is_err());
        assert!(net.add_arc(1, 1, 1.0).is_err());
    }

    #[test]
    fn local_solve_with_full_warm_start_matches_full_solve() {
        let g = generators::clique_ring(6, 5);
        let r = generators::ring_clique(2, 5);
        let spec = AugmentedGraphSpec::from_seed(&g, &r, 0.1, 0.15, 1.0).unwrap();
        let full = solve_maxflow(&materialize(&spec, &g)).unwrap();
        let local = solve_maxflow_local(&spec, &g, &NodeSet::full(g.num_nodes())).unwrap();
        assert_eq!(local.rounds, 1);
        assert_eq!(local.touched(), g.num_nodes());
        assert_eq!(local.solution.s_side, full.s_side);
        assert!((local.solution.flow_value - full.flow_value).abs() < 1e-9);
    }
}
