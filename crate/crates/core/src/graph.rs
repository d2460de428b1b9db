//! Undirected weighted graphs in compressed adjacency form, vertex sets, and
//! the cut / volume / conductance algebra built on top of them.
//!
//! Set functionals iterate only over the members of a set and their
//! neighbors, so evaluating them on a small set never touches the rest of the
//! graph.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Relative tolerance used when deciding the sign of a ratio denominator.
pub(crate) const DENOMINATOR_TOL: f64 = 1e-12;

/// Immutable undirected graph with positive edge weights.
///
/// Neighbor lists are sorted by vertex id. Every edge is stored in both
/// directions with the same weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
    total_volume: f64,
}

impl Graph {
    /// Builds a graph on `n` vertices from undirected edges `(u, v, w)`.
    ///
    /// Repeated edges (in either orientation) have their weights summed.
    /// Self-loops, non-positive weights and disconnected graphs are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut arcs: Vec<(usize, usize, f64)> = Vec::new();
        for (u, v, w) in edges {
            if u >= n {
                return Err(Error::InvalidSet { vertex: u, n });
            }
            if v >= n {
                return Err(Error::InvalidSet { vertex: v, n });
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop on vertex {u}")));
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) has non-positive or non-finite weight {w}"
                )));
            }
            arcs.push((u, v, w));
            arcs.push((v, u, w));
        }
        if arcs.is_empty() {
            return Err(Error::EmptyInput);
        }
        arcs.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::with_capacity(arcs.len());
        let mut weights: Vec<f64> = Vec::with_capacity(arcs.len());
        let mut last: Option<(usize, usize)> = None;
        for (u, v, w) in arcs {
            if last == Some((u, v)) {
                *weights.last_mut().expect("merged arc") += w;
                continue;
            }
            last = Some((u, v));
            offsets[u + 1] += 1;
            targets.push(v);
            weights.push(w);
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let degrees: Vec<f64> = (0..n)
            .map(|i| weights[offsets[i]..offsets[i + 1]].iter().sum())
            .collect();
        let total_volume = degrees.iter().sum();
        let g = Graph {
            offsets,
            targets,
            weights,
            degrees,
            total_volume,
        };
        if let Some(unreached) = g.first_unreachable() {
            return Err(Error::Disconnected {
                reached: "0".to_string(),
                unreached: unreached.to_string(),
            });
        }
        Ok(g)
    }

    /// Vertex not reachable from vertex 0, if any.
    pub(crate) fn first_unreachable(&self) -> Option<usize> {
        let n = self.num_nodes();
        if n == 0 {
            return None;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &v in self.neighbor_ids(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    pub fn num_nodes(&self) -> usize {
        self.degrees.len()
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn degree(&self, v: usize) -> f64 {
        self.degrees[v]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// vol(V), the sum of all degrees.
    pub fn total_volume(&self) -> f64 {
        self.total_volume
    }

    pub fn neighbor_ids(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn neighbor_weights(&self, v: usize) -> &[f64] {
        &self.weights[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Iterator over `(neighbor, weight)` pairs of `v`, sorted by neighbor id.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.neighbor_ids(v)
            .iter()
            .copied()
            .zip(self.neighbor_weights(v).iter().copied())
    }

    /// Iterator over undirected edges `(u, v, w)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.num_nodes())
            .flat_map(move |u| self.neighbors(u).map(move |(v, w)| (u, v, w)))
            .filter(|&(u, v, _)| u < v)
    }

    /// Weight of edge `(u, v)`, or 0 when absent.
    pub fn edge_weight(&self, u: usize, v: usize) -> f64 {
        match self.neighbor_ids(u).binary_search(&v) {
            Ok(k) => self.neighbor_weights(u)[k],
            Err(_) => 0.0,
        }
    }

    pub fn validate_set(&self, s: &NodeSet) -> Result<()> {
        let n = self.num_nodes();
        match s.members.last() {
            Some(&v) if v >= n => Err(Error::InvalidSet { vertex: v, n }),
            _ => Ok(()),
        }
    }

    pub(crate) fn volume_unchecked(&self, s: &NodeSet) -> f64 {
        s.iter().map(|v| self.degrees[v]).sum()
    }

    pub(crate) fn cut_unchecked(&self, s: &NodeSet) -> f64 {
        let mut cut = 0.0;
        for u in s.iter() {
            for (v, w) in self.neighbors(u) {
                if !s.contains(v) {
                    cut += w;
                }
            }
        }
        cut
    }

    /// vol(S) = sum of degrees in S.
    pub fn volume(&self, s: &NodeSet) -> Result<f64> {
        self.validate_set(s)?;
        Ok(self.volume_unchecked(s))
    }

    /// cut(S) = total weight of edges with exactly one endpoint in S.
    pub fn cut(&self, s: &NodeSet) -> Result<f64> {
        self.validate_set(s)?;
        Ok(self.cut_unchecked(s))
    }

    /// Cut and volume of `s` in one pass.
    pub fn stats(&self, s: &NodeSet) -> Result<SetStats> {
        self.validate_set(s)?;
        Ok(SetStats {
            cut: self.cut_unchecked(s),
            volume: self.volume_unchecked(s),
        })
    }

    /// cut(S) / min(vol(S), vol(S^c)); infinite when either side has no volume.
    pub fn conductance(&self, s: &NodeSet) -> Result<f64> {
        Ok(self.stats(s)?.conductance(self.total_volume))
    }

    /// cut(S) vol(V) / (vol(S) vol(S^c)); infinite on degenerate volumes.
    pub fn expansion(&self, s: &NodeSet) -> Result<f64> {
        Ok(self.stats(s)?.expansion(self.total_volume))
    }

    /// Seed-penalized conductance used by Flow-Improve:
    /// cut(S) / (vol(S ∩ R) - θ vol(S ∩ R^c)) with θ = vol(R)/vol(R^c).
    pub fn phi_r(&self, s: &NodeSet, r: &NodeSet) -> Result<f64> {
        self.phi_r_kappa(s, r, 1.0)
    }

    /// Local-Flow-Improve's strengthened variant of [`Graph::phi_r`], with the
    /// outside-of-seed penalty scaled by `kappa >= 1` (which may be infinite).
    pub fn phi_r_kappa(&self, s: &NodeSet, r: &NodeSet, kappa: f64) -> Result<f64> {
        if kappa.is_nan() || kappa < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "kappa must be >= 1, got {kappa}"
            )));
        }
        self.validate_set(s)?;
        let seed = ReferenceSet::new(self, r)?;
        Ok(seed.ratio(self, s, seed.theta * kappa))
    }

    /// y = L x with L = D - A.
    pub fn laplacian_apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.num_nodes();
        if x.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let mut y = vec![0.0; n];
        self.laplacian_apply_into(x, &mut y);
        Ok(y)
    }

    pub(crate) fn laplacian_apply_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = self.degrees[i] * x[i];
            for (j, w) in self.neighbors(i) {
                acc -= w * x[j];
            }
            *yi = acc;
        }
    }
}

/// Cut and volume of one vertex set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetStats {
    pub cut: f64,
    pub volume: f64,
}

impl SetStats {
    pub fn conductance(&self, total_volume: f64) -> f64 {
        let denom = self.volume.min(total_volume - self.volume);
        if denom <= DENOMINATOR_TOL * total_volume {
            f64::INFINITY
        } else {
            self.cut / denom
        }
    }

    pub fn expansion(&self, total_volume: f64) -> f64 {
        let other = total_volume - self.volume;
        if self.volume <= DENOMINATOR_TOL * total_volume || other <= DENOMINATOR_TOL * total_volume
        {
            f64::INFINITY
        } else {
            self.cut * total_volume / (self.volume * other)
        }
    }
}

/// A seed set together with vol(R) and θ = vol(R)/vol(R^c).
#[derive(Debug, Clone)]
pub struct ReferenceSet<'a> {
    pub set: &'a NodeSet,
    pub volume: f64,
    pub theta: f64,
}

impl<'a> ReferenceSet<'a> {
    /// Validates a seed set for the seed-penalized objectives.
    pub fn new(g: &Graph, r: &'a NodeSet) -> Result<Self> {
        g.validate_set(r)?;
        if r.is_empty() {
            return Err(Error::EmptySeed);
        }
        let volume = g.volume_unchecked(r);
        let half = g.total_volume() / 2.0;
        if g.total_volume() - volume <= DENOMINATOR_TOL * g.total_volume() {
            return Err(Error::SeedTooLarge {
                seed_volume: volume,
                half_volume: half,
            });
        }
        if volume > half * (1.0 + DENOMINATOR_TOL) {
            log::warn!("seed volume {volume} exceeds half the graph volume {half}");
        }
        Ok(ReferenceSet {
            set: r,
            volume,
            theta: volume / (g.total_volume() - volume),
        })
    }

    /// (vol(S ∩ R), vol(S ∩ R^c)).
    pub fn split_volume(&self, g: &Graph, s: &NodeSet) -> (f64, f64) {
        let mut inside = 0.0;
        let mut outside = 0.0;
        for v in s.iter() {
            if self.set.contains(v) {
                inside += g.degree(v);
            } else {
                outside += g.degree(v);
            }
        }
        (inside, outside)
    }

    /// cut(S) / (vol(S ∩ R) - penalty vol(S ∩ R^c)), infinite when the
    /// denominator is not positive. `penalty` may be infinite.
    pub fn ratio(&self, g: &Graph, s: &NodeSet, penalty: f64) -> f64 {
        let (inside, outside) = self.split_volume(g, s);
        let denom = if outside == 0.0 {
            inside
        } else {
            inside - penalty * outside
        };
        if denom <= DENOMINATOR_TOL * g.total_volume() {
            f64::INFINITY
        } else {
            g.cut_unchecked(s) / denom
        }
    }
}

/// A set of distinct vertex ids, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet {
    members: Vec<usize>,
}

impl NodeSet {
    /// Sorts and deduplicates `members`.
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        NodeSet { members }
    }

    pub fn empty() -> Self {
        NodeSet::default()
    }

    /// All vertices `0..n`.
    pub fn full(n: usize) -> Self {
        NodeSet {
            members: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    /// Vertices of `0..n` not in this set.
    pub fn complement(&self, n: usize) -> NodeSet {
        NodeSet {
            members: (0..n).filter(|&v| !self.contains(v)).collect(),
        }
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        NodeSet::new(self.iter().chain(other.iter()).collect())
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        NodeSet::new(iter.into_iter().collect())
    }
}

impl From<Vec<usize>> for NodeSet {
    fn from(members: Vec<usize>) -> Self {
        NodeSet::new(members)
    }
}
