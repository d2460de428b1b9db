//! The reference cut graph.
//!
//! Given a graph and parameters (α, β, γ, h, g) the reference cut graph adds
//! a source joined to every vertex `i` with weight `α h_i`, a sink joined to
//! every vertex with weight `β (g_i - h_i)`, and scales every original edge
//! by `γ`. An [`AugmentedGraphSpec`] is the canonical representation; it is only turned
//! into an explicit [`FlowNetwork`] by [`materialize`] or, piecewise, inside
//! [`crate::maxflow::solve_maxflow_local`].

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::maxflow::FlowNetwork;

/// The reference vector `g` of the sink attachments.
#[derive(Debug, Clone, PartialEq)]
pub enum SinkReference {
    /// `g = d`, the degree vector.
    Degrees,
    /// An explicit dense vector over all vertices.
    Explicit(Vec<f64>),
}

/// Parameters of a reference cut graph.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedGraphSpec {
    pub alpha: f64,
    /// May be `f64::INFINITY`.
    pub beta: f64,
    pub gamma: f64,
    /// Sparse `h`, sorted by vertex, strictly positive entries only.
    h: Vec<(usize, f64)>,
    g: SinkReference,
}

impl AugmentedGraphSpec {
    pub fn new(
        graph: &Graph,
        alpha: f64,
        beta: f64,
        gamma: f64,
        h: Vec<(usize, f64)>,
        g: SinkReference,
    ) -> Result<Self> {
        if alpha.is_nan() || alpha < 0.0 || alpha.is_infinite() {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite and >= 0, got {alpha}"
            )));
        }
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::InvalidParameter(format!("beta must be >= 0, got {beta}")));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must be > 0, got {gamma}")));
        }
        let n = graph.num_nodes();
        if let SinkReference::Explicit(values) = &g {
            if values.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: values.len(),
                });
            }
            if values.iter().any(|&x| x.is_nan() || x < 0.0) {
                return Err(Error::InvalidParameter("g must be nonnegative".into()));
            }
        }
        let mut h: Vec<(usize, f64)> = h.into_iter().filter(|&(_, x)| x != 0.0).collect();
        h.sort_by_key(|&(i, _)| i);
        if h.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("h has repeated entries".into()));
        }
        if h.is_empty() {
            return Err(Error::EmptySeed);
        }
        let mut spec = AugmentedGraphSpec {
            alpha,
            beta,
            gamma,
            h: Vec::new(),
            g,
        };
        for &(i, x) in &h {
            if i >= n {
                return Err(Error::InvalidSet { vertex: i, n });
            }
            if x.is_nan() || x < 0.0 {
                return Err(Error::InvalidParameter(format!("h[{i}] = {x} is negative")));
            }
            let gi = spec.reference(graph, i);
            if x > gi * (1.0 + 1e-12) {
                return Err(Error::InvalidParameter(format!(
                    "g - h must be nonnegative; h[{i}] = {x} exceeds g[{i}] = {gi}"
                )));
            }
        }
        spec.h = h;
        Ok(spec)
    }

    /// The seeded setting used by the flow methods: `h = d_R`, `g = d`.
    pub fn from_seed(graph: &Graph, r: &NodeSet, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        graph.validate_set(r)?;
        let h = r.iter().map(|v| (v, graph.degree(v))).collect();
        AugmentedGraphSpec::new(graph, alpha, beta, gamma, h, SinkReference::Degrees)
    }

    pub fn h(&self, i: usize) -> f64 {
        match self.h.binary_search_by_key(&i, |&(j, _)| j) {
            Ok(k) => self.h[k].1,
            Err(_) => 0.0,
        }
    }

    pub fn h_entries(&self) -> &[(usize, f64)] {
        &self.h
    }

    pub fn seed_support(&self) -> impl Iterator<Item = usize> + '_ {
        self.h.iter().map(|&(i, _)| i)
    }

    pub fn reference(&self, graph: &Graph, i: usize) -> f64 {
        match &self.g {
            SinkReference::Degrees => graph.degree(i),
            SinkReference::Explicit(values) => values[i],
        }
    }

    /// `g_i - h_i`, clamped at zero.
    pub fn sink_reference(&self, graph: &Graph, i: usize) -> f64 {
        let gi = self.reference(graph, i);
        let z = gi - self.h(i);
        if z <= 1e-12 * gi {
            0.0
        } else {
            z
        }
    }

    /// Weight of the arc from the source to `i`.
    pub fn source_weight(&self, i: usize) -> f64 {
        let hi = self.h(i);
        if hi == 0.0 || self.alpha == 0.0 {
            0.0
        } else {
            self.alpha * hi
        }
    }

    /// Weight of the arc from `i` to the sink (possibly infinite).
    pub fn sink_weight(&self, graph: &Graph, i: usize) -> f64 {
        let z = self.sink_reference(graph, i);
        if z == 0.0 || self.beta == 0.0 {
            0.0
        } else {
            self.beta * z
        }
    }

    /// α Σ h_i.
    pub fn source_capacity_total(&self) -> f64 {
        self.h.iter().map(|&(i, _)| self.source_weight(i)).sum()
    }
}

/// γ cut(S) + α Σ_{i∉S} h_i + β Σ_{i∈S} (g_i - h_i): the capacity of the
/// cut ({s} ∪ S, {t} ∪ S^c) in the reference cut graph.
pub fn augmented_cut_value(spec: &AugmentedGraphSpec, graph: &Graph, s: &NodeSet) -> Result<f64> {
    graph.validate_set(s)?;
    let mut value = spec.gamma * graph.cut_unchecked(s);
    value += spec
        .h
        .iter()
        .filter(|&&(i, _)| !s.contains(i))
        .map(|&(i, _)| spec.source_weight(i))
        .sum::<f64>();
    value += s.iter().map(|i| spec.sink_weight(graph, i)).sum::<f64>();
    Ok(value)
}

/// The explicit reference cut graph. Zero-weight terminal arcs are omitted.
pub fn materialize(spec: &AugmentedGraphSpec, graph: &Graph) -> FlowNetwork {
    let n = graph.num_nodes();
    let mut net = FlowNetwork::new(n);
    let (s, t) = (net.source(), net.sink());
    let push = |net: &mut FlowNetwork, u, v, c| net.add_arc(u, v, c).expect("valid arc");
    for &(i, _) in &spec.h {
        let a = spec.source_weight(i);
        if a > 0.0 {
            push(&mut net, s, i, a);
        }
    }
    for i in 0..n {
        let b = spec.sink_weight(graph, i);
        if b > 0.0 {
            push(&mut net, i, t, b);
        }
    }
    for (u, v, w) in graph.edges() {
        push(&mut net, u, v, spec.gamma * w);
        push(&mut net, v, u, spec.gamma * w);
    }
    net
}
