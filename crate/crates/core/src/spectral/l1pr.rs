use std::collections::{HashMap, VecDeque};
use std::time::Instant;

use crate::embedding::{EmbeddingKind, EmbeddingVector, SeedVector};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::result::ClusterResult;
use crate::rounding::{sweep_cut, SweepObjective};

/// Default optimality tolerance of [`l1pr_cluster`].
pub const DEFAULT_TOL: f64 = 1e-10;
const MAX_UPDATES: usize = 200_000_000;

/// The order in which violated coordinates are corrected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateOrder {
    /// One coordinate at a time from a FIFO queue of violators.
    #[default]
    Fifo,
    /// All current violators at once from the same iterate.
    Jacobi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct L1prSolution {
    /// Sparse and nonnegative.
    pub x: EmbeddingVector,
    /// Vertices whose gradient entry was ever read or written.
    pub touched: usize,
    /// Coordinate updates performed.
    pub updates: usize,
    pub kkt_residual: f64,
}

fn validate(g: &Graph, h: &SeedVector, alpha: f64, epsilon: f64, tol: f64) -> Result<()> {
    h.validate(g)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter(format!("epsilon must be > 0, got {epsilon}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    if h.is_empty() {
        return Err(Error::EmptySeed);
    }
    if let Some(&(i, v)) = h.entries().iter().find(|&&(_, v)| v < 0.0) {
        return Err(Error::InvalidParameter(format!("h[{i}] = {v} is negative")));
    }
    let total: f64 = h.entries().iter().map(|&(_, v)| v).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("h must sum to 1, sums to {total}")));
    }
    Ok(())
}

/// Sparse state of the gradient q = (αD + γL) x − α h with γ = (1 − α)/2.
struct State<'a> {
    g: &'a Graph,
    alpha: f64,
    gamma: f64,
    epsilon: f64,
    h: HashMap<usize, f64>,
    x: HashMap<usize, f64>,
    q: HashMap<usize, f64>,
}

impl<'a> State<'a> {
    fn new(g: &'a Graph, h: &SeedVector, alpha: f64, epsilon: f64) -> Self {
        let h: HashMap<usize, f64> = h.entries().iter().copied().collect();
        let q = h.iter().map(|(&i, &v)| (i, -alpha * v)).collect();
        State {
            g,
            alpha,
            gamma: 0.5 * (1.0 - alpha),
            epsilon,
            h,
            x: HashMap::new(),
            q,
        }
    }

    /// −(q_i + ε d_i): positive when increasing x_i lowers the objective.
    fn violation(&mut self, i: usize) -> f64 {
        let q = *self.q.entry(i).or_insert(0.0);
        -(q + self.epsilon * self.g.degree(i))
    }

    fn diagonal(&self, i: usize) -> f64 {
        (self.alpha + self.gamma) * self.g.degree(i)
    }

    /// x_i += delta, updating q on i and its neighbors.
    fn bump(&mut self, i: usize, delta: f64) {
        *self.x.entry(i).or_insert(0.0) += delta;
        *self.q.entry(i).or_insert(0.0) += self.diagonal(i) * delta;
        for (j, w) in self.g.neighbors(i) {
            *self.q.entry(j).or_insert(0.0) -= self.gamma * w * delta;
        }
    }
}

/// ℓ1-regularized PageRank with the default (FIFO push) update order.
///
/// Minimizes ½α‖h‖₁ − α hᵀx + ½ xᵀ(αD + γL)x + ε Σ d_i x_i over x ≥ 0, with
/// γ = (1 − α)/2. The solver only ever reads vertices within one hop of the
/// support of the solution, so its work does not grow with the graph.
pub fn l1_pagerank(
    g: &Graph,
    h: &SeedVector,
    alpha: f64,
    epsilon: f64,
    tol: f64,
) -> Result<L1prSolution> {
    l1_pagerank_with(g, h, alpha, epsilon, tol, UpdateOrder::Fifo)
}

pub fn l1_pagerank_with(
    g: &Graph,
    h: &SeedVector,
    alpha: f64,
    epsilon: f64,
    tol: f64,
    order: UpdateOrder,
) -> Result<L1prSolution> {
    validate(g, h, alpha, epsilon, tol)?;
    let mut st = State::new(g, h, alpha, epsilon);
    let mut updates = 0usize;
    let mut seeds: Vec<usize> = st.h.keys().copied().collect();
    seeds.sort_unstable();
    match order {
        UpdateOrder::Fifo => {
            let mut queue: VecDeque<usize> = VecDeque::new();
            let mut queued: HashMap<usize, ()> = HashMap::new();
            for &i in &seeds {
                if st.violation(i) > tol {
                    queue.push_back(i);
                    queued.insert(i, ());
                }
            }
            while let Some(i) = queue.pop_front() {
                queued.remove(&i);
                let viol = st.violation(i);
                if viol <= tol {
                    continue;
                }
                st.bump(i, viol / st.diagonal(i));
                updates += 1;
                if updates > MAX_UPDATES {
                    return Err(Error::Convergence {
                        what: "l1 pagerank",
                        iterations: updates,
                        residual: viol,
                    });
                }
                for j in g.neighbor_ids(i).iter().copied() {
                    if !queued.contains_key(&j) && st.violation(j) > tol {
                        queue.push_back(j);
                        queued.insert(j, ());
                    }
                }
            }
        }
        UpdateOrder::Jacobi => {
            let mut active: Vec<usize> = seeds.iter().copied().filter(|&i| st.violation(i) > tol).collect();
            while !active.is_empty() {
                let steps: Vec<(usize, f64)> = active
                    .iter()
                    .map(|&i| (i, st.violation(i) / st.diagonal(i)))
                    .collect();
                for &(i, delta) in &steps {
                    st.bump(i, delta);
                }
                updates += steps.len();
                if updates > MAX_UPDATES {
                    return Err(Error::Convergence {
                        what: "l1 pagerank",
                        iterations: updates,
                        residual: f64::NAN,
                    });
                }
                let mut next: Vec<usize> = steps
                    .iter()
                    .flat_map(|&(i, _)| std::iter::once(i).chain(g.neighbor_ids(i).iter().copied()))
                    .collect();
                next.sort_unstable();
                next.dedup();
                next.retain(|&j| st.violation(j) > tol);
                active = next;
            }
        }
    }
    let touched = st.q.len();
    let entries: Vec<(usize, f64)> = st.x.iter().map(|(&i, &v)| (i, v)).collect();
    let x = EmbeddingVector::sparse(g.num_nodes(), entries, EmbeddingKind::L1pr);
    let kkt = kkt_residual(g, h, alpha, epsilon, &x)?;
    Ok(L1prSolution {
        x,
        touched,
        updates,
        kkt_residual: kkt,
    })
}

/// Gradient entries q_i on the vertices where they can be nonzero.
fn sparse_gradient(g: &Graph, h: &SeedVector, alpha: f64, x: &EmbeddingVector) -> HashMap<usize, f64> {
    let gamma = 0.5 * (1.0 - alpha);
    let mut q: HashMap<usize, f64> = HashMap::new();
    for &(i, v) in h.entries() {
        *q.entry(i).or_insert(0.0) -= alpha * v;
    }
    for (i, v) in x.entries() {
        *q.entry(i).or_insert(0.0) += (alpha + gamma) * g.degree(i) * v;
        for (j, w) in g.neighbors(i) {
            *q.entry(j).or_insert(0.0) -= gamma * w * v;
        }
    }
    q
}

/// Largest violation of the optimality conditions at `x`: |q_i + ε d_i| where
/// x_i > 0, max(0, −(q_i + ε d_i)) where x_i = 0, and −x_i where x_i < 0.
pub fn kkt_residual(
    g: &Graph,
    h: &SeedVector,
    alpha: f64,
    epsilon: f64,
    x: &EmbeddingVector,
) -> Result<f64> {
    if x.n != g.num_nodes() {
        return Err(Error::LengthMismatch {
            expected: g.num_nodes(),
            got: x.n,
        });
    }
    let q = sparse_gradient(g, h, alpha, x);
    let mut worst = 0.0f64;
    for (&i, &qi) in &q {
        let xi = x.get(i);
        let r = qi + epsilon * g.degree(i);
        let v = if xi > 0.0 {
            r.abs()
        } else if xi < 0.0 {
            (-xi).max(r.abs())
        } else {
            (-r).max(0.0)
        };
        worst = worst.max(v);
    }
    Ok(worst)
}

/// The ℓ1-regularized PageRank objective at `x`.
pub fn l1pr_objective(g: &Graph, h: &SeedVector, alpha: f64, epsilon: f64, x: &EmbeddingVector) -> f64 {
    let gamma = 0.5 * (1.0 - alpha);
    let h_l1: f64 = h.entries().iter().map(|&(_, v)| v.abs()).sum();
    let hx: f64 = h.entries().iter().map(|&(i, v)| v * x.get(i)).sum();
    let mut quad = 0.0;
    let mut reg = 0.0;
    for (i, v) in x.entries() {
        let d = g.degree(i);
        let lx = d * v - g.neighbors(i).map(|(j, w)| w * x.get(j)).sum::<f64>();
        quad += alpha * d * v * v + gamma * v * lx;
        reg += d * v.abs();
    }
    0.5 * alpha * h_l1 - alpha * hx + 0.5 * quad + epsilon * reg
}

/// ℓ1-regularized PageRank followed by a conductance sweep over its support.
pub fn l1pr_cluster(g: &Graph, h: &SeedVector, alpha: f64, epsilon: f64) -> Result<ClusterResult> {
    let start = Instant::now();
    let sol = l1_pagerank(g, h, alpha, epsilon, DEFAULT_TOL)?;
    if sol.x.support().is_empty() {
        return Err(Error::Degenerate(format!(
            "the l1-regularized PageRank solution is zero (epsilon = {epsilon} too large for the seed)"
        )));
    }
    let sweep = sweep_cut(g, &sol.x, SweepObjective::Conductance, true)?;
    Ok(ClusterResult::new(g, sweep.set, SweepObjective::Conductance.name(), sweep.value)?
        .with_touched(sol.touched)
        .with_iterations(sol.updates)
        .with_extra("kkt_residual", sol.kkt_residual)
        .with_extra("support_size", sol.x.support().len() as f64)
        .with_runtime(start.elapsed())
        .with_vector(sol.x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn prohibitive_epsilon_gives_zero() {
        let g = generators::cycle(5);
        let h = SeedVector::single(0);
        // α h_0 = 0.15 <= ε d_0 = 0.2
        let sol = l1_pagerank(&g, &h, 0.15, 0.1, 1e-12).unwrap();
        assert!(sol.x.support().is_empty());
        assert_eq!(sol.kkt_residual, 0.0);
        assert!(matches!(l1pr_cluster(&g, &h, 0.15, 0.1), Err(Error::Degenerate(_))));
    }

    #[test]
    fn single_vertex_support_closed_form() {
        // with only x_0 > 0: (α + γ) d_0 x_0 = α − ε d_0
        let g = generators::cycle(5);
        let (alpha, eps) = (0.5, 0.2);
        let sol = l1_pagerank(&g, &SeedVector::single(0), alpha, eps, 1e-14).unwrap();
        assert_eq!(sol.x.support().as_slice(), &[0]);
        let expected = (alpha - eps * 2.0) / ((alpha + 0.25) * 2.0);
        assert!((sol.x.get(0) - expected).abs() < 1e-14);
    }

    #[test]
    fn orders_agree() {
        let g = generators::random_connected(30, 0.15, 5);
        let h = SeedVector::single(3);
        let a = l1_pagerank_with(&g, &h, 0.15, 1e-4, 1e-12, UpdateOrder::Fifo).unwrap();
        let b = l1_pagerank_with(&g, &h, 0.15, 1e-4, 1e-12, UpdateOrder::Jacobi).unwrap();
        assert!(a.kkt_residual <= 1e-12 && b.kkt_residual <= 1e-12);
        for i in 0..30 {
            assert!((a.x.get(i) - b.x.get(i)).abs() < 1e-9);
        }
    }

    #[test]
    fn stays_local_on_clique_ring() {
        let g = generators::clique_ring(20, 10);
        let seed = generators::ring_clique(7, 10).as_slice()[4];
        let sol = l1_pagerank(&g, &SeedVector::single(seed), 0.15, 1e-4, 1e-10).unwrap();
        let cliques: std::collections::BTreeSet<usize> = sol.x.support().iter().map(|v| v / 10).collect();
        assert!(cliques.len() <= 3, "{cliques:?}");
        assert!(sol.touched < 60);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = generators::cycle(4);
        let h = SeedVector::single(0);
        assert!(l1_pagerank(&g, &h, 1.0, 1e-3, 1e-8).is_err());
        assert!(l1_pagerank(&g, &h, 0.1, 0.0, 1e-8).is_err());
        let half = SeedVector::new(vec![(0, 0.5)]);
        assert!(l1_pagerank(&g, &half, 0.1, 1e-3, 1e-8).is_err());
    }
}
