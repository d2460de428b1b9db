//! Exhaustive and dense reference solvers for small instances.
//!
//! Subset enumeration walks a Gray code so each step flips one vertex and
//! updates cut and volumes incrementally. Ties are broken towards the
//! lexicographically smallest vertex set, and the reported value is
//! recomputed from scratch on the winning set.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::embedding::SeedVector;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet, ReferenceSet, DENOMINATOR_TOL};
use crate::maxflow::FlowNetwork;

pub const CONDUCTANCE_CAP: usize = 16;
pub const PHI_R_CAP: usize = 12;
pub const SUBSET_RATIO_CAP: usize = 20;
pub const MIN_CUT_CAP: usize = 16;
pub const DENSE_CAP: usize = 64;

fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::TooLarge { size, cap })
    } else {
        Ok(())
    }
}

/// Running cut and volumes of a subset of `candidates` under single flips.
struct Walk<'a> {
    g: &'a Graph,
    candidates: &'a [usize],
    inside: Vec<bool>,
    in_r: Vec<bool>,
    cut: f64,
    volume: f64,
    volume_r: f64,
}

impl<'a> Walk<'a> {
    fn new(g: &'a Graph, candidates: &'a [usize], r: Option<&NodeSet>) -> Self {
        let n = g.num_nodes();
        let mut in_r = vec![false; n];
        if let Some(r) = r {
            r.iter().for_each(|v| in_r[v] = true);
        }
        Walk {
            g,
            candidates,
            inside: vec![false; n],
            in_r,
            cut: 0.0,
            volume: 0.0,
            volume_r: 0.0,
        }
    }

    fn flip(&mut self, k: usize) {
        let v = self.candidates[k];
        let d = self.g.degree(v);
        let across: f64 = self
            .g
            .neighbors(v)
            .filter(|&(u, _)| self.inside[u])
            .map(|(_, w)| w)
            .sum();
        let sign = if self.inside[v] { -1.0 } else { 1.0 };
        self.inside[v] = !self.inside[v];
        self.cut += sign * (d - 2.0 * across);
        self.volume += sign * d;
        if self.in_r[v] {
            self.volume_r += sign * d;
        }
        if self.cut.abs() < 1e-12 * self.g.total_volume() {
            self.cut = self.cut.max(0.0);
        }
    }

    fn set(&self) -> NodeSet {
        NodeSet::new(self.candidates.iter().copied().filter(|&v| self.inside[v]).collect())
    }
}

/// Minimizes `score` over all nonempty subsets of `candidates`, skipping the
/// full vertex set. `score` receives the walk state.
fn enumerate<F>(
    g: &Graph,
    candidates: &[usize],
    r: Option<&NodeSet>,
    mut score: F,
) -> Option<NodeSet>
where
    F: FnMut(&Walk<'_>) -> f64,
{
    let m = candidates.len();
    let n = g.num_nodes();
    let mut walk = Walk::new(g, candidates, r);
    let mut best: Option<(f64, NodeSet)> = None;
    let mut size = 0usize;
    for step in 1u64..(1u64 << m) {
        let k = step.trailing_zeros() as usize;
        let was_inside = walk.inside[candidates[k]];
        walk.flip(k);
        size = if was_inside { size - 1 } else { size + 1 };
        if size == n {
            continue;
        }
        let value = score(&walk);
        if value.is_nan() || value == f64::INFINITY {
            continue;
        }
        let better = match &best {
            None => true,
            Some((b, set)) => {
                let slack = 1e-12 * b.abs().max(1e-300);
                value < b - slack || (value <= b + slack && walk.set().as_slice() < set.as_slice())
            }
        };
        if better {
            best = Some((value, walk.set()));
        }
    }
    best.map(|(_, s)| s)
}

/// Exact minimum conductance over all nonempty proper subsets.
pub fn brute_min_conductance(g: &Graph) -> Result<(NodeSet, f64)> {
    check_cap(g.num_nodes(), CONDUCTANCE_CAP)?;
    let all: Vec<usize> = (0..g.num_nodes()).collect();
    let total = g.total_volume();
    let set = enumerate(g, &all, None, |w| w.cut / w.volume.min(total - w.volume))
        .ok_or_else(|| Error::Degenerate("graph has no proper subsets".into()))?;
    let value = g.conductance(&set)?;
    Ok((set, value))
}

/// Exact minimum expansion cut·vol(V) / (vol(S) vol(S^c)).
pub fn brute_min_expansion(g: &Graph) -> Result<(NodeSet, f64)> {
    check_cap(g.num_nodes(), CONDUCTANCE_CAP)?;
    let all: Vec<usize> = (0..g.num_nodes()).collect();
    let total = g.total_volume();
    let set = enumerate(g, &all, None, |w| w.cut * total / (w.volume * (total - w.volume)))
        .ok_or_else(|| Error::Degenerate("graph has no proper subsets".into()))?;
    let value = g.expansion(&set)?;
    Ok((set, value))
}

fn phi_r_search(g: &Graph, r: &NodeSet, penalty_factor: f64) -> Result<NodeSet> {
    check_cap(g.num_nodes(), PHI_R_CAP)?;
    let seed = ReferenceSet::new(g, r)?;
    let penalty = seed.theta * penalty_factor;
    let floor = DENOMINATOR_TOL * g.total_volume();
    let all: Vec<usize> = (0..g.num_nodes()).collect();
    enumerate(g, &all, Some(r), |w| {
        let denom = w.volume_r - penalty * (w.volume - w.volume_r);
        if denom <= floor {
            f64::INFINITY
        } else {
            w.cut / denom
        }
    })
    .ok_or_else(|| Error::Degenerate("no set has a positive seed-biased denominator".into()))
}

/// Exact minimizer of φ_R over all nonempty subsets of V.
pub fn brute_min_phi_r(g: &Graph, r: &NodeSet) -> Result<(NodeSet, f64)> {
    let set = phi_r_search(g, r, 1.0)?;
    let value = g.phi_r(&set, r)?;
    Ok((set, value))
}

/// Exact minimizer of the κ-strengthened φ'_R over all nonempty subsets.
pub fn brute_min_phi_r_kappa(g: &Graph, r: &NodeSet, kappa: f64) -> Result<(NodeSet, f64)> {
    if !(kappa >= 1.0) {
        return Err(Error::InvalidParameter(format!("kappa must be >= 1, got {kappa}")));
    }
    let set = phi_r_search(g, r, kappa)?;
    let value = g.phi_r_kappa(&set, r, kappa)?;
    Ok((set, value))
}

/// Exact minimizer of cut(S)/vol(S) over nonempty S ⊆ R.
pub fn brute_min_subset_ratio(g: &Graph, r: &NodeSet) -> Result<(NodeSet, f64)> {
    g.validate_set(r)?;
    if r.is_empty() {
        return Err(Error::EmptySeed);
    }
    check_cap(r.len(), SUBSET_RATIO_CAP)?;
    if r.len() == g.num_nodes() {
        // every proper subset qualifies, and the whole graph scores 0
        return Ok((r.clone(), 0.0));
    }
    let set = enumerate(g, r.as_slice(), None, |w| w.cut / w.volume).ok_or(Error::EmptySeed)?;
    let stats = g.stats(&set)?;
    Ok((set, stats.cut / stats.volume))
}

/// Exact minimum s-t cut; the returned set is the graph-vertex part of the
/// source side.
pub fn brute_min_cut(net: &FlowNetwork) -> Result<(NodeSet, f64)> {
    let n = net.graph_nodes();
    check_cap(n, MIN_CUT_CAP)?;
    let mut best: Option<(f64, NodeSet)> = None;
    for mask in 0u64..(1u64 << n) {
        let set = NodeSet::new((0..n).filter(|&v| mask >> v & 1 == 1).collect());
        let value = net.cut_capacity(&set);
        let better = match &best {
            None => true,
            Some((b, s)) => {
                let slack = 1e-12 * b.abs();
                value < b - slack || (value <= b + slack && set.as_slice() < s.as_slice())
            }
        };
        if better {
            best = Some((value, set));
        }
    }
    let (value, set) = best.expect("at least the empty side");
    Ok((set, value))
}

/// A dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix(pub DMatrix<f64>);

impl DenseMatrix {
    fn check(g: &Graph) -> Result<()> {
        check_cap(g.num_nodes(), DENSE_CAP)
    }

    pub fn identity(n: usize) -> Self {
        DenseMatrix(DMatrix::identity(n, n))
    }

    pub fn from_row_slice(n: usize, values: &[f64]) -> Self {
        DenseMatrix(DMatrix::from_row_slice(n, n, values))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn laplacian(g: &Graph) -> Result<Self> {
        DenseMatrix::shifted_laplacian(g, 0.0)
    }

    /// L + ρD.
    pub fn shifted_laplacian(g: &Graph, rho: f64) -> Result<Self> {
        DenseMatrix::check(g)?;
        let n = g.num_nodes();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = (1.0 + rho) * g.degree(i);
            for (j, w) in g.neighbors(i) {
                m[(i, j)] -= w;
            }
        }
        Ok(DenseMatrix(m))
    }

    /// I − D^{-1/2} A D^{-1/2}.
    pub fn normalized_laplacian(g: &Graph) -> Result<Self> {
        let mut m = DenseMatrix::laplacian(g)?.0;
        let s: Vec<f64> = g.degrees().iter().map(|d| 1.0 / d.sqrt()).collect();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                m[(i, j)] *= s[i] * s[j];
            }
        }
        Ok(DenseMatrix(m))
    }

    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let k = idx.len();
        DenseMatrix(DMatrix::from_fn(k, k, |a, b| self.0[(idx[a], idx[b])]))
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (&self.0 * DVector::from_column_slice(x)).as_slice().to_vec()
    }
}

/// Smallest eigenpair of a symmetric matrix, optionally restricted to the
/// orthogonal complement of `constraint` (which must be an eigenvector).
/// The eigenvector has unit norm and its largest-magnitude entry positive.
pub fn dense_eig_smallest(m: &DenseMatrix, constraint: Option<&[f64]>) -> Result<(f64, Vec<f64>)> {
    let n = m.n();
    check_cap(n, DENSE_CAP)?;
    let mut a = m.0.clone();
    let u = constraint.map(|c| {
        let v = DVector::from_column_slice(c);
        let nrm = v.norm();
        v / nrm
    });
    if let Some(u) = &u {
        // Push the constrained direction to the top of the spectrum.
        let shift = 1.0 + m.0.iter().map(|v| v.abs()).sum::<f64>();
        a += shift * u * u.transpose();
    }
    let eig = SymmetricEigen::new(a);
    let (k, value) = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .ok_or_else(|| Error::Degenerate("empty matrix".into()))?;
    let mut v: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    if let Some(u) = &u {
        let c: f64 = v.iter().zip(u.iter()).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(u.iter()).for_each(|(a, b)| *a -= c * b);
    }
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |p, x| if x.abs() > p.abs() * (1.0 + 1e-12) { x } else { p });
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    Ok((value, v))
}

/// Dense generalized Fiedler pair: minimizes xᵀLx/xᵀDx over 1ᵀDx = 0 (or
/// xᵀLx/xᵀx over 1ᵀx = 0 when `normalized` is false). x has unit 2-norm.
pub fn dense_fiedler(g: &Graph, normalized: bool) -> Result<(f64, Vec<f64>)> {
    if normalized {
        let m = DenseMatrix::normalized_laplacian(g)?;
        let c: Vec<f64> = g.degrees().iter().map(|d| d.sqrt()).collect();
        let (value, y) = dense_eig_smallest(&m, Some(&c))?;
        let mut x: Vec<f64> = y.iter().zip(&c).map(|(a, s)| a / s).collect();
        let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= nrm);
        Ok((value, x))
    } else {
        let m = DenseMatrix::laplacian(g)?;
        dense_eig_smallest(&m, Some(&vec![1.0; g.num_nodes()]))
    }
}

/// Solves m x = b; fails if m is numerically singular.
pub fn dense_solve(m: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    check_cap(m.n(), DENSE_CAP)?;
    if b.len() != m.n() {
        return Err(Error::LengthMismatch {
            expected: m.n(),
            got: b.len(),
        });
    }
    let svd = m.0.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-13 * smax) {
        return Err(Error::Degenerate(format!(
            "matrix is singular (smallest singular value {smin:e})"
        )));
    }
    let x = svd
        .solve(&DVector::from_column_slice(b), 0.0)
        .map_err(|e| Error::Degenerate(e.to_string()))?;
    Ok(x.as_slice().to_vec())
}

/// Minimum-norm least-squares solution m⁺ b.
pub fn dense_pinv_solve(m: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    check_cap(m.n(), DENSE_CAP)?;
    let svd = m.0.clone().svd(true, true);
    let eps = 1e-12 * svd.singular_values.max();
    let x = svd
        .solve(&DVector::from_column_slice(b), eps)
        .map_err(|e| Error::Degenerate(e.to_string()))?;
    Ok(x.as_slice().to_vec())
}

/// Minimizes ½ xᵀQx + cᵀx + Σ w_i x_i over x ≥ 0 by projected gradient, to a
/// KKT residual of 1e-10. `q` must be symmetric positive definite.
pub fn dense_nnq_prox(q: &DenseMatrix, linear: &[f64], l1_weights: &[f64]) -> Result<Vec<f64>> {
    let n = q.n();
    check_cap(n, DENSE_CAP)?;
    for v in [linear.len(), l1_weights.len()] {
        if v != n {
            return Err(Error::LengthMismatch { expected: n, got: v });
        }
    }
    let eig = SymmetricEigen::new(q.0.clone());
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min();
    if !(lmin > 0.0) {
        return Err(Error::Degenerate("quadratic is not positive definite".into()));
    }
    let step = 1.0 / lmax;
    let c = DVector::from_iterator(n, linear.iter().zip(l1_weights).map(|(a, b)| a + b));
    let mut x = DVector::zeros(n);
    let kkt = |x: &DVector<f64>, grad: &DVector<f64>| {
        x.iter()
            .zip(grad.iter())
            .map(|(&xi, &gi)| if xi > 0.0 { gi.abs() } else { (-gi).max(0.0) })
            .fold(0.0f64, f64::max)
    };
    let max_iter = 10_000_000usize;
    for _ in 0..max_iter {
        let grad = &q.0 * &x + &c;
        if kkt(&x, &grad) <= 1e-10 {
            return Ok(x.as_slice().to_vec());
        }
        x = (&x - step * grad).map(|v| v.max(0.0));
    }
    let grad = &q.0 * &x + &c;
    Err(Error::Convergence {
        what: "projected gradient",
        iterations: max_iter,
        residual: kkt(&x, &grad),
    })
}

/// Dense reference for ℓ1-regularized PageRank.
pub fn dense_l1pr(g: &Graph, h: &SeedVector, alpha: f64, epsilon: f64) -> Result<Vec<f64>> {
    let n = g.num_nodes();
    let gamma = 0.5 * (1.0 - alpha);
    let mut q = DenseMatrix::laplacian(g)?;
    q.0 *= gamma;
    for i in 0..n {
        q.0[(i, i)] += alpha * g.degree(i);
    }
    let linear: Vec<f64> = h.to_dense(n).iter().map(|v| -alpha * v).collect();
    let weights: Vec<f64> = g.degrees().iter().map(|d| epsilon * d).collect();
    dense_nnq_prox(&q, &linear, &weights)
}
