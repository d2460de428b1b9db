//! Spectral relaxations: the global Fiedler vector, the Dirichlet eigenvector
//! behind SpectralMQI, locally-biased MOV vectors and ℓ1-regularized
//! PageRank.
//!
//! Eigen and linear solves run in normalized coordinates `y = D^{1/2} x`,
//! where the operator is `I - D^{-1/2} A D^{-1/2}` (plus a multiple of the
//! identity for MOV). That change of variables is exactly diagonal (Jacobi)
//! preconditioning of the generalized problems in `L` and `D`.

mod dirichlet;
mod fiedler;
mod l1pr;
mod mov;

pub use dirichlet::{spectral_mqi, spectral_mqi_cluster, spectral_mqi_solve};
pub use fiedler::{fiedler, fiedler_solve, spectral_cluster};
pub use l1pr::{
    kkt_residual, l1_pagerank, l1_pagerank_with, l1pr_cluster, l1pr_objective, L1prSolution,
    UpdateOrder,
};
pub use mov::{mov_correlate, mov_solve, Mov, MovSolution};

use crate::embedding::{EmbeddingKind, EmbeddingVector};
use crate::graph::Graph;
use crate::linalg;

/// Cap on operator applications per eigen or linear solve.
pub const MAX_MATVECS: usize = 1_000_000;

/// An eigenpair from one of the iterative eigensolvers.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    pub value: f64,
    pub vector: EmbeddingVector,
    /// Final relative residual.
    pub residual: f64,
    pub matvecs: usize,
}

/// out = (I - D^{-1/2} A D^{-1/2}) y + shift * y
pub(crate) fn normalized_apply(g: &Graph, inv_sqrt_d: &[f64], shift: f64, y: &[f64], out: &mut [f64]) {
    for (i, oi) in out.iter_mut().enumerate() {
        let mut acc = (1.0 + shift) * y[i];
        for (j, w) in g.neighbors(i) {
            acc -= w * inv_sqrt_d[i] * inv_sqrt_d[j] * y[j];
        }
        *oi = acc;
    }
}

/// Deterministic start vector for the iterative eigensolvers.
pub(crate) fn start_vector(n: usize) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_f1ed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Scales to unit 2-norm and makes the entry of largest magnitude positive.
pub(crate) fn canonical_sign(x: &mut [f64]) {
    let nrm = linalg::norm(x);
    if nrm > 0.0 {
        linalg::scale(1.0 / nrm, x);
    }
    let mut pivot = 0;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > x[pivot].abs() * (1.0 + 1e-12) {
            pivot = i;
        }
    }
    if x.get(pivot).is_some_and(|&v| v < 0.0) {
        linalg::scale(-1.0, x);
    }
}

pub(crate) fn dense_embedding(values: Vec<f64>, kind: EmbeddingKind) -> EmbeddingVector {
    EmbeddingVector::dense(values, kind)
}
