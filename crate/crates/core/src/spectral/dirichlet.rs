use std::time::Instant;

use super::{EigenSolution, MAX_MATVECS};
use crate::embedding::{EmbeddingKind, EmbeddingVector};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::linalg::{self, CgFailure};
use crate::result::ClusterResult;
use crate::rounding::{sweep_cut, SweepObjective};

/// Smallest Dirichlet eigenpair on `r`: minimizes xᵀLx / xᵀDx over vectors
/// vanishing outside `r`. Returns a nonnegative sparse vector of unit 2-norm.
pub fn spectral_mqi(g: &Graph, r: &NodeSet, tol: f64) -> Result<(f64, EmbeddingVector)> {
    let sol = spectral_mqi_solve(g, r, tol)?;
    Ok((sol.value, sol.vector))
}

/// [`spectral_mqi`] with solver diagnostics.
pub fn spectral_mqi_solve(g: &Graph, r: &NodeSet, tol: f64) -> Result<EigenSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    g.validate_set(r)?;
    if r.is_empty() {
        return Err(Error::EmptySeed);
    }
    let n = g.num_nodes();
    let members = r.as_slice();
    let m = members.len();
    if m == n {
        let c = 1.0 / (n as f64).sqrt();
        let entries = (0..n).map(|i| (i, c)).collect();
        return Ok(EigenSolution {
            value: 0.0,
            vector: EmbeddingVector::sparse(n, entries, EmbeddingKind::Dirichlet),
            residual: 0.0,
            matvecs: 0,
        });
    }

    let inv_sqrt: Vec<f64> = members.iter().map(|&v| 1.0 / g.degree(v).sqrt()).collect();
    // Local adjacency of the principal submatrix, built once.
    let local: Vec<Vec<(usize, f64)>> = members
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            g.neighbors(v)
                .filter_map(|(u, w)| {
                    members
                        .binary_search(&u)
                        .ok()
                        .map(|j| (j, w * inv_sqrt[k] * inv_sqrt[j]))
                })
                .collect()
        })
        .collect();
    let apply = |y: &[f64], out: &mut [f64]| {
        for (k, ok) in out.iter_mut().enumerate() {
            *ok = y[k] - local[k].iter().map(|&(j, w)| w * y[j]).sum::<f64>();
        }
    };

    let mut y: Vec<f64> = inv_sqrt.iter().map(|s| 1.0 / s).collect();
    linalg::scale(1.0 / linalg::norm(&y), &mut y);
    let mut my = vec![0.0; m];
    let mut matvecs = 0;
    let mut lambda = f64::INFINITY;
    let mut residual = f64::INFINITY;
    let mut inner_tol = (tol * 0.1).max(1e-15);
    while matvecs < MAX_MATVECS {
        let mut w = y.clone();
        if lambda.is_finite() && lambda > 0.0 {
            linalg::scale(1.0 / lambda, &mut w);
        }
        match linalg::conjugate_gradient(apply, &y, &mut w, None, inner_tol, 20 * m + 100) {
            Ok(k) => matvecs += k,
            Err(CgFailure::NotConverged { iterations, .. }) => matvecs += iterations,
            Err(CgFailure::Indefinite) => {
                return Err(Error::Convergence {
                    what: "dirichlet inner solve",
                    iterations: matvecs,
                    residual,
                })
            }
        }
        let nw = linalg::norm(&w);
        if !(nw > 0.0) || !nw.is_finite() {
            return Err(Error::Convergence {
                what: "dirichlet eigenvector",
                iterations: matvecs,
                residual,
            });
        }
        linalg::scale(1.0 / nw, &mut w);
        y = w;
        apply(&y, &mut my);
        matvecs += 1;
        lambda = linalg::dot(&y, &my);
        inner_tol = (0.1 * tol / lambda.max(1.0)).max(1e-15);
        residual = my
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - lambda * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual <= tol {
            let mut x: Vec<f64> = y.iter().zip(&inv_sqrt).map(|(a, s)| (a * s).abs()).collect();
            linalg::scale(1.0 / linalg::norm(&x), &mut x);
            let entries = members.iter().copied().zip(x).collect();
            return Ok(EigenSolution {
                value: lambda,
                vector: EmbeddingVector::sparse(n, entries, EmbeddingKind::Dirichlet),
                residual,
                matvecs,
            });
        }
    }
    Err(Error::Convergence {
        what: "dirichlet eigenvector",
        iterations: matvecs,
        residual,
    })
}

/// SpectralMQI: the Dirichlet eigenvector on `r`, rounded by a sweep over its
/// support. The result minimizes cut/vol among the swept prefixes.
pub fn spectral_mqi_cluster(g: &Graph, r: &NodeSet, tol: f64) -> Result<ClusterResult> {
    let start = Instant::now();
    let sol = spectral_mqi_solve(g, r, tol)?;
    let sweep = sweep_cut(g, &sol.vector, SweepObjective::Conductance, true)?;
    let value = g.stats(&sweep.set)?;
    Ok(ClusterResult::new(g, sweep.set, "cut_over_volume", value.cut / value.volume)?
        .with_iterations(sol.matvecs)
        .with_touched(r.len())
        .with_extra("lambda_r", sol.value)
        .with_runtime(start.elapsed())
        .with_vector(sol.vector))
}
