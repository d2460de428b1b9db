use std::time::Instant;

use super::{canonical_sign, dense_embedding, normalized_apply, start_vector, EigenSolution, MAX_MATVECS};
use crate::embedding::EmbeddingKind;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, CgFailure};
use crate::result::ClusterResult;
use crate::rounding::{sweep_cut, SweepObjective};

/// Second eigenpair of the graph: the minimizer of xᵀLx / xᵀDx subject to
/// 1ᵀDx = 0 (or of xᵀLx / xᵀx subject to 1ᵀx = 0 when `normalized` is false).
pub fn fiedler(g: &Graph, normalized: bool, tol: f64) -> Result<(f64, crate::EmbeddingVector)> {
    let sol = fiedler_solve(g, normalized, tol)?;
    Ok((sol.value, sol.vector))
}

/// [`fiedler`] with solver diagnostics.
///
/// Inverse iteration in the complement of the null vector; each step solves
/// with conjugate gradients. Converged once ‖Lx − λDx‖ <= tol ‖Dx‖.
pub fn fiedler_solve(g: &Graph, normalized: bool, tol: f64) -> Result<EigenSolution> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    let n = g.num_nodes();
    // x = y / scale
    let scale: Vec<f64> = if normalized {
        g.degrees().iter().map(|d| d.sqrt()).collect()
    } else {
        vec![1.0; n]
    };
    let inv_sqrt_d: Vec<f64> = g.degrees().iter().map(|d| 1.0 / d.sqrt()).collect();
    let apply = |y: &[f64], out: &mut [f64]| {
        if normalized {
            normalized_apply(g, &inv_sqrt_d, 0.0, y, out);
        } else {
            g.laplacian_apply_into(y, out);
        }
    };
    let mut null = scale.clone();
    linalg::scale(1.0 / linalg::norm(&null), &mut null);

    let mut y = start_vector(n);
    linalg::project_out(&null, &mut y);
    linalg::scale(1.0 / linalg::norm(&y), &mut y);

    let mut my = vec![0.0; n];
    let mut matvecs = 0;
    let mut lambda = f64::INFINITY;
    let mut residual = f64::INFINITY;
    // Converts a residual in y coordinates to the weighted one being tested.
    let (smin, smax) = scale
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &s| (lo.min(s), hi.max(s)));
    let mut inner_tol = 0.1 * tol * smin / smax;
    while matvecs < MAX_MATVECS {
        // Warm start at y / λ, the fixed point of the iteration.
        let mut w = y.clone();
        if lambda.is_finite() && lambda > 0.0 {
            linalg::scale(1.0 / lambda, &mut w);
        }
        match linalg::conjugate_gradient(apply, &y, &mut w, Some(&null), inner_tol, 20 * n + 100) {
            Ok(k) => matvecs += k,
            Err(CgFailure::NotConverged { iterations, .. }) => matvecs += iterations,
            Err(CgFailure::Indefinite) => {
                return Err(Error::Convergence {
                    what: "fiedler inner solve",
                    iterations: matvecs,
                    residual,
                })
            }
        }
        let nw = linalg::norm(&w);
        if !(nw > 0.0) || !nw.is_finite() {
            return Err(Error::Convergence {
                what: "fiedler",
                iterations: matvecs,
                residual,
            });
        }
        linalg::scale(1.0 / nw, &mut w);
        y = w;
        apply(&y, &mut my);
        matvecs += 1;
        lambda = linalg::dot(&y, &my);
        inner_tol = (0.1 * tol * smin / smax / lambda.max(1.0)).max(1e-15);
        let r: Vec<f64> = my.iter().zip(&y).map(|(a, b)| a - lambda * b).collect();
        let weighted = |v: &[f64]| {
            v.iter()
                .zip(&scale)
                .map(|(a, s)| (a * s) * (a * s))
                .sum::<f64>()
                .sqrt()
        };
        residual = weighted(&r) / weighted(&y);
        if residual <= tol {
            let mut x: Vec<f64> = y.iter().zip(&scale).map(|(a, s)| a / s).collect();
            canonical_sign(&mut x);
            return Ok(EigenSolution {
                value: lambda,
                vector: dense_embedding(x, EmbeddingKind::Fiedler),
                residual,
                matvecs,
            });
        }
    }
    Err(Error::Convergence {
        what: "fiedler",
        iterations: matvecs,
        residual,
    })
}

/// Global spectral partitioning: Fiedler vector followed by a sweep cut over
/// all vertices.
pub fn spectral_cluster(
    g: &Graph,
    normalized: bool,
    objective: SweepObjective,
    tol: f64,
) -> Result<ClusterResult> {
    let start = Instant::now();
    let sol = fiedler_solve(g, normalized, tol)?;
    let sweep = sweep_cut(g, &sol.vector, objective, false)?;
    Ok(ClusterResult::new(g, sweep.set, objective.name(), sweep.value)?
        .with_iterations(sol.matvecs)
        .with_touched(g.num_nodes())
        .with_extra("lambda2", sol.value)
        .with_runtime(start.elapsed())
        .with_vector(sol.vector))
}
