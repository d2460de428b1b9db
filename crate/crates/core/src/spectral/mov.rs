use super::{fiedler_solve, normalized_apply, MAX_MATVECS};
use crate::embedding::{EmbeddingKind, EmbeddingVector, SeedVector};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, CgFailure};

const DEFAULT_SOLVE_TOL: f64 = 1e-10;
const MAX_BISECTION_STEPS: usize = 100;
const UPPER_RHO_LIMIT: f64 = 1e12;
/// The lower bisection end is −λ2 (1 − LOWER_MARGIN).
const LOWER_MARGIN: f64 = 1e-6;

/// A MOV solve at one value of ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct MovSolution {
    /// Unit 2-norm solution of (L + ρD) x ∝ Dz.
    pub x: EmbeddingVector,
    pub rho: f64,
    /// (zᵀDx)² / xᵀDx for the D-normalized seed z.
    pub correlation: f64,
    /// ‖(L + ρD) x̂ − Dz‖ / ‖Dz‖ for the unnormalized iterate x̂. Meets the
    /// requested tolerance unless that is below the double-precision floor
    /// set by the conditioning of L + ρD.
    pub residual: f64,
    pub matvecs: usize,
}

/// Locally-biased spectral solver for a fixed graph and seed vector.
///
/// The seed is D-orthogonalized against the constant vector and D-normalized
/// on construction; every solve runs in the complement of the constants, so
/// ρ = 0 needs no special treatment.
#[derive(Debug, Clone)]
pub struct Mov<'g> {
    g: &'g Graph,
    z: Vec<f64>,
    inv_sqrt_d: Vec<f64>,
    null: Vec<f64>,
    lambda2: Option<f64>,
    solve_tol: f64,
}

impl<'g> Mov<'g> {
    pub fn new(g: &'g Graph, z: &SeedVector) -> Result<Self> {
        z.validate(g)?;
        let n = g.num_nodes();
        let d = g.degrees();
        let mut zt = z.to_dense(n);
        let d_norm = |v: &[f64]| v.iter().zip(d).map(|(a, di)| a * a * di).sum::<f64>().sqrt();
        let before = d_norm(&zt);
        let shift = linalg::dot(&zt, d) / g.total_volume();
        zt.iter_mut().for_each(|v| *v -= shift);
        let dnorm = d_norm(&zt);
        if z.is_empty() || dnorm <= 1e-12 * before {
            return Err(Error::Degenerate(
                "seed vector is constant; nothing is left after removing the constant component".into(),
            ));
        }
        linalg::scale(1.0 / dnorm, &mut zt);
        let mut null: Vec<f64> = d.iter().map(|x| x.sqrt()).collect();
        linalg::scale(1.0 / linalg::norm(&null), &mut null);
        Ok(Mov {
            g,
            z: zt,
            inv_sqrt_d: d.iter().map(|x| 1.0 / x.sqrt()).collect(),
            null,
            lambda2: None,
            solve_tol: DEFAULT_SOLVE_TOL,
        })
    }

    /// Relative residual target of each linear solve.
    pub fn with_solve_tol(mut self, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
        }
        self.solve_tol = tol;
        Ok(self)
    }

    /// The processed seed: D-orthogonal to constants with zᵀDz = 1.
    pub fn seed(&self) -> &[f64] {
        &self.z
    }

    /// λ2 of the generalized problem, computed on first use.
    pub fn lambda2(&mut self) -> Result<f64> {
        if let Some(l) = self.lambda2 {
            return Ok(l);
        }
        let l = fiedler_solve(self.g, true, 1e-10)?.value;
        self.lambda2 = Some(l);
        Ok(l)
    }

    pub fn correlation(&self, x: &[f64]) -> f64 {
        let d = self.g.degrees();
        let zdx: f64 = self.z.iter().zip(x).zip(d).map(|((a, b), c)| a * b * c).sum();
        let xdx: f64 = x.iter().zip(d).map(|(a, c)| a * a * c).sum();
        if xdx > 0.0 {
            zdx * zdx / xdx
        } else {
            0.0
        }
    }

    /// Solves (L + ρD) x = Dz in the complement of the constants and returns
    /// x scaled to unit 2-norm.
    pub fn solve(&mut self, rho: f64) -> Result<MovSolution> {
        if !rho.is_finite() {
            return Err(Error::InvalidParameter(format!("rho must be finite, got {rho}")));
        }
        if rho < 0.0 {
            let l2 = self.lambda2()?;
            if rho <= -l2 {
                return Err(Error::RhoOutOfRange { rho, lambda2: l2 });
            }
        }
        let g = self.g;
        let n = g.num_nodes();
        let d = g.degrees();
        // normalized coordinates: (𝓛 + ρI) y = D^{1/2} z, x = D^{-1/2} y
        let b: Vec<f64> = self.z.iter().zip(d).map(|(v, di)| v * di.sqrt()).collect();
        let dz_norm = self.z.iter().zip(d).map(|(v, di)| (v * di).powi(2)).sum::<f64>().sqrt();
        let dmax = d.iter().fold(0.0f64, |m, &v| m.max(v));
        let target = self.solve_tol * dz_norm;
        let inv = &self.inv_sqrt_d;
        let apply = |y: &[f64], out: &mut [f64]| normalized_apply(g, inv, rho, y, out);

        let mut y = vec![0.0; n];
        let mut matvecs = 0;
        let mut inner = 0.5 * target / dmax.sqrt();
        let mut residual = f64::INFINITY;
        for _ in 0..8 {
            let budget = MAX_MATVECS.saturating_sub(matvecs).max(1);
            match linalg::conjugate_gradient(apply, &b, &mut y, Some(&self.null), inner, budget) {
                Ok(k) => matvecs += k,
                Err(CgFailure::NotConverged { iterations, .. }) => {
                    matvecs += iterations;
                }
                Err(CgFailure::Indefinite) => {
                    let l2 = self.lambda2()?;
                    return Err(Error::RhoOutOfRange { rho, lambda2: l2 });
                }
            }
            let x: Vec<f64> = y.iter().zip(inv).map(|(a, s)| a * s).collect();
            let mut lx = vec![0.0; n];
            g.laplacian_apply_into(&x, &mut lx);
            matvecs += 1;
            residual = (0..n)
                .map(|i| (lx[i] + rho * d[i] * x[i] - d[i] * self.z[i]).powi(2))
                .sum::<f64>()
                .sqrt()
                / dz_norm;
            // Near ρ = −λ2 the system is so ill-conditioned that a relative
            // residual of a few ulps times the condition number is the best
            // any double-precision iterate can reach.
            let xnorm = linalg::norm(&x);
            let floor = 100.0 * f64::EPSILON * (2.0 + rho.abs()) * dmax * xnorm / dz_norm;
            if residual <= self.solve_tol.max(floor) {
                let mut x = x;
                let correlation = self.correlation(&x);
                let nrm = linalg::norm(&x);
                linalg::scale(1.0 / nrm, &mut x);
                return Ok(MovSolution {
                    x: EmbeddingVector::dense(x, EmbeddingKind::Mov),
                    rho,
                    correlation,
                    residual,
                    matvecs,
                });
            }
            if matvecs >= MAX_MATVECS {
                break;
            }
            inner *= 0.1;
        }
        Err(Error::Convergence {
            what: "mov linear solve",
            iterations: matvecs,
            residual,
        })
    }

    /// Bisection on ρ in (−λ2, ∞) for (zᵀDx)² = κ, to within `tol`.
    pub fn correlate(&mut self, kappa: f64, tol: f64) -> Result<MovSolution> {
        if !(kappa > 0.0 && kappa <= 1.0) {
            return Err(Error::InvalidParameter(format!("kappa must lie in (0, 1], got {kappa}")));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
        }
        let l2 = self.lambda2()?;
        let mut lo = -l2 * (1.0 - LOWER_MARGIN);
        let low = self.solve(lo)?;
        if (low.correlation - kappa).abs() <= tol {
            return Ok(low);
        }
        let mut hi = 1.0;
        let mut high = self.solve(hi)?;
        while high.correlation < kappa - tol {
            if hi >= UPPER_RHO_LIMIT {
                break;
            }
            lo = hi;
            hi = (hi * 2.0).min(UPPER_RHO_LIMIT);
            high = self.solve(hi)?;
        }
        if kappa < low.correlation - tol || high.correlation < kappa - tol {
            return Err(Error::UnattainableCorrelation {
                kappa,
                low: low.correlation,
                high: high.correlation,
            });
        }
        if (high.correlation - kappa).abs() <= tol {
            return Ok(high);
        }
        for _ in 0..MAX_BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            let sol = self.solve(mid)?;
            if (sol.correlation - kappa).abs() <= tol {
                return Ok(sol);
            }
            if sol.correlation < kappa {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Err(Error::Convergence {
            what: "mov bisection",
            iterations: MAX_BISECTION_STEPS,
            residual: f64::NAN,
        })
    }
}

/// One MOV solve; see [`Mov::solve`].
pub fn mov_solve(g: &Graph, z: &SeedVector, rho: f64, tol: f64) -> Result<EmbeddingVector> {
    Ok(Mov::new(g, z)?.with_solve_tol(tol)?.solve(rho)?.x)
}

/// Finds ρ with (zᵀDx)² within `tol` of `kappa`; see [`Mov::correlate`].
pub fn mov_correlate(g: &Graph, z: &SeedVector, kappa: f64, tol: f64) -> Result<(EmbeddingVector, f64)> {
    let sol = Mov::new(g, z)?.correlate(kappa, tol)?;
    Ok((sol.x, sol.rho))
}
