//! Small dense-vector kernels and a projected conjugate gradient solver.

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// y += a x
pub(crate) fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub(crate) fn scale(a: f64, x: &mut [f64]) {
    x.iter_mut().for_each(|v| *v *= a);
}

/// Removes the component along the unit vector `u`.
pub(crate) fn project_out(u: &[f64], x: &mut [f64]) {
    let c = dot(u, x);
    axpy(-c, u, x);
}

/// Why a CG solve stopped without meeting its tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum CgFailure {
    /// The operator is not positive definite on the iteration space.
    Indefinite,
    NotConverged { residual: f64, iterations: usize },
}

/// Solves `A x = b` for symmetric positive (semi)definite `A`, warm-started
/// from `x`. With `deflate = Some(u)` the iteration runs in the orthogonal
/// complement of the unit vector `u` (which must be invariant under `A`).
///
/// Stops when the recursively updated residual norm is at most `tol`.
/// Returns the number of matrix-vector products used.
pub(crate) fn conjugate_gradient<F>(
    mut apply: F,
    b: &[f64],
    x: &mut [f64],
    deflate: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<usize, CgFailure>
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = b.len();
    let project = |v: &mut [f64]| {
        if let Some(u) = deflate {
            project_out(u, v);
        }
    };
    project(x);
    let mut ap = vec![0.0; n];
    apply(x, &mut ap);
    let mut r: Vec<f64> = b.iter().zip(&ap).map(|(bi, ai)| bi - ai).collect();
    project(&mut r);
    let mut rr = dot(&r, &r);
    let mut matvecs = 1;
    if rr.sqrt() <= tol {
        return Ok(matvecs);
    }
    let mut p = r.clone();
    for _ in 0..max_iter {
        apply(&p, &mut ap);
        project(&mut ap);
        matvecs += 1;
        let curvature = dot(&p, &ap);
        if curvature <= 0.0 {
            return Err(CgFailure::Indefinite);
        }
        let step = rr / curvature;
        axpy(step, &p, x);
        axpy(-step, &ap, &mut r);
        let rr_next = dot(&r, &r);
        if rr_next.sqrt() <= tol {
            project(x);
            return Ok(matvecs);
        }
        let beta = rr_next / rr;
        rr = rr_next;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }
    project(x);
    Err(CgFailure::NotConverged {
        residual: rr.sqrt(),
        iterations: matvecs,
    })
}
