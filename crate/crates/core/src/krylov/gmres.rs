use std::time::Instant;

use super::{residual, SolveLabels, SolveOutcome, SolveReport, SolverConfig};
use crate::error::{check_len, Error, Result};
use crate::precond::Preconditioner;
use crate::sparse::{dot, norm2, LinearOperator};

/// Relative size of the new Arnoldi vector below which the Krylov space is
/// taken to be invariant.
const BREAKDOWN_TOL: f64 = 1e-14;

/// Modified Gram–Schmidt of `w` against `basis`, run twice so the basis
/// stays orthonormal to working precision; returns the norm of the
/// orthogonalized `w`, with the projection coefficients written to `h`.
fn mgs(basis: &[Vec<f64>], w: &mut [f64], h: &mut [f64]) -> f64 {
    h[..basis.len()].iter_mut().for_each(|x| *x = 0.0);
    for _ in 0..2 {
        for (i, v) in basis.iter().enumerate() {
            let c = dot(w, v);
            h[i] += c;
            w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
        }
    }
    norm2(w)
}

fn givens(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        (1.0, 0.0)
    } else {
        let r = a.hypot(b);
        (a / r, b / r)
    }
}

/// Orthonormal basis of one right-preconditioned Arnoldi cycle of length
/// `m` started from `r0`.
pub fn arnoldi_basis<A, P>(a: &A, m_inv: &P, r0: &[f64], m: usize) -> Vec<Vec<f64>>
where
    A: LinearOperator + ?Sized,
    P: Preconditioner + ?Sized,
{
    let n = r0.len();
    let beta = norm2(r0);
    let mut v = vec![r0.iter().map(|x| x / beta).collect::<Vec<_>>()];
    let mut z = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut h = vec![0.0; m + 1];
    for _ in 0..m {
        m_inv.apply(v.last().unwrap(), &mut z);
        a.apply(&z, &mut w);
        let hn = mgs(&v, &mut w, &mut h);
        if hn == 0.0 {
            break;
        }
        v.push(w.iter().map(|x| x / hn).collect());
    }
    v
}

/// Restarted GMRES(m) with right preconditioning, `A M⁻¹ u = b`, `x = M⁻¹ u`.
///
/// Convergence is declared only after the true residual is recomputed; a
/// recurrence estimate below tolerance whose true residual is not triggers a
/// restart from the current iterate.
pub fn gmres<A, P>(
    a: &A,
    b: &[f64],
    x0: &[f64],
    m_inv: &P,
    cfg: &SolverConfig,
) -> Result<SolveOutcome>
where
    A: LinearOperator + ?Sized,
    P: Preconditioner + ?Sized,
{
    cfg.validate()?;
    let n = a.dim();
    check_len(n, b.len())?;
    check_len(n, x0.len())?;
    check_len(n, m_inv.dim())?;
    let bnorm = norm2(b);
    if bnorm == 0.0 {
        return Err(Error::Invalid("right-hand side is zero".into()));
    }
    let start = Instant::now();
    let m = cfg.restart;
    let tol = cfg.tol;
    let mut x = x0.to_vec();
    let mut history = Vec::new();
    let mut total = 0usize;

    let mut v: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let mut zs: Vec<Vec<f64>> = (0..m).map(|_| vec![0.0; n]).collect();
    let mut hcols: Vec<Vec<f64>> = vec![vec![0.0; m + 1]; m];
    let mut cs = vec![0.0; m];
    let mut sn = vec![0.0; m];
    let mut g = vec![0.0; m + 1];
    let mut w = vec![0.0; n];

    let mut r = residual(a, &x, b);
    let mut rel = norm2(&r) / bnorm;
    let mut converged = rel < tol;

    while !converged && total < cfg.max_iters {
        let beta = norm2(&r);
        v.clear();
        v.push(r.iter().map(|ri| ri / beta).collect());
        g.iter_mut().for_each(|gi| *gi = 0.0);
        g[0] = beta;
        let mut j = 0;
        let mut updated = false;
        while j < m && total < cfg.max_iters {
            m_inv.apply(&v[j], &mut zs[j]);
            a.apply(&zs[j], &mut w);
            if w.iter().any(|x| !x.is_finite()) {
                return Err(Error::Divergence {
                    iteration: total + 1,
                });
            }
            let wnorm = norm2(&w);
            let h = &mut hcols[j];
            let hn = mgs(&v, &mut w, h);
            h[j + 1] = hn;
            for i in 0..j {
                let t = cs[i] * h[i] + sn[i] * h[i + 1];
                h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
                h[i] = t;
            }
            let (c, s) = givens(h[j], h[j + 1]);
            cs[j] = c;
            sn[j] = s;
            h[j] = c * h[j] + s * h[j + 1];
            h[j + 1] = 0.0;
            g[j + 1] = -s * g[j];
            g[j] *= c;
            total += 1;
            j += 1;
            let est = g[j].abs() / bnorm;
            if cfg.record_history {
                history.push(est);
            }
            if !est.is_finite() {
                return Err(Error::Divergence { iteration: total });
            }
            let breakdown = hn <= BREAKDOWN_TOL * wnorm;
            if est < tol || breakdown {
                update(&mut x, &hcols, &g, &zs, j);
                updated = true;
                r = residual(a, &x, b);
                rel = norm2(&r) / bnorm;
                converged = rel < tol;
                break;
            }
            v.push(w.iter().map(|wi| wi / hn).collect());
        }
        if !updated {
            update(&mut x, &hcols, &g, &zs, j);
            r = residual(a, &x, b);
            rel = norm2(&r) / bnorm;
            converged = rel < tol;
        }
    }

    let report = SolveReport {
        iterations: total,
        converged,
        final_relres: rel,
        history,
        wall_seconds: start.elapsed().as_secs_f64(),
        labels: SolveLabels {
            solver: format!("gmres({m})"),
            side: "right".into(),
            ..Default::default()
        },
    };
    Ok(SolveOutcome { x, report })
}

/// `x += Z y` with `y` from the `k × k` upper-triangular least-squares system.
fn update(x: &mut [f64], hcols: &[Vec<f64>], g: &[f64], zs: &[Vec<f64>], k: usize) {
    let mut y = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = g[i];
        for jj in i + 1..k {
            s -= hcols[jj][i] * y[jj];
        }
        y[i] = s / hcols[i][i];
    }
    for (yi, z) in y.iter().zip(zs) {
        x.iter_mut().zip(z).for_each(|(xj, zj)| *xj += yi * zj);
    }
}
