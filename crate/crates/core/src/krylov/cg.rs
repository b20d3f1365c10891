use std::time::Instant;

use super::{residual, SolveLabels, SolveOutcome, SolveReport, SolverConfig};
use crate::error::{check_len, Error, Result};
use crate::precond::Preconditioner;
use crate::sparse::{dot, norm2, LinearOperator};

/// Preconditioned conjugate gradients for SPD `A` and SPD `M`.
pub fn cg<A, P>(a: &A, b: &[f64], x0: &[f64], m_inv: &P, cfg: &SolverConfig) -> Result<SolveOutcome>
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
    let mut x = x0.to_vec();
    let mut r = residual(a, &x, b);
    let mut rel = norm2(&r) / bnorm;
    let mut converged = rel < cfg.tol;
    let mut history = Vec::new();
    let mut z = vec![0.0; n];
    let mut q = vec![0.0; n];
    m_inv.apply(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut total = 0;
    while !converged && total < cfg.max_iters {
        a.apply(&p, &mut q);
        let pq = dot(&p, &q);
        if !pq.is_finite() {
            return Err(Error::Divergence {
                iteration: total + 1,
            });
        }
        if pq <= 0.0 {
            return Err(Error::NotSpd {
                context: format!("pᵀAp = {pq:e} at iteration {}", total + 1),
            });
        }
        let alpha = rz / pq;
        x.iter_mut().zip(&p).for_each(|(xi, pi)| *xi += alpha * pi);
        r.iter_mut().zip(&q).for_each(|(ri, qi)| *ri -= alpha * qi);
        total += 1;
        let est = norm2(&r) / bnorm;
        if cfg.record_history {
            history.push(est);
        }
        if est < cfg.tol {
            r = residual(a, &x, b);
            rel = norm2(&r) / bnorm;
            if rel < cfg.tol {
                converged = true;
                break;
            }
        } else {
            rel = est;
        }
        m_inv.apply(&r, &mut z);
        let rz_new = dot(&r, &z);
        if rz_new <= 0.0 && rz_new.is_finite() && norm2(&r) > 0.0 {
            return Err(Error::NotSpd {
                context: "preconditioner is not positive definite".into(),
            });
        }
        let beta = rz_new / rz;
        rz = rz_new;
        p.iter_mut()
            .zip(&z)
            .for_each(|(pi, zi)| *pi = zi + beta * *pi);
    }
    if !converged {
        rel = norm2(&residual(a, &x, b)) / bnorm;
    }
    let report = SolveReport {
        iterations: total,
        converged,
        final_relres: rel,
        history,
        wall_seconds: start.elapsed().as_secs_f64(),
        labels: SolveLabels {
            solver: "cg".into(),
            side: "split".into(),
            ..Default::default()
        },
    };
    Ok(SolveOutcome { x, report })
}
