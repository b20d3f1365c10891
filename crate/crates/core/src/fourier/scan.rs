use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{AnalysisMode, Convention, FourierMode, SymbolChain};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extreme {
    pub min_mode: [usize; 3],
    pub max_mode: [usize; 3],
    pub min_val: f64,
    pub max_val: f64,
}

impl Extreme {
    fn start(idx: [usize; 3], v: f64) -> Self {
        Self {
            min_mode: idx,
            max_mode: idx,
            min_val: v,
            max_val: v,
        }
    }

    // Strict comparisons keep the first (lexicographically smallest) mode.
    fn push(&mut self, idx: [usize; 3], v: f64) {
        if v < self.min_val {
            self.min_val = v;
            self.min_mode = idx;
        }
        if v > self.max_val {
            self.max_val = v;
            self.max_mode = idx;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumExtremes {
    pub a: Extreme,
    pub t: Extreme,
    pub p: Extreme,
    pub b: Extreme,
    pub b_minus_a: Extreme,
    pub binv_a: Extreme,
}

/// All mode indices in lexicographic order, first axis outermost.
pub(crate) fn mode_indices(n: usize, dim: usize, convention: Convention) -> Vec<[usize; 3]> {
    let (_, range) = convention.grid(n);
    let axis = |ax: usize| if ax < dim { range.clone() } else { 0..1 };
    let mut out = Vec::with_capacity(range.len().pow(dim as u32));
    for s in axis(0) {
        for t in axis(1) {
            for r in axis(2) {
                out.push([s, t, r]);
            }
        }
    }
    out
}

/// Exhaustive scan of every non-null mode on the grid.
pub fn spectrum_extremes(
    n: usize,
    dim: usize,
    coeffs: [f64; 3],
    analysis: AnalysisMode,
    convention: Convention,
) -> Result<SpectrumExtremes> {
    if n < 4 {
        return Err(Error::Invalid(format!(
            "spectrum scan needs n >= 4, got {n}"
        )));
    }
    let mut acc: Option<SpectrumExtremes> = None;
    for idx in mode_indices(n, dim, convention) {
        let mode = FourierMode::new(idx, n, dim, convention)?;
        if mode.null_mode {
            continue;
        }
        let c = SymbolChain::evaluate(&mode, coeffs, analysis)?;
        match acc.as_mut() {
            None => {
                acc = Some(SpectrumExtremes {
                    a: Extreme::start(idx, c.lam_a),
                    t: Extreme::start(idx, c.lam_t),
                    p: Extreme::start(idx, c.lam_p),
                    b: Extreme::start(idx, c.lam_b),
                    b_minus_a: Extreme::start(idx, c.lam_b_minus_a),
                    binv_a: Extreme::start(idx, c.lam_binv_a),
                })
            }
            Some(e) => {
                e.a.push(idx, c.lam_a);
                e.t.push(idx, c.lam_t);
                e.p.push(idx, c.lam_p);
                e.b.push(idx, c.lam_b);
                e.b_minus_a.push(idx, c.lam_b_minus_a);
                e.binv_a.push(idx, c.lam_binv_a);
            }
        }
    }
    acc.ok_or_else(|| Error::Invalid("no non-null modes".into()))
}

/// λmax(B⁻¹A) / λmin(B⁻¹A) over the non-null modes.
pub fn cond_discrete(
    n: usize,
    dim: usize,
    coeffs: [f64; 3],
    analysis: AnalysisMode,
    convention: Convention,
) -> Result<f64> {
    let e = spectrum_extremes(n, dim, coeffs, analysis, convention)?;
    Ok(e.binv_a.max_val / e.binv_a.min_val)
}

/// Leading constant c of cond(B⁻¹A) ≈ c h⁻² for the isotropic 3D operator:
/// 25σ / (144 (3π²σ + 4 + π²)) with σ = 5 + 5π² + π⁴.
pub const ASYMPTOTIC_CONSTANT: f64 = {
    let pi2 = PI * PI;
    let sigma = 5.0 + 5.0 * pi2 + pi2 * pi2;
    25.0 * sigma / (144.0 * (3.0 * pi2 * sigma + 4.0 + pi2))
};

pub fn cond_asymptotic(h: f64) -> Result<f64> {
    if !(h > 0.0 && h <= 0.1) {
        return Err(Error::Invalid(format!("mesh width {h} outside (0, 0.1]")));
    }
    Ok(ASYMPTOTIC_CONSTANT / (h * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ISO: [f64; 3] = [1.0; 3];

    #[test]
    fn extremes_locations_n16() {
        let e = spectrum_extremes(16, 3, ISO, AnalysisMode::Paper, Convention::Paper).unwrap();
        assert_eq!(e.binv_a.min_mode, [1, 1, 1]);
        assert_eq!(e.binv_a.max_mode, [8, 8, 8]);
        assert_eq!(e.a.max_mode, [8, 8, 8]);
        assert!(e.b.max_val < 7921.0 / 648.0);
        assert!(e.b.min_val > 25.0 / 36.0);
    }

    #[test]
    fn asymptotic_constant() {
        assert!((ASYMPTOTIC_CONSTANT - 0.0058455).abs() < 1e-6);
        assert!((cond_asymptotic(0.01).unwrap() - 58.455).abs() < 0.01);
        assert!(cond_asymptotic(0.2).is_err());
        assert!(cond_asymptotic(0.0).is_err());
    }

    #[test]
    fn small_grid_rejected() {
        assert!(spectrum_extremes(3, 3, ISO, AnalysisMode::Paper, Convention::Paper).is_err());
    }
}
