//! Fourier symbols of the model operator and its hierarchical SSOR
//! factorization on the periodic grid.

mod periodic;
mod report;
mod scan;

pub use periodic::{
    fourier_vector, hssor_dense, periodic_laplacian, verify_eigenpair, verify_symbols, VerifyReport,
};
pub use report::{AnalysisReport, BoundCheck, ModeRow};
pub use scan::{
    cond_asymptotic, cond_discrete, spectrum_extremes, Extreme, SpectrumExtremes,
    ASYMPTOTIC_CONSTANT,
};

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the T level symbol is formed.
///
/// `Paper` takes T = M + L₁ + L₁ᵀ; `Exact` takes the product
/// (M + L₁)(I + M⁻¹L₁ᵀ), which adds l₁²/m and is what the operator computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AnalysisMode {
    Paper,
    Exact,
}

/// Angle grid. `Paper`: θ = 2πs/(n+1), s = 1..n. `Circulant`: θ = 2πs/n,
/// s = 0..n−1, which are the true eigenvectors of n-periodic operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    Paper,
    Circulant,
}

impl fmt::Display for AnalysisMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnalysisMode::Paper => "paper",
            AnalysisMode::Exact => "exact",
        })
    }
}

impl FromStr for AnalysisMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(AnalysisMode::Paper),
            "exact" => Ok(AnalysisMode::Exact),
            _ => Err(Error::Invalid(format!(
                "unknown analysis mode `{s}` (paper|exact)"
            ))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Paper => "paper",
            Convention::Circulant => "circulant",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(Convention::Paper),
            "circulant" => Ok(Convention::Circulant),
            _ => Err(Error::Invalid(format!(
                "unknown convention `{s}` (paper|circulant)"
            ))),
        }
    }
}

impl Convention {
    /// Denominator of the angle and the admissible index range.
    fn grid(self, n: usize) -> (usize, std::ops::Range<usize>) {
        match self {
            Convention::Paper => (n + 1, 1..n + 1),
            Convention::Circulant => (n, 0..n),
        }
    }
}

/// One Fourier mode. Inactive axes (beyond `dim`) carry index 0 and angle 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMode {
    pub index: [usize; 3],
    pub angles: [f64; 3],
    pub dim: usize,
    pub convention: Option<Convention>,
    pub null_mode: bool,
    cos: [f64; 3],
    sin2: [f64; 3],
}

impl FourierMode {
    /// Mode `index` on an `n`-point grid. Trigonometric values are taken
    /// from the folded index min(s, den − s), so modes symmetric about π
    /// evaluate to identical bits.
    pub fn new(index: [usize; 3], n: usize, dim: usize, convention: Convention) -> Result<Self> {
        check_dim(dim)?;
        if n == 0 {
            return Err(Error::Invalid("grid size must be positive".into()));
        }
        let (den, range) = convention.grid(n);
        let mut angles = [0.0; 3];
        let mut cos = [1.0; 3];
        let mut sin2 = [0.0; 3];
        for ax in 0..3 {
            let s = index[ax];
            if ax >= dim {
                if s != 0 {
                    return Err(Error::Invalid(format!(
                        "mode index on inactive axis {ax} must be 0"
                    )));
                }
                continue;
            }
            if !range.contains(&s) {
                return Err(Error::Invalid(format!(
                    "mode index {s} outside {}..{} for the {convention} convention",
                    range.start,
                    range.end - 1
                )));
            }
            angles[ax] = 2.0 * PI * s as f64 / den as f64;
            let folded = s.min(den - s);
            let a = 2.0 * PI * folded as f64 / den as f64;
            cos[ax] = a.cos();
            let h = (a / 2.0).sin();
            sin2[ax] = h * h;
        }
        let null_mode = convention == Convention::Circulant && index[..dim].iter().all(|&s| s == 0);
        Ok(Self {
            index,
            angles,
            dim,
            convention: Some(convention),
            null_mode,
            cos,
            sin2,
        })
    }

    /// Mode at arbitrary angles; no grid attached.
    pub fn from_angles(angles: [f64; 3], dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut cos = [1.0; 3];
        let mut sin2 = [0.0; 3];
        let mut a = [0.0; 3];
        for ax in 0..dim {
            a[ax] = angles[ax];
            cos[ax] = angles[ax].cos();
            let h = (angles[ax] / 2.0).sin();
            sin2[ax] = h * h;
        }
        let null_mode = a[..dim].iter().all(|&t| t == 0.0);
        Ok(Self {
            index: [0; 3],
            angles: a,
            dim,
            convention: None,
            null_mode,
            cos,
            sin2,
        })
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if (1..=3).contains(&dim) {
        Ok(())
    } else {
        Err(Error::Invalid(format!(
            "dimension must be 1, 2 or 3, got {dim}"
        )))
    }
}

/// Symbols of A, T, P, B, B − A and B⁻¹A at one mode.
///
/// In fewer than three dimensions the chain stops early: B = P in 2D and
/// B = T in 1D.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymbolChain {
    pub lam_a: f64,
    pub lam_t: f64,
    pub lam_p: f64,
    pub lam_b: f64,
    pub lam_b_minus_a: f64,
    pub lam_binv_a: f64,
    pub mode: AnalysisMode,
}

/// 4 Σ lₖ sin²(θₖ/2) over the active axes.
pub fn lambda_a(mode: &FourierMode, coeffs: [f64; 3]) -> f64 {
    (0..mode.dim)
        .map(|ax| 4.0 * coeffs[ax] * mode.sin2[ax])
        .sum()
}

/// The increasing branch of x + 1/x used by the bound recursion.
pub fn x_plus_inv(x: f64) -> f64 {
    x + 1.0 / x
}

impl SymbolChain {
    pub fn evaluate(mode: &FourierMode, coeffs: [f64; 3], analysis: AnalysisMode) -> Result<Self> {
        if coeffs.iter().any(|c| !(*c >= 0.0) || !c.is_finite()) {
            return Err(Error::Invalid(
                "coefficients must be finite and nonnegative".into(),
            ));
        }
        let dim = mode.dim;
        let [l1, l2, l3] = coeffs;
        let m: f64 = 2.0 * coeffs[..dim].iter().sum::<f64>();
        if !(m > 0.0) {
            return Err(Error::Invalid("diagonal symbol is zero".into()));
        }
        let lam_a = lambda_a(mode, coeffs);
        let cross = match analysis {
            AnalysisMode::Paper => 0.0,
            AnalysisMode::Exact => l1 * l1 / m,
        };
        let lam_t = m - 2.0 * l1 * mode.cos[0] + cross;
        let mut bma = cross;
        let (lam_p, lam_b) = if dim == 1 {
            (lam_t, lam_t)
        } else {
            let lam_p = level(lam_t, l2, mode.cos[1], &mut bma)?;
            if dim == 2 {
                (lam_p, lam_p)
            } else {
                (lam_p, level(lam_p, l3, mode.cos[2], &mut bma)?)
            }
        };
        let lam_binv_a = if mode.null_mode { 0.0 } else { lam_a / lam_b };
        Ok(Self {
            lam_a,
            lam_t,
            lam_p,
            lam_b,
            lam_b_minus_a: bma,
            lam_binv_a,
            mode: analysis,
        })
    }
}

/// λ(next) = λ − 2 l cos + l²/λ; accumulates the l²/λ part into `bma`.
fn level(lam: f64, l: f64, c: f64, bma: &mut f64) -> Result<f64> {
    if !(lam > 0.0) {
        return Err(Error::Invalid(format!(
            "inner symbol {lam:e} is not positive"
        )));
    }
    let extra = l * l / lam;
    *bma += extra;
    Ok(lam - 2.0 * l * c + extra)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ISO: [f64; 3] = [1.0; 3];

    fn at(angles: [f64; 3], dim: usize, m: AnalysisMode) -> SymbolChain {
        SymbolChain::evaluate(&FourierMode::from_angles(angles, dim).unwrap(), ISO, m).unwrap()
    }

    #[test]
    fn corner_values() {
        let c = at([PI; 3], 3, AnalysisMode::Paper);
        assert!((c.lam_a - 12.0).abs() < 1e-14);
        assert!((c.lam_t - 8.0).abs() < 1e-14);
        assert!((c.lam_p - 81.0 / 8.0).abs() < 1e-13);
        assert!((c.lam_b - 7921.0 / 648.0).abs() < 1e-13);
        assert!((c.lam_b_minus_a - 145.0 / 648.0).abs() < 1e-14);
        assert!((c.lam_binv_a - 7776.0 / 7921.0).abs() < 1e-14);
        let e = at([PI; 3], 3, AnalysisMode::Exact);
        assert!((e.lam_t - (8.0 + 1.0 / 6.0)).abs() < 1e-14);
        let z = at([0.0; 3], 3, AnalysisMode::Paper);
        assert_eq!(z.lam_a, 0.0);
        assert_eq!(z.lam_t, 4.0);
        assert!((z.lam_b - 25.0 / 36.0).abs() < 1e-14);
        assert!((z.lam_b_minus_a - 25.0 / 36.0).abs() < 1e-14);
        assert_eq!(z.lam_binv_a, 0.0);
    }

    #[test]
    fn single_axis_value() {
        let c = at([2.0 * PI / 5.0, 0.0, 0.0], 3, AnalysisMode::Paper);
        assert!((c.lam_a - 1.381966011250105).abs() < 1e-14);
    }

    #[test]
    fn folded_ties_are_bitwise() {
        let a = FourierMode::new([8, 8, 8], 16, 3, Convention::Paper).unwrap();
        let b = FourierMode::new([9, 9, 9], 16, 3, Convention::Paper).unwrap();
        let ca = SymbolChain::evaluate(&a, ISO, AnalysisMode::Paper).unwrap();
        let cb = SymbolChain::evaluate(&b, ISO, AnalysisMode::Paper).unwrap();
        assert_eq!(ca, cb);
    }

    #[test]
    fn index_range_enforced() {
        assert!(FourierMode::new([0, 1, 1], 8, 3, Convention::Paper).is_err());
        assert!(FourierMode::new([8, 1, 1], 8, 3, Convention::Circulant).is_err());
        assert!(FourierMode::new([1, 1, 1], 8, 2, Convention::Paper).is_err());
        assert!(
            FourierMode::new([0, 0, 0], 8, 3, Convention::Circulant)
                .unwrap()
                .null_mode
        );
    }

    #[test]
    fn parse_modes() {
        assert_eq!(
            "exact".parse::<AnalysisMode>().unwrap(),
            AnalysisMode::Exact
        );
        assert_eq!(
            "circulant".parse::<Convention>().unwrap(),
            Convention::Circulant
        );
        assert!("x".parse::<Convention>().is_err());
    }
}
