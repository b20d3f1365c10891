use std::fmt;
use std::str::FromStr;

use super::{aggregate_matching, galerkin_coarse, AggregateMap};
use crate::error::{Error, Result};
use crate::precond::{Hssor, Preconditioner, Ssor};
use crate::sparse::{CsrMatrix, LinearOperator, SkylineCholesky, StencilMatrix};

/// Largest coarse system factored directly.
pub const MAX_COARSE: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SmootherKind {
    Hssor,
    Ssor,
}

impl fmt::Display for SmootherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SmootherKind::Hssor => "hssor",
            SmootherKind::Ssor => "ssor",
        })
    }
}

impl FromStr for SmootherKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hssor" => Ok(SmootherKind::Hssor),
            "ssor" => Ok(SmootherKind::Ssor),
            _ => Err(Error::Invalid(format!("unknown smoother '{s}'"))),
        }
    }
}

/// Two-grid preconditioner with pre-smoothing only:
/// `B⁻¹ = S⁻¹ + M⁻¹ − M⁻¹ A S⁻¹` with `M⁻¹ = P A_c⁻¹ Pᵀ`.
pub struct TwoGrid {
    a: Box<dyn LinearOperator + Send + Sync>,
    smoother: Box<dyn Preconditioner>,
    agg: AggregateMap,
    a_c: CsrMatrix,
    coarse: SkylineCholesky,
    label: String,
}

impl TwoGrid {
    pub fn setup(a: &StencilMatrix, smoother: SmootherKind, cf: f64) -> Result<Self> {
        Self::setup_with_partition(a, smoother, cf, None)
    }

    /// As [`setup`](Self::setup), but uses `partition` instead of matching when given.
    pub fn setup_with_partition(
        a: &StencilMatrix,
        smoother: SmootherKind,
        cf: f64,
        partition: Option<Vec<usize>>,
    ) -> Result<Self> {
        let csr = a.to_csr();
        let agg = match partition {
            Some(part) => {
                if part.len() != a.len() {
                    return Err(Error::DimensionMismatch {
                        expected: a.len(),
                        got: part.len(),
                    });
                }
                AggregateMap::from_part(part)?
            }
            None => aggregate_matching(&csr, cf, a.dim())?,
        };
        let s: Box<dyn Preconditioner> = match smoother {
            SmootherKind::Hssor => Box::new(Hssor::new(a.clone())?),
            SmootherKind::Ssor => Box::new(Ssor::new(csr.clone())?),
        };
        let label = format!(
            "gmg-{}",
            if smoother == SmootherKind::Hssor {
                "hs"
            } else {
                "ss"
            }
        );
        Self::from_parts(&csr, Box::new(a.clone()), s, agg, label)
    }

    /// Generic assembly from a matrix, its smoother and an aggregation.
    pub fn from_parts(
        a_csr: &CsrMatrix,
        a: Box<dyn LinearOperator + Send + Sync>,
        smoother: Box<dyn Preconditioner>,
        agg: AggregateMap,
        label: String,
    ) -> Result<Self> {
        if smoother.dim() != a.dim() || agg.n_fine() != a.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: agg.n_fine(),
            });
        }
        if agg.n_coarse() > MAX_COARSE {
            return Err(Error::TooLarge {
                n: agg.n_coarse(),
                limit: MAX_COARSE,
            });
        }
        let a_c = galerkin_coarse(a_csr, &agg)?;
        let coarse = SkylineCholesky::factor(&a_c)?;
        Ok(Self {
            a,
            smoother,
            agg,
            a_c,
            coarse,
            label,
        })
    }

    pub fn aggregates(&self) -> &AggregateMap {
        &self.agg
    }

    pub fn coarse_matrix(&self) -> &CsrMatrix {
        &self.a_c
    }
}

impl Preconditioner for TwoGrid {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        let n = self.dim();
        self.smoother.apply(r, z);
        let mut t = vec![0.0; n];
        self.a.apply(z, &mut t);
        let mut rc = vec![0.0; self.agg.n_coarse()];
        for (i, &g) in self.agg.part().iter().enumerate() {
            rc[g] += r[i] - t[i];
        }
        self.coarse.solve_in_place(&mut rc);
        for (i, &g) in self.agg.part().iter().enumerate() {
            z[i] += rc[g];
        }
    }

    fn name(&self) -> String {
        self.label.clone()
    }
}
