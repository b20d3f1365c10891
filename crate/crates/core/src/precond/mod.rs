//! Preconditioners `z = B⁻¹ r`.
//!
//! Point SSOR and HSSOR are pure sweeps over the matrix and keep no factors;
//! ILU(0) and block SSOR store factors computed at setup.

mod bssor;
mod hssor;
mod ilu0;
mod ssor;

use std::fmt;
use std::str::FromStr;

pub use bssor::{bssor_memory_values, BlockShape, Bssor, BssorFactors};
pub use hssor::{hssor_apply, hssor_multiply, Hssor};
pub use ilu0::{ilu0_setup, Ilu0Factors, ILU0_PIVOT_TOL};
pub use ssor::{ssor_apply, Ssor};

use crate::error::{Error, Result};
use crate::multigrid::{SmootherKind, TwoGrid};
use crate::sparse::{CsrMatrix, StencilMatrix};

pub trait Preconditioner: Send + Sync {
    fn dim(&self) -> usize;
    fn apply(&self, r: &[f64], z: &mut [f64]);
    fn name(&self) -> String;

    /// Allocating convenience wrapper around [`apply`](Self::apply).
    fn apply_vec(&self, r: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.dim()];
        self.apply(r, &mut z);
        z
    }
}

impl<P: Preconditioner + ?Sized> Preconditioner for Box<P> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        (**self).apply(r, z)
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Identity(pub usize);

impl Preconditioner for Identity {
    fn dim(&self) -> usize {
        self.0
    }
    fn apply(&self, r: &[f64], z: &mut [f64]) {
        z.copy_from_slice(r);
    }
    fn name(&self) -> String {
        "none".into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrecondKind {
    Identity,
    Ssor,
    Bssor,
    Ilu0,
    Hssor,
    TwoGrid(SmootherKind),
}

impl PrecondKind {
    pub const ALL: [PrecondKind; 7] = [
        PrecondKind::TwoGrid(SmootherKind::Hssor),
        PrecondKind::TwoGrid(SmootherKind::Ssor),
        PrecondKind::Ilu0,
        PrecondKind::Hssor,
        PrecondKind::Ssor,
        PrecondKind::Bssor,
        PrecondKind::Identity,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PrecondKind::Identity => "none",
            PrecondKind::Ssor => "ssor",
            PrecondKind::Bssor => "bssor",
            PrecondKind::Ilu0 => "ilu0",
            PrecondKind::Hssor => "hssor",
            PrecondKind::TwoGrid(SmootherKind::Hssor) => "gmg-hs",
            PrecondKind::TwoGrid(SmootherKind::Ssor) => "gmg-ss",
        }
    }

    /// Column heading used in the benchmark tables.
    pub fn heading(self) -> &'static str {
        match self {
            PrecondKind::Identity => "None",
            PrecondKind::Ssor => "SSOR",
            PrecondKind::Bssor => "BSSOR",
            PrecondKind::Ilu0 => "ILU(0)",
            PrecondKind::Hssor => "HSSOR",
            PrecondKind::TwoGrid(SmootherKind::Hssor) => "GMG-HS",
            PrecondKind::TwoGrid(SmootherKind::Ssor) => "GMG-SS",
        }
    }
}

impl fmt::Display for PrecondKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PrecondKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PrecondKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown preconditioner '{s}'")))
    }
}

/// Preconditioner choice plus its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecondSpec {
    pub kind: PrecondKind,
    /// `None` picks plane blocks in 3D and line blocks otherwise.
    pub block: Option<BlockShape>,
    pub cf: f64,
    /// Optional externally computed aggregation (`part` array).
    pub partition: Option<Vec<usize>>,
}

impl PrecondSpec {
    pub fn new(kind: PrecondKind) -> Self {
        Self {
            kind,
            block: None,
            cf: 4.5,
            partition: None,
        }
    }

    pub fn with_cf(mut self, cf: f64) -> Self {
        self.cf = cf;
        self
    }

    pub fn block_shape(&self, a: &StencilMatrix) -> BlockShape {
        self.block.unwrap_or(if a.dim() == 3 {
            BlockShape::Plane
        } else {
            BlockShape::Line
        })
    }

    /// Builds the preconditioner for a grid operator.
    pub fn build(&self, a: &StencilMatrix) -> Result<Box<dyn Preconditioner>> {
        Ok(match self.kind {
            PrecondKind::Identity => Box::new(Identity(a.len())),
            PrecondKind::Ssor => Box::new(Ssor::new(a.to_csr())?),
            PrecondKind::Ilu0 => Box::new(ilu0_setup(&a.to_csr())?),
            PrecondKind::Hssor => Box::new(Hssor::new(a.clone())?),
            PrecondKind::Bssor => Box::new(Bssor::setup(a, self.block_shape(a))?),
            PrecondKind::TwoGrid(smoother) => Box::new(TwoGrid::setup_with_partition(
                a,
                smoother,
                self.cf,
                self.partition.clone(),
            )?),
        })
    }

    /// Builds from a general sparse matrix; grid-structured kinds are refused.
    pub fn build_csr(&self, a: &CsrMatrix) -> Result<Box<dyn Preconditioner>> {
        Ok(match self.kind {
            PrecondKind::Identity => Box::new(Identity(a.nrows())),
            PrecondKind::Ssor => Box::new(Ssor::new(a.clone())?),
            PrecondKind::Ilu0 => Box::new(ilu0_setup(a)?),
            k => return Err(Error::Invalid(format!("{k} needs grid structure"))),
        })
    }
}
