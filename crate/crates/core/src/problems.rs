//! Model problems on the unit square/cube: constant-coefficient Laplacians
//! (Dirichlet or periodic) and the discontinuous DC1 diffusion field.
//!
//! Operators are stored h²-scaled, so entries are O(1). Grid node `(i,j,k)`
//! (1-based) sits at `(ih, jh, kh)` with `h = 1/(n+1)`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::{mtx, Band, StencilMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Dirichlet,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Coefficients {
    /// `-(l1 u_xx + l2 u_yy + l3 u_zz)`; axes beyond the grid dimension are ignored.
    Constant {
        l1: f64,
        l2: f64,
        l3: f64,
    },
    Dc1,
}

impl Coefficients {
    pub const ISOTROPIC: Coefficients = Coefficients::Constant {
        l1: 1.0,
        l2: 1.0,
        l3: 1.0,
    };
}

/// Problem descriptor; also the JSON sidecar schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGridSpec")]
pub struct GridSpec {
    pub dim: usize,
    pub n: usize,
    pub boundary: Boundary,
    pub coeff: Coefficients,
}

#[derive(Deserialize)]
struct RawGridSpec {
    dim: usize,
    n: usize,
    boundary: Boundary,
    coeff: Coefficients,
}

impl TryFrom<RawGridSpec> for GridSpec {
    type Error = Error;
    fn try_from(r: RawGridSpec) -> Result<Self> {
        GridSpec::new(r.dim, r.n, r.boundary, r.coeff)
    }
}

/// Upper bound on grid points accepted from untrusted descriptors.
pub const MAX_GRID_POINTS: usize = 1 << 28;

impl GridSpec {
    pub fn new(dim: usize, n: usize, boundary: Boundary, coeff: Coefficients) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Invalid(format!("dimension {dim} not in 1..=3")));
        }
        if n < 3 {
            return Err(Error::Invalid(format!("need n >= 3, got {n}")));
        }
        if n.checked_pow(dim as u32)
            .is_none_or(|p| p > MAX_GRID_POINTS)
        {
            return Err(Error::Invalid(format!("grid {n}^{dim} is too large")));
        }
        match coeff {
            Coefficients::Constant { l1, l2, l3 } => {
                if [l1, l2, l3].iter().any(|l| !l.is_finite() || *l < 0.0) {
                    return Err(Error::Invalid(
                        "coefficients must be finite and nonnegative".into(),
                    ));
                }
            }
            Coefficients::Dc1 => {
                if boundary != Boundary::Dirichlet {
                    return Err(Error::Invalid(
                        "DC1 is defined with Dirichlet boundaries only".into(),
                    ));
                }
                if dim == 1 {
                    return Err(Error::Invalid("DC1 is defined in 2D and 3D".into()));
                }
            }
        }
        Ok(Self {
            dim,
            n,
            boundary,
            coeff,
        })
    }

    pub fn isotropic(dim: usize, n: usize) -> Result<Self> {
        Self::new(dim, n, Boundary::Dirichlet, Coefficients::ISOTROPIC)
    }

    pub fn dc1(dim: usize, n: usize) -> Result<Self> {
        Self::new(dim, n, Boundary::Dirichlet, Coefficients::Dc1)
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.n as f64 + 1.0)
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn extents(&self) -> [usize; 3] {
        std::array::from_fn(|a| if a < self.dim { self.n } else { 1 })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// System `A u = b` with the generating descriptor.
#[derive(Debug, Clone)]
pub struct Problem {
    pub a: StencilMatrix,
    pub b: Vec<f64>,
    pub spec: GridSpec,
}

impl Problem {
    /// Builds the operator and the right-hand side `b = A·1`.
    pub fn generate(spec: GridSpec) -> Result<Self> {
        let a = build_operator(&spec)?;
        let b = build_rhs(&a);
        Ok(Self { a, b, spec })
    }

    /// Writes `<stem>.mtx` and the `<stem>.json` descriptor sidecar.
    pub fn export(&self, stem: &Path) -> Result<()> {
        let f = std::fs::File::create(stem.with_extension("mtx"))?;
        mtx::write_matrix_market(&self.a.to_csr(), std::io::BufWriter::new(f))?;
        std::fs::write(stem.with_extension("json"), self.spec.to_json())?;
        Ok(())
    }
}

pub fn build_operator(spec: &GridSpec) -> Result<StencilMatrix> {
    match spec.coeff {
        Coefficients::Constant { .. } => build_laplacian(spec),
        Coefficients::Dc1 => build_dc1(spec),
    }
}

/// Constant-coefficient 2d+1 point operator.
///
/// Diagonal `2 Σ l_a` over the active axes, off-diagonals `-l_a`. Dirichlet
/// grids drop the couplings that leave the domain; periodic grids wrap.
pub fn build_laplacian(spec: &GridSpec) -> Result<StencilMatrix> {
    let Coefficients::Constant { l1, l2, l3 } = spec.coeff else {
        return Err(Error::Invalid(
            "build_laplacian needs constant coefficients".into(),
        ));
    };
    let l = [l1, l2, l3];
    let periodic = spec.boundary == Boundary::Periodic;
    let mut a = StencilMatrix::zeros(spec.extents(), spec.dim, periodic)?;
    let diag: f64 = 2.0 * l[..spec.dim].iter().sum::<f64>();
    for p in 0..a.len() {
        a.set(p, Band::Center, diag)?;
        for (axis, &la) in l.iter().enumerate().take(spec.dim) {
            for band in [Band::lower(axis), Band::upper(axis)] {
                if a.neighbor(p, band).is_some() {
                    a.set(p, band, -la)?;
                }
            }
        }
    }
    Ok(a)
}

/// DC1 permeability: `10³(⌊10x₂⌋+1)` inside the even-indexed patches, 1 elsewhere.
pub fn kappa_dc1(x: &[f64], dim: usize) -> Result<f64> {
    if !(2..=3).contains(&dim) || x.len() != dim {
        return Err(Error::Invalid(format!(
            "point {x:?} does not match dimension {dim}"
        )));
    }
    if x.iter().any(|&c| !(0.0..1.0).contains(&c)) {
        return Err(Error::Invalid(format!(
            "point {x:?} outside the unit domain"
        )));
    }
    let cell = |c: f64| (10.0 * c).floor() as i64;
    if x.iter().all(|&c| cell(c) % 2 == 0) {
        Ok(1e3 * (cell(x[1]) + 1) as f64)
    } else {
        Ok(1.0)
    }
}

/// Cell-centered finite volumes for `-div(κ ∇u)` with homogeneous Dirichlet
/// data on the whole boundary. Each node owns a cell with κ sampled at the
/// node; interior faces use the harmonic mean of the two cells, boundary
/// faces the cell's own κ.
pub fn build_dc1(spec: &GridSpec) -> Result<StencilMatrix> {
    if spec.coeff != Coefficients::Dc1 || spec.boundary != Boundary::Dirichlet {
        return Err(Error::Invalid(
            "build_dc1 needs a Dirichlet DC1 descriptor".into(),
        ));
    }
    let h = spec.h();
    let mut a = StencilMatrix::zeros(spec.extents(), spec.dim, false)?;
    let kappa: Vec<f64> = (0..a.len())
        .map(|p| {
            let c = a.coords(p);
            let x: Vec<f64> = c[..spec.dim].iter().map(|&i| (i + 1) as f64 * h).collect();
            kappa_dc1(&x, spec.dim)
        })
        .collect::<Result<_>>()?;
    for p in 0..a.len() {
        let mut diag = 0.0;
        for axis in 0..spec.dim {
            for band in [Band::lower(axis), Band::upper(axis)] {
                match a.neighbor(p, band) {
                    Some(q) => {
                        let t = harmonic_mean(kappa[p], kappa[q]);
                        a.set(p, band, -t)?;
                        diag += t;
                    }
                    None => diag += kappa[p],
                }
            }
        }
        a.set(p, Band::Center, diag)?;
    }
    Ok(a)
}

fn harmonic_mean(a: f64, b: f64) -> f64 {
    if a == b {
        a
    } else {
        2.0 * a * b / (a + b)
    }
}

/// Right-hand side with the all-ones exact solution.
pub fn build_rhs(a: &StencilMatrix) -> Vec<f64> {
    let ones = vec![1.0; a.len()];
    a.spmv(&ones).expect("sizes match")
}
