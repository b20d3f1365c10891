use super::Preconditioner;
use crate::error::{Error, Result};
use crate::sparse::{Band, StencilMatrix};

/// Diagonal block used by block SSOR.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockShape {
    /// One node per block: plain point SSOR.
    Point,
    /// One grid line (x-direction).
    Line,
    /// One grid plane (xy).
    Plane,
}

impl BlockShape {
    fn geometry(self, a: &StencilMatrix) -> (usize, usize, &'static [Band]) {
        let [nx, ny, _] = a.dims();
        match self {
            BlockShape::Point => (1, 0, &[]),
            BlockShape::Line => (nx, 1, &[Band::MinusX, Band::PlusX]),
            BlockShape::Plane => (
                nx * ny,
                nx,
                &[Band::MinusX, Band::PlusX, Band::MinusY, Band::PlusY],
            ),
        }
    }
}

/// Number of stored factor values: `N · (2w + 1)` for band half-width `w`.
pub fn bssor_memory_values(a: &StencilMatrix, shape: BlockShape) -> u64 {
    let (_, w, _) = shape.geometry(a);
    a.len() as u64 * (2 * w as u64 + 1)
}

/// Banded LU factors (no pivoting) of every diagonal block.
#[derive(Debug, Clone)]
pub struct BssorFactors {
    block: usize,
    width: usize,
    /// Block `b`, row `i`, column `j` lives at
    /// `b·block·(2w+1) + i·(2w+1) + (j − i + w)`.
    lu: Vec<f64>,
}

impl BssorFactors {
    fn stride(&self) -> usize {
        2 * self.width + 1
    }

    fn entry(&self, b: usize, i: usize, j: usize) -> f64 {
        let s = self.stride();
        self.lu[b * self.block * s + i * s + j + self.width - i]
    }

    /// Solves `D_b x = rhs` in place.
    fn solve(&self, b: usize, x: &mut [f64]) {
        let n = self.block;
        let w = self.width;
        for i in 0..n {
            let mut s = x[i];
            for j in i.saturating_sub(w)..i {
                s -= self.entry(b, i, j) * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..(i + w + 1).min(n) {
                s -= self.entry(b, i, j) * x[j];
            }
            x[i] = s / self.entry(b, i, i);
        }
    }

    /// Dense reconstruction `L·U` of block `b`, for checks.
    pub fn block_product(&self, b: usize) -> Vec<Vec<f64>> {
        let n = self.block;
        let mut out = vec![vec![0.0; n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                let mut s = 0.0;
                for k in 0..=i.min(j) {
                    let l = if k == i {
                        1.0
                    } else if i - k <= self.width {
                        self.entry(b, i, k)
                    } else {
                        0.0
                    };
                    let u = if j - k <= self.width {
                        self.entry(b, k, j)
                    } else {
                        0.0
                    };
                    s += l * u;
                }
                *v = s;
            }
        }
        out
    }
}

/// Block SSOR with ω = 1: `B = (D_b + L_b) D_b⁻¹ (D_b + U_b)`, where `D_b`
/// collects the couplings inside each block and `L_b`/`U_b` the rest.
#[derive(Debug, Clone)]
pub struct Bssor {
    a: StencilMatrix,
    shape: BlockShape,
    factors: BssorFactors,
    /// Bands that couple a block to earlier / later blocks.
    lower: Vec<Band>,
    upper: Vec<Band>,
}

impl Bssor {
    pub fn setup(a: &StencilMatrix, shape: BlockShape) -> Result<Self> {
        if a.is_periodic() {
            return Err(Error::Invalid(
                "block SSOR needs a Dirichlet stencil".into(),
            ));
        }
        let (block, width, inner) = shape.geometry(a);
        let stride = 2 * width + 1;
        let nblocks = a.len() / block;
        let mut lu = vec![0.0; a.len() * stride];
        for b in 0..nblocks {
            let d = &mut lu[b * block * stride..(b + 1) * block * stride];
            for i in 0..block {
                let p = b * block + i;
                d[i * stride + width] = a.diagonal()[p];
                for &band in inner {
                    if let Some(q) = a.neighbor(p, band) {
                        let j = q - b * block;
                        d[i * stride + j + width - i] = a.band(band)[p];
                    }
                }
            }
            for k in 0..block {
                let piv = d[k * stride + width];
                if piv == 0.0 || !piv.is_finite() {
                    return Err(Error::SingularFactor { row: b * block + k });
                }
                for i in k + 1..(k + width + 1).min(block) {
                    let f = d[i * stride + k + width - i] / piv;
                    if f == 0.0 {
                        continue;
                    }
                    d[i * stride + k + width - i] = f;
                    for j in k + 1..(k + width + 1).min(block) {
                        d[i * stride + j + width - i] -= f * d[k * stride + j + width - k];
                    }
                }
            }
        }
        let outer: Vec<(usize, bool)> = (0..a.dim())
            .flat_map(|axis| [(axis, false), (axis, true)])
            .filter(|(axis, up)| {
                let band = if *up {
                    Band::upper(*axis)
                } else {
                    Band::lower(*axis)
                };
                !inner.contains(&band)
            })
            .collect();
        let lower = outer
            .iter()
            .filter(|(_, up)| !up)
            .map(|(ax, _)| Band::lower(*ax))
            .collect();
        let upper = outer
            .iter()
            .filter(|(_, up)| *up)
            .map(|(ax, _)| Band::upper(*ax))
            .collect();
        Ok(Self {
            a: a.clone(),
            shape,
            factors: BssorFactors { block, width, lu },
            lower,
            upper,
        })
    }

    pub fn shape(&self) -> BlockShape {
        self.shape
    }

    pub fn factors(&self) -> &BssorFactors {
        &self.factors
    }
}

impl Preconditioner for Bssor {
    fn dim(&self) -> usize {
        self.a.len()
    }

    fn apply(&self, r: &[f64], z: &mut [f64]) {
        let n = self.a.len();
        assert_eq!(r.len(), n);
        assert_eq!(z.len(), n);
        let s = self.factors.block;
        let nb = n / s;
        let mut t = vec![0.0; s];
        for b in 0..nb {
            let base = b * s;
            for i in 0..s {
                let p = base + i;
                let mut v = r[p];
                for &band in &self.lower {
                    if let Some(q) = self.a.neighbor(p, band) {
                        v -= self.a.band(band)[p] * z[q];
                    }
                }
                t[i] = v;
            }
            self.factors.solve(b, &mut t);
            z[base..base + s].copy_from_slice(&t);
        }
        for b in (0..nb).rev() {
            let base = b * s;
            let mut any = false;
            for i in 0..s {
                let p = base + i;
                let mut v = 0.0;
                for &band in &self.upper {
                    if let Some(q) = self.a.neighbor(p, band) {
                        v += self.a.band(band)[p] * z[q];
                        any = true;
                    }
                }
                t[i] = v;
            }
            if !any {
                continue;
            }
            self.factors.solve(b, &mut t);
            for i in 0..s {
                z[base + i] -= t[i];
            }
        }
    }

    fn name(&self) -> String {
        "bssor".into()
    }
}
