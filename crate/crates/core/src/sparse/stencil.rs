use super::{CsrMatrix, LinearOperator};
use crate::error::{check_len, Error, Result};

/// One of the seven stencil offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Band {
    Center,
    MinusX,
    PlusX,
    MinusY,
    PlusY,
    MinusZ,
    PlusZ,
}

impl Band {
    pub const ALL: [Band; 7] = [
        Band::Center,
        Band::MinusX,
        Band::PlusX,
        Band::MinusY,
        Band::PlusY,
        Band::MinusZ,
        Band::PlusZ,
    ];

    /// Band order that matches ascending column index for a Dirichlet row.
    const ROW_ORDER: [Band; 7] = [
        Band::MinusZ,
        Band::MinusY,
        Band::MinusX,
        Band::Center,
        Band::PlusX,
        Band::PlusY,
        Band::PlusZ,
    ];

    fn slot(self) -> usize {
        self as usize
    }

    /// Axis (0 = x, 1 = y, 2 = z) and direction, `None` for the center.
    pub fn axis(self) -> Option<(usize, bool)> {
        match self {
            Band::Center => None,
            Band::MinusX => Some((0, false)),
            Band::PlusX => Some((0, true)),
            Band::MinusY => Some((1, false)),
            Band::PlusY => Some((1, true)),
            Band::MinusZ => Some((2, false)),
            Band::PlusZ => Some((2, true)),
        }
    }

    pub fn lower(axis: usize) -> Band {
        [Band::MinusX, Band::MinusY, Band::MinusZ][axis]
    }

    pub fn upper(axis: usize) -> Band {
        [Band::PlusX, Band::PlusY, Band::PlusZ][axis]
    }

    pub fn mirror(self) -> Band {
        match self {
            Band::Center => Band::Center,
            Band::MinusX => Band::PlusX,
            Band::PlusX => Band::MinusX,
            Band::MinusY => Band::PlusY,
            Band::PlusY => Band::MinusY,
            Band::MinusZ => Band::PlusZ,
            Band::PlusZ => Band::MinusZ,
        }
    }
}

/// Seven-band grid operator, lexicographic ordering with x fastest.
///
/// Band `b` at node `p` holds the coefficient coupling `p` to its neighbor in
/// direction `b`. On a Dirichlet grid the entries pointing off the grid are
/// exactly zero; on a periodic grid they wrap around.
#[derive(Debug, Clone, PartialEq)]
pub struct StencilMatrix {
    dims: [usize; 3],
    dim: usize,
    periodic: bool,
    bands: [Vec<f64>; 7],
}

impl StencilMatrix {
    /// `dims` beyond `dim` must be 1. Off-grid band entries must be zero
    /// unless `periodic`, and bands along unused axes must be zero.
    pub fn new(dims: [usize; 3], dim: usize, periodic: bool, bands: [Vec<f64>; 7]) -> Result<Self> {
        if !(1..=3).contains(&dim) || dims.contains(&0) || dims[dim..].iter().any(|&d| d != 1) {
            return Err(Error::Invalid(format!(
                "bad grid extents {dims:?} for dimension {dim}"
            )));
        }
        if periodic && dims[..dim].iter().any(|&d| d < 3) {
            return Err(Error::Invalid(
                "periodic axes need at least 3 points".into(),
            ));
        }
        let n: usize = dims.iter().product();
        for b in &bands {
            check_len(n, b.len())?;
        }
        let m = Self {
            dims,
            dim,
            periodic,
            bands,
        };
        for band in Band::ALL.into_iter().skip(1) {
            let (axis, _) = band.axis().unwrap();
            for p in 0..n {
                let v = m.bands[band.slot()][p];
                if v != 0.0 && (axis >= dim || m.neighbor(p, band).is_none()) {
                    return Err(Error::Invalid(format!(
                        "band {band:?} nonzero off the grid at node {p}"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// Grid with the given bands zeroed everywhere; fill with [`set`](Self::set).
    pub fn zeros(dims: [usize; 3], dim: usize, periodic: bool) -> Result<Self> {
        let n: usize = dims.iter().product();
        let bands = std::array::from_fn(|_| vec![0.0; n]);
        Self::new(dims, dim, periodic, bands)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn is_periodic(&self) -> bool {
        self.periodic
    }
    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn band(&self, band: Band) -> &[f64] {
        &self.bands[band.slot()]
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.dims[0] * (j + self.dims[1] * k)
    }

    pub fn coords(&self, p: usize) -> [usize; 3] {
        let [nx, ny, _] = self.dims;
        [p % nx, (p / nx) % ny, p / (nx * ny)]
    }

    /// Distance in the ordering between a node and its successor along `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        self.dims[..axis].iter().product()
    }

    /// Index of the neighbor of `p` in direction `band`, honoring periodicity.
    pub fn neighbor(&self, p: usize, band: Band) -> Option<usize> {
        let Some((axis, up)) = band.axis() else {
            return Some(p);
        };
        if axis >= self.dim {
            return None;
        }
        let c = self.coords(p)[axis];
        let n = self.dims[axis];
        let s = self.stride(axis);
        match (up, self.periodic) {
            (true, _) if c + 1 < n => Some(p + s),
            (false, _) if c > 0 => Some(p - s),
            (true, true) => Some(p + s - n * s),
            (false, true) => Some(p + (n - 1) * s),
            _ => None,
        }
    }

    /// Sets a coefficient; off-grid positions are rejected.
    pub fn set(&mut self, p: usize, band: Band, value: f64) -> Result<()> {
        if self.neighbor(p, band).is_none() {
            return Err(Error::Invalid(format!("node {p} has no {band:?} neighbor")));
        }
        self.bands[band.slot()][p] = value;
        Ok(())
    }

    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), x.len())?;
        let mut y = vec![0.0; self.len()];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    /// Sums each row in ascending-column order for a Dirichlet grid, which
    /// makes the result identical to the CSR product.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        assert_eq!(x.len(), n, "stencil spmv: x has wrong length");
        assert_eq!(y.len(), n, "stencil spmv: y has wrong length");
        if self.periodic {
            for (p, yp) in y.iter_mut().enumerate() {
                let mut acc = 0.0;
                for band in Band::ROW_ORDER {
                    if let Some(q) = self.neighbor(p, band) {
                        acc += self.bands[band.slot()][p] * x[q];
                    }
                }
                *yp = acc;
            }
            return;
        }
        let sy = self.dims[0];
        let sz = self.dims[0] * self.dims[1];
        let [c, mx, px, my, py, mz, pz] = &self.bands;
        let [nx, ny, nz] = self.dims;
        for k in 0..nz {
            for j in 0..ny {
                for i in 0..nx {
                    let p = i + nx * (j + ny * k);
                    let mut acc = 0.0;
                    if k > 0 {
                        acc += mz[p] * x[p - sz];
                    }
                    if j > 0 {
                        acc += my[p] * x[p - sy];
                    }
                    if i > 0 {
                        acc += mx[p] * x[p - 1];
                    }
                    acc += c[p] * x[p];
                    if i + 1 < nx {
                        acc += px[p] * x[p + 1];
                    }
                    if j + 1 < ny {
                        acc += py[p] * x[p + sy];
                    }
                    if k + 1 < nz {
                        acc += pz[p] * x[p + sz];
                    }
                    y[p] = acc;
                }
            }
        }
    }

    /// Lossless conversion; every in-grid coupling is stored, even when zero.
    pub fn to_csr(&self) -> CsrMatrix {
        let n = self.len();
        let mut t = Vec::with_capacity(7 * n);
        for p in 0..n {
            for band in Band::ROW_ORDER {
                if band.axis().is_some_and(|(a, _)| a >= self.dim) {
                    continue;
                }
                if let Some(q) = self.neighbor(p, band) {
                    t.push((p, q, self.bands[band.slot()][p]));
                }
            }
        }
        CsrMatrix::from_triplets(n, n, &t).expect("neighbors are in range")
    }

    /// Bitwise band mirroring: `a(p, q) == a(q, p)` for every coupling.
    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|p| {
            Band::ALL
                .into_iter()
                .skip(1)
                .all(|band| match self.neighbor(p, band) {
                    Some(q) => self.bands[band.slot()][p] == self.bands[band.mirror().slot()][q],
                    None => true,
                })
        })
    }

    pub fn diagonal(&self) -> &[f64] {
        self.band(Band::Center)
    }
}

impl LinearOperator for StencilMatrix {
    fn dim(&self) -> usize {
        self.len()
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.spmv_into(x, y)
    }
}

/// `A = M + L1 + L1ᵀ + L2 + L2ᵀ + L3 + L3ᵀ` for a symmetric stencil.
///
/// `lower[a]` is the band coupling each node to its predecessor along axis
/// `a`; the transposes are read from the same storage.
#[derive(Debug, Clone, PartialEq)]
pub struct OffsetSplit {
    pub diag: Vec<f64>,
    pub lower: [Vec<f64>; 3],
    template: StencilMatrix,
}

impl OffsetSplit {
    /// Rebuilds the full stencil with `Lᵀ` mirrored from `L`.
    pub fn reassemble(&self) -> StencilMatrix {
        let mut m = self.template.clone();
        m.bands[Band::Center.slot()] = self.diag.clone();
        for axis in 0..3 {
            let lo = Band::lower(axis);
            let up = Band::upper(axis);
            m.bands[lo.slot()] = self.lower[axis].clone();
            let mut upper = vec![0.0; m.len()];
            for (p, u) in upper.iter_mut().enumerate() {
                if let Some(q) = m.neighbor(p, up) {
                    *u = self.lower[axis][q];
                }
            }
            m.bands[up.slot()] = upper;
        }
        m
    }

    /// True when a split level carries no couplings at all.
    pub fn is_empty_level(&self, axis: usize) -> bool {
        self.lower[axis].iter().all(|&v| v == 0.0)
    }
}

/// Splits a stencil into its diagonal and the three strictly-lower bands.
pub fn split_offsets(a: &StencilMatrix) -> OffsetSplit {
    let mut template = a.clone();
    for b in &mut template.bands {
        b.iter_mut().for_each(|v| *v = 0.0);
    }
    OffsetSplit {
        diag: a.band(Band::Center).to_vec(),
        lower: [
            a.band(Band::MinusX).to_vec(),
            a.band(Band::MinusY).to_vec(),
            a.band(Band::MinusZ).to_vec(),
        ],
        template,
    }
}

impl StencilMatrix {
    pub fn split_offsets(&self) -> OffsetSplit {
        split_offsets(self)
    }
}
