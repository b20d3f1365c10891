//! Matrix Market coordinate format.
//!
//! Values are written with 17 significant digits so a write/read cycle
//! reproduces every `f64` exactly.

use std::io::{BufRead, Write};

use super::CsrMatrix;
use crate::error::{Error, Result};

/// Default cap on declared rows/columns when reading.
pub const DEFAULT_MAX_DIM: usize = 1 << 27;

pub fn write_matrix_market<W: Write>(a: &CsrMatrix, mut w: W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
    for i in 0..a.nrows() {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v)?;
        }
    }
    Ok(())
}

pub fn to_matrix_market_string(a: &CsrMatrix) -> String {
    let mut buf = Vec::new();
    write_matrix_market(a, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}

pub fn read_matrix_market<R: BufRead>(r: R) -> Result<CsrMatrix> {
    read_matrix_market_with_limit(r, DEFAULT_MAX_DIM)
}

pub fn parse_matrix_market(text: &str) -> Result<CsrMatrix> {
    read_matrix_market(text.as_bytes())
}

/// Reads a `real` or `integer` coordinate matrix, `general` or `symmetric`.
/// Declared dimensions above `max_dim` are refused before allocating.
pub fn read_matrix_market_with_limit<R: BufRead>(r: R, max_dim: usize) -> Result<CsrMatrix> {
    let mut lines = r.lines().enumerate();
    let perr = |line: usize, msg: &str| Error::Parse {
        line: line + 1,
        msg: msg.to_string(),
    };

    let (ln, header) = match lines.next() {
        Some((ln, l)) => (ln, l?),
        None => return Err(perr(0, "empty input")),
    };
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(perr(ln, "missing %%MatrixMarket matrix header"));
    }
    if tokens[2] != "coordinate" {
        return Err(perr(ln, "only coordinate format is supported"));
    }
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(perr(ln, "only real or integer fields are supported"));
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        _ => return Err(perr(ln, "only general or symmetric matrices are supported")),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    let mut seen = 0usize;
    for (ln, line) in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(perr(ln, "size line needs rows cols nnz"));
                }
                let parse = |s: &str| s.parse::<usize>().map_err(|_| perr(ln, "bad size value"));
                let (m, n, nnz) = (parse(fields[0])?, parse(fields[1])?, parse(fields[2])?);
                if m > max_dim || n > max_dim {
                    return Err(perr(ln, "declared dimensions exceed the reader limit"));
                }
                if symmetric && m != n {
                    return Err(perr(ln, "symmetric matrix must be square"));
                }
                size = Some((m, n, nnz));
                triplets.reserve(nnz.min(1 << 20));
            }
            Some((m, n, nnz)) => {
                if fields.len() != 3 {
                    return Err(perr(ln, "entry line needs row col value"));
                }
                if seen == nnz {
                    return Err(perr(ln, "more entries than declared"));
                }
                let i = fields[0]
                    .parse::<usize>()
                    .map_err(|_| perr(ln, "bad row index"))?;
                let j = fields[1]
                    .parse::<usize>()
                    .map_err(|_| perr(ln, "bad column index"))?;
                let v = fields[2]
                    .parse::<f64>()
                    .map_err(|_| perr(ln, "bad value"))?;
                if i == 0 || j == 0 || i > m || j > n {
                    return Err(perr(ln, "index out of range"));
                }
                if symmetric && j > i {
                    return Err(perr(ln, "symmetric file must list the lower triangle"));
                }
                triplets.push((i - 1, j - 1, v));
                if symmetric && i != j {
                    triplets.push((j - 1, i - 1, v));
                }
                seen += 1;
            }
        }
    }
    let Some((m, n, nnz)) = size else {
        return Err(perr(0, "missing size line"));
    };
    if seen != nnz {
        return Err(Error::Parse {
            line: 0,
            msg: format!("declared {nnz} entries, found {seen}"),
        });
    }
    CsrMatrix::from_triplets(m, n, &triplets)
}
