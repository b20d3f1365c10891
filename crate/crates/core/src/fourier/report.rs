use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::scan::mode_indices;
use super::{
    cond_asymptotic, spectrum_extremes, AnalysisMode, Convention, FourierMode, SpectrumExtremes,
    SymbolChain,
};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeRow {
    pub index: [usize; 3],
    pub angles: [f64; 3],
    pub null_mode: bool,
    pub symbols: SymbolChain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub observed: f64,
    pub bound: f64,
    pub holds: bool,
}

impl BoundCheck {
    fn below(name: &str, observed: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            bound,
            holds: observed < bound,
        }
    }
    fn above(name: &str, observed: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            observed,
            bound,
            holds: observed > bound,
        }
    }
}

/// Full symbol table plus extremes and condition numbers for one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub dim: usize,
    pub coeffs: [f64; 3],
    pub mode: AnalysisMode,
    pub convention: Convention,
    pub rows: Vec<ModeRow>,
    pub extremes: SpectrumExtremes,
    pub cond_discrete: f64,
    pub h: f64,
    /// Only for the isotropic 3D operator with h ≤ 0.1.
    pub cond_asymptotic: Option<f64>,
    /// max |λ(B) − λ(A) − λ(B−A)| over all modes.
    pub identity_error: f64,
    pub checks: Vec<BoundCheck>,
}

impl AnalysisReport {
    pub fn compute(
        n: usize,
        dim: usize,
        coeffs: [f64; 3],
        mode: AnalysisMode,
        convention: Convention,
    ) -> Result<Self> {
        let extremes = spectrum_extremes(n, dim, coeffs, mode, convention)?;
        let mut rows = Vec::new();
        let mut identity_error: f64 = 0.0;
        let mut positive = true;
        let mut in_unit = true;
        for idx in mode_indices(n, dim, convention) {
            let m = FourierMode::new(idx, n, dim, convention)?;
            let c = SymbolChain::evaluate(&m, coeffs, mode)?;
            identity_error = identity_error.max((c.lam_b - c.lam_a - c.lam_b_minus_a).abs());
            if !m.null_mode {
                positive &= c.lam_b_minus_a > 0.0;
                in_unit &= c.lam_binv_a > 0.0 && c.lam_binv_a <= 1.0;
            }
            rows.push(ModeRow {
                index: idx,
                angles: m.angles,
                null_mode: m.null_mode,
                symbols: c,
            });
        }
        let h = 1.0 / (n + 1) as f64;
        let isotropic_3d = dim == 3 && coeffs == [1.0; 3];
        let cond_asymptotic = if isotropic_3d {
            cond_asymptotic(h).ok()
        } else {
            None
        };
        let e = &extremes;
        let mut checks = vec![
            BoundCheck::below("max |lamB - lamA - lamBmA|", identity_error, 1e-13),
            BoundCheck {
                name: "lamBmA > 0 on non-null modes".into(),
                observed: e.b_minus_a.min_val,
                bound: 0.0,
                holds: positive,
            },
            BoundCheck {
                name: "lamBinvA in (0, 1] on non-null modes".into(),
                observed: e.binv_a.max_val,
                bound: 1.0,
                holds: in_unit,
            },
        ];
        if isotropic_3d && mode == AnalysisMode::Paper {
            checks.extend([
                BoundCheck::above("lamA min > 0", e.a.min_val, 0.0),
                BoundCheck::below("lamA max < 12", e.a.max_val, 12.0),
                BoundCheck::above("lamT min > 4", e.t.min_val, 4.0),
                BoundCheck::below("lamT max < 8", e.t.max_val, 8.0),
                BoundCheck::above("lamP min > 9/4", e.p.min_val, 9.0 / 4.0),
                BoundCheck::below("lamP max < 81/8", e.p.max_val, 81.0 / 8.0),
                BoundCheck::above("lamB min > 25/36 (recursion)", e.b.min_val, 25.0 / 36.0),
                BoundCheck::above("lamB min > 95/36 (as stated)", e.b.min_val, 95.0 / 36.0),
                BoundCheck::below("lamB max < 7921/648", e.b.max_val, 7921.0 / 648.0),
            ]);
        }
        Ok(Self {
            n,
            dim,
            coeffs,
            mode,
            convention,
            rows,
            cond_discrete: e.binv_a.max_val / e.binv_a.min_val,
            extremes,
            h,
            cond_asymptotic,
            identity_error,
            checks,
        })
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("s,t,r,theta,phi,xi,lamA,lamT,lamP,lamB,lamBmA,lamBinvA\n");
        for row in &self.rows {
            let [s, t, r] = row.index;
            let [a, b, c] = row.angles;
            let y = &row.symbols;
            let _ = writeln!(
                out,
                "{s},{t},{r},{a:.17e},{b:.17e},{c:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
                y.lam_a, y.lam_t, y.lam_p, y.lam_b, y.lam_b_minus_a, y.lam_binv_a
            );
        }
        out
    }

    /// Human-readable summary; `timestamp` is printed verbatim when given.
    pub fn render_summary(&self, timestamp: Option<&str>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# fourier analysis");
        if let Some(ts) = timestamp {
            let _ = writeln!(out, "generated: {ts}");
        }
        let [l1, l2, l3] = self.coeffs;
        let _ = writeln!(
            out,
            "n={} dim={} coeffs=({l1}, {l2}, {l3}) mode={} convention={} h={:.6e}",
            self.n, self.dim, self.mode, self.convention, self.h
        );
        let e = &self.extremes;
        for (name, x) in [
            ("A", &e.a),
            ("T", &e.t),
            ("P", &e.p),
            ("B", &e.b),
            ("B-A", &e.b_minus_a),
            ("B^-1A", &e.binv_a),
        ] {
            let _ = writeln!(
                out,
                "{name:<6} min {:.12e} at {:?}  max {:.12e} at {:?}",
                x.min_val, x.min_mode, x.max_val, x.max_mode
            );
        }
        let _ = writeln!(out, "cond_discrete   {:.10e}", self.cond_discrete);
        let _ = writeln!(
            out,
            "cond_discrete*h^2 {:.10e}",
            self.cond_discrete * self.h * self.h
        );
        match self.cond_asymptotic {
            Some(c) => {
                let _ = writeln!(out, "cond_asymptotic {c:.10e}");
                let _ = writeln!(out, "asymptotic/discrete {:.6}", c / self.cond_discrete);
            }
            None => {
                let _ = writeln!(out, "cond_asymptotic n/a");
            }
        }
        for c in &self.checks {
            let verdict = if c.holds { "holds" } else { "FAILS" };
            let _ = writeln!(
                out,
                "check {:<40} {verdict} (observed {:.12e}, bound {:.12e})",
                c.name, c.observed, c.bound
            );
        }
        out
    }
}
