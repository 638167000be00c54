use serde::Serialize;

use super::AnalysisError;
use crate::pgf::{iterate_fl, phi_nb, Params};

/// One CSV row: `n, fl_at_0, nb_at_0, limit`.
///
/// The columns are extinction-by-generation-`n` probabilities; survival is one
/// minus each.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalRow {
    pub n: u64,
    pub fl_at_0: f64,
    pub nb_at_0: f64,
    pub limit: f64,
}

impl SurvivalRow {
    pub fn fl_survival(&self) -> f64 {
        1.0 - self.fl_at_0
    }

    pub fn nb_survival(&self) -> f64 {
        1.0 - self.nb_at_0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalCurve {
    pub r: u32,
    pub zeta: f64,
    pub rows: Vec<SurvivalRow>,
}

impl SurvivalCurve {
    /// Invariant breaches beyond `tol`: each sequence non-decreasing and at
    /// most `ζ^r`, and `φ_FL^(n)(0) <= φ_NB^(n)(0)`.
    pub fn violations(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        for (i, row) in self.rows.iter().enumerate() {
            if row.fl_at_0 > row.nb_at_0 + tol {
                out.push(format!("n={}: fl {} > nb {}", row.n, row.fl_at_0, row.nb_at_0));
            }
            if row.nb_at_0 > row.limit + tol {
                out.push(format!("n={}: nb {} above limit {}", row.n, row.nb_at_0, row.limit));
            }
            if i > 0 {
                let prev = &self.rows[i - 1];
                if row.fl_at_0 + tol < prev.fl_at_0 {
                    out.push(format!("n={}: fl decreased", row.n));
                }
                if row.nb_at_0 + tol < prev.nb_at_0 {
                    out.push(format!("n={}: nb decreased", row.n));
                }
            }
        }
        out
    }
}

/// `φ_FL^(n)(0)` via the matrix power and `φ_NB^(n)(0)` by repeated
/// application, for `1 <= n <= n_max`.
pub fn survival_bounds(p: &Params<f64>, n_max: u64) -> Result<SurvivalCurve, AnalysisError> {
    if n_max < 1 {
        return Err(AnalysisError::InvalidArgument("n_max must be at least 1".into()));
    }
    let limit = p.p_inf();
    let mut nb = 0.0;
    let mut rows = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        nb = phi_nb(p, &nb)?;
        rows.push(SurvivalRow {
            n,
            fl_at_0: iterate_fl(p, n, &0.0)?,
            nb_at_0: nb,
            limit,
        });
    }
    Ok(SurvivalCurve {
        r: p.r(),
        zeta: *p.zeta(),
        rows,
    })
}
