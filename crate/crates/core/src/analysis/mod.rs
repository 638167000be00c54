//! Analysis on top of the pgf evaluators: extinction probabilities and
//! pointwise scans of `φ_FL <= φ_NB`, plus survival curves per generation.

mod extinction;
mod scan;
mod survival;

pub use extinction::{extinction_probability, Extinction};
pub use scan::{scan_inequality, EqualityPoint, GridPoint, GridReport, GridSpec, Mode, ZetaValue};
pub use survival::{survival_bounds, SurvivalCurve, SurvivalRow};

use std::io;

use serde::Serialize;
use thiserror::Error;

use crate::pgf::PgfError;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Pgf(#[from] PgfError),
    #[error("fixed-point iteration did not settle after {iterations} steps (last value {last})")]
    NoConvergence { iterations: u64, last: f64 },
    #[error("iteration gives {iterate} but bisection gives {bisection}")]
    CrossCheck { iterate: f64, bisection: f64 },
    #[error("phi_fl > phi_nb at x = {x}: phi_nb = {phi_nb}, phi_fl = {phi_fl}, gap = {gap}")]
    ViolationFound {
        x: String,
        phi_nb: String,
        phi_fl: String,
        gap: String,
    },
    #[error("phi_fl = phi_nb at x = {x}, which is neither zeta^r nor 1")]
    UnexpectedEquality { x: String },
    #[error("exact mode needs zeta as a fraction p/q")]
    NeedsExactZeta,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl AnalysisError {
    /// True when the error is a counterexample rather than bad input.
    pub fn is_violation(&self) -> bool {
        matches!(
            self,
            AnalysisError::ViolationFound { .. } | AnalysisError::UnexpectedEquality { .. }
        )
    }
}

/// Write `rows` as CSV, preceded by `# `-prefixed comment lines.
pub fn write_csv<W: io::Write, T: Serialize>(
    mut w: W,
    comments: &[String],
    rows: &[T],
) -> Result<(), AnalysisError> {
    for c in comments {
        for line in c.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}
