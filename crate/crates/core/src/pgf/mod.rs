//! Generating functions of the negative binomial offspring law and of its
//! fractional linear lower bound, evaluated either in `f64` or exactly over
//! the rationals.

mod eval;
mod mobius;
mod scalar;

pub use eval::{
    c_g, c_g_exact, f_nb, g_nb, g_nb_definitional, g_nb_series, g_tilde, g_tilde_closed,
    iterate_fl, iterate_fl_sequential, phi_fl, phi_nb, phi_nb_standard, y_of_x, zhat,
    zhat_closed,
};
pub use mobius::MobiusMap;
pub use scalar::Scalar;

use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PgfError {
    #[error("shape parameter r = {0} must be at least 2")]
    InvalidShape(u32),
    #[error("zeta = {0} must lie strictly between 0 and 1")]
    InvalidZeta(String),
    #[error("argument {name} = {value} outside [0, 1]")]
    Domain { name: &'static str, value: String },
    #[error("index j = {j} outside 0..={max}")]
    IndexOutOfRange { j: u32, max: u32 },
    #[error("{what} is not positive ({value})")]
    NotPositive { what: &'static str, value: String },
    #[error("singular point: {0}")]
    Singular(&'static str),
}

/// Offspring law parameters: shape `r >= 2` and `0 < zeta < 1`.
///
/// The extinction probability of the process is `zeta^r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Params<S> {
    r: u32,
    zeta: S,
}

impl<S: Scalar> Params<S> {
    pub fn new(r: u32, zeta: S) -> Result<Self, PgfError> {
        if r < 2 {
            return Err(PgfError::InvalidShape(r));
        }
        if !(zeta > S::zero() && zeta < S::one()) {
            return Err(PgfError::InvalidZeta(format!("{zeta}")));
        }
        Ok(Params { r, zeta })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn zeta(&self) -> &S {
        &self.zeta
    }

    /// Extinction probability `zeta^r`.
    pub fn p_inf(&self) -> S {
        self.zeta.powu(self.r)
    }

    /// Success probability `p` of the offspring law in the form
    /// `(p / (1 - (1-p) x))^r`, namely `zeta (1 - zeta^r) / (1 - zeta^(r+1))`.
    pub fn nb_success(&self) -> S {
        let one = S::one();
        self.zeta.clone() * (one.clone() - self.p_inf()) / (one - self.zeta.powu(self.r + 1))
    }

    /// Mean offspring number `r (1 - p) / p`.
    pub fn nb_mean(&self) -> S {
        let p = self.nb_success();
        S::from_int(self.r as i64) * (S::one() - p.clone()) / p
    }

    pub fn to_f64(&self) -> Params<f64> {
        Params {
            r: self.r,
            zeta: self.zeta.to_f64(),
        }
    }
}

impl Params<BigRational> {
    /// Exact parameters with `zeta = num / den`.
    pub fn exact(r: u32, num: i64, den: i64) -> Result<Self, PgfError> {
        if den == 0 {
            return Err(PgfError::InvalidZeta(format!("{num}/{den}")));
        }
        Params::new(r, crate::algebra::ratio(num, den))
    }
}
