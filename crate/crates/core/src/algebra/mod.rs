//! Binomial coefficients and bivariate polynomials over the rationals.
//!
//! Everything in here is immutable once built and every operation is exact:
//! there is no rounding anywhere on these paths.

mod binom;
mod frac;
mod poly;

pub use binom::{binom, binom_rat, checked_binom};
pub use frac::OneMinusFraction;
pub use poly::{BiPoly, Var};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

/// Exact rational scalar, always in lowest terms with a positive denominator.
pub type BigRat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("variable mismatch: {left:?} vs {right:?}")]
    VarMismatch { left: [Var; 2], right: [Var; 2] },
    #[error("variable {0:?} does not belong to this ring")]
    UnknownVar(Var),
    #[error("exact division left a nonzero remainder")]
    NonzeroRemainder,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("binomial({n}, {k}) with negative upper index is outside the supported table")]
    UnsupportedBinomial { n: i64, k: i64 },
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_integral(v: &BigRat) -> bool {
    v.denom().is_one()
}

/// `(-1)^e` for a possibly negative exponent.
pub fn sign_pow(e: i64) -> BigRat {
    if e.rem_euclid(2) == 0 {
        BigRat::one()
    } else {
        -BigRat::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_reduced() {
        let q = ratio(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert!(!is_integral(&q));
        assert!(is_integral(&ratio(8, 4)));
    }

    #[test]
    fn sign_pow_handles_negative_exponents() {
        assert_eq!(sign_pow(-3), rat(-1));
        assert_eq!(sign_pow(-2), rat(1));
        assert_eq!(sign_pow(0), rat(1));
        assert_eq!(sign_pow(5), rat(-1));
    }
}
