use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

/// Number type the evaluators run over: `f64` for scans, [`BigRational`]
/// when the answer has to be exact.
pub trait Scalar: Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync {
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    fn from_rat(v: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    fn powu(&self, e: u32) -> Self {
        num_traits::pow(self.clone(), e as usize)
    }

    /// Rescale a projective 2x2 matrix so its entries stay bounded.
    fn normalize_projective(m: &mut [Self; 4]);
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_rat(v: &BigRational) -> Self {
        num_traits::ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn powu(&self, e: u32) -> Self {
        self.powi(e as i32)
    }

    fn normalize_projective(m: &mut [Self; 4]) {
        let scale = m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
        if scale > 0.0 && scale.is_finite() {
            for v in m.iter_mut() {
                *v /= scale;
            }
        }
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_rat(v: &BigRational) -> Self {
        v.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    // Clears denominators, then divides out the gcd of the numerators.
    fn normalize_projective(m: &mut [Self; 4]) {
        if m.iter().all(Zero::is_zero) {
            return;
        }
        let lcm = m.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<BigInt> = m
            .iter()
            .map(|v| v.numer() * (&lcm / v.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        for (slot, v) in m.iter_mut().zip(ints) {
            *slot = BigRational::from_integer(v / &g);
        }
    }
}
