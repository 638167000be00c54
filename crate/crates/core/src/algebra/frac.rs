use num_traits::One;

use super::{AlgebraError, BiPoly, BigRat, Var};

/// `numer / (1 - z)^pow` where `z` is one of the ring's variables.
///
/// Normal form has `pow` as small as possible, i.e. `(1 - z)` does not
/// divide `numer` whenever `pow > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneMinusFraction {
    numer: BiPoly,
    var: Var,
    pow: u32,
}

impl OneMinusFraction {
    pub fn new(numer: BiPoly, var: Var, pow: u32) -> Result<Self, AlgebraError> {
        if !numer.vars().contains(&var) {
            return Err(AlgebraError::UnknownVar(var));
        }
        let mut f = OneMinusFraction { numer, var, pow };
        f.normalize();
        Ok(f)
    }

    pub fn from_poly(numer: BiPoly, var: Var) -> Result<Self, AlgebraError> {
        Self::new(numer, var, 0)
    }

    fn one_minus(&self) -> BiPoly {
        let vars = self.numer.vars();
        let z = BiPoly::var(vars, self.var).expect("var checked at construction");
        &BiPoly::one(vars) - &z
    }

    fn normalize(&mut self) {
        if self.numer.is_zero() {
            self.pow = 0;
            return;
        }
        let d = self.one_minus();
        while self.pow > 0 {
            match self.numer.div_exact(&d) {
                Ok(q) => {
                    self.numer = q;
                    self.pow -= 1;
                }
                Err(_) => break,
            }
        }
    }

    pub fn numer(&self) -> &BiPoly {
        &self.numer
    }

    pub fn pow(&self) -> u32 {
        self.pow
    }

    fn lift(&self, pow: u32) -> BiPoly {
        &self.numer * &self.one_minus().pow(pow - self.pow)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.var != other.var {
            return Err(AlgebraError::UnknownVar(other.var));
        }
        let pow = self.pow.max(other.pow);
        let numer = self.lift(pow).try_add(&other.lift(pow))?;
        Self::new(numer, self.var, pow)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.var != other.var {
            return Err(AlgebraError::UnknownVar(other.var));
        }
        Self::new(self.numer.try_mul(&other.numer)?, self.var, self.pow + other.pow)
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        OneMinusFraction {
            numer: self.numer.scale(c),
            var: self.var,
            pow: if num_traits::Zero::is_zero(c) { 0 } else { self.pow },
        }
    }

    /// Multiply by `(1 - z)^e`.
    pub fn mul_one_minus(&self, e: u32) -> Self {
        let mut f = self.clone();
        if e <= f.pow {
            f.pow -= e;
        } else {
            f.numer = f.lift_raw(e - f.pow);
            f.pow = 0;
        }
        f.normalize();
        f
    }

    fn lift_raw(&self, extra: u32) -> BiPoly {
        &self.numer * &self.one_minus().pow(extra)
    }

    /// The polynomial this fraction equals, if the denominator cancels.
    pub fn into_poly(self) -> Result<BiPoly, AlgebraError> {
        if self.pow == 0 {
            Ok(self.numer)
        } else {
            Err(AlgebraError::NonzeroRemainder)
        }
    }

    /// Evaluate at a point of the underlying ring, ordered as the ring's vars.
    pub fn eval(&self, v: &BigRat, w: &BigRat) -> BigRat {
        let slot_is_first = self.numer.vars()[0] == self.var;
        let z = if slot_is_first { v } else { w };
        let den = num_traits::pow(BigRat::one() - z, self.pow as usize);
        self.numer.eval(v, w) / den
    }

    pub fn eval_f64(&self, v: f64, w: f64) -> f64 {
        let slot_is_first = self.numer.vars()[0] == self.var;
        let z = if slot_is_first { v } else { w };
        self.numer.eval_f64(v, w) / (1.0 - z).powi(self.pow as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};

    const YZ: [Var; 2] = [Var::Y, Var::Zeta];

    #[test]
    fn cancels_common_factors() {
        // (1 - ζ^2) / (1 - ζ)^2 = (1 + ζ) / (1 - ζ)
        let n = BiPoly::from_terms(YZ, [((0, 0), rat(1)), ((0, 2), rat(-1))]);
        let f = OneMinusFraction::new(n, Var::Zeta, 2).unwrap();
        assert_eq!(f.pow(), 1);
        assert_eq!(f.numer(), &BiPoly::from_terms(YZ, [((0, 0), rat(1)), ((0, 1), rat(1))]));
        assert_eq!(f.eval(&rat(0), &ratio(1, 2)), rat(3));
    }

    #[test]
    fn add_and_collapse_to_poly() {
        // ζ/(1-ζ) + 1 = 1/(1-ζ), then times (1-ζ) is 1
        let z = BiPoly::var(YZ, Var::Zeta).unwrap();
        let a = OneMinusFraction::new(z, Var::Zeta, 1).unwrap();
        let b = OneMinusFraction::from_poly(BiPoly::one(YZ), Var::Zeta).unwrap();
        let s = a.try_add(&b).unwrap();
        assert_eq!(s.pow(), 1);
        assert_eq!(s.mul_one_minus(1).into_poly().unwrap(), BiPoly::one(YZ));
    }

    #[test]
    fn unknown_var() {
        assert!(OneMinusFraction::new(BiPoly::one(YZ), Var::U, 1).is_err());
    }
}
