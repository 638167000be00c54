use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{AlgebraError, BigRat};

/// Formal variable names used by the coefficient identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Var {
    X,
    Y,
    U,
    Zeta,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
            Var::U => "u",
            Var::Zeta => "ζ",
        })
    }
}

/// Sparse polynomial `Σ c_ij v^i w^j` over ℚ in two named variables `[v, w]`.
///
/// Zero coefficients are never stored. Keys are ordered lexicographically
/// with `v` dominant, which is also the monomial order used by
/// [`BiPoly::div_exact`].
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    vars: [Var; 2],
    terms: BTreeMap<(u32, u32), BigRat>,
}

impl BiPoly {
    pub fn zero(vars: [Var; 2]) -> Self {
        BiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: [Var; 2], c: BigRat) -> Self {
        Self::monomial(vars, c, 0, 0)
    }

    pub fn one(vars: [Var; 2]) -> Self {
        Self::constant(vars, BigRat::one())
    }

    /// `c · v^i · w^j`
    pub fn monomial(vars: [Var; 2], c: BigRat, i: u32, j: u32) -> Self {
        let mut p = Self::zero(vars);
        p.add_term((i, j), c);
        p
    }

    /// The polynomial consisting of the single variable `var`.
    pub fn var(vars: [Var; 2], var: Var) -> Result<Self, AlgebraError> {
        let slot = Self::slot_in(vars, var)?;
        let exp = if slot == 0 { (1, 0) } else { (0, 1) };
        Ok(Self::monomial(vars, BigRat::one(), exp.0, exp.1))
    }

    /// Build from an iterator of `((i, j), c)` terms; repeated keys are summed.
    pub fn from_terms<I>(vars: [Var; 2], terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), BigRat)>,
    {
        let mut p = Self::zero(vars);
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    fn slot_in(vars: [Var; 2], var: Var) -> Result<usize, AlgebraError> {
        vars.iter()
            .position(|v| *v == var)
            .ok_or(AlgebraError::UnknownVar(var))
    }

    fn add_term(&mut self, key: (u32, u32), c: BigRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · v^di w^dj · other`, in place.
    fn add_scaled_shifted(&mut self, other: &BiPoly, c: &BigRat, di: u32, dj: u32) {
        for (&(i, j), v) in &other.terms {
            self.add_term((i + di, j + dj), v * c);
        }
    }

    pub fn vars(&self) -> [Var; 2] {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRat)> {
        self.terms.iter()
    }

    /// Coefficient of `v^i w^j` (zero when absent).
    pub fn coeff(&self, i: u32, j: u32) -> BigRat {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(BigRat::zero)
    }

    /// Highest exponent of `var` appearing, or `None` for the zero polynomial.
    pub fn degree(&self, var: Var) -> Result<Option<u32>, AlgebraError> {
        let slot = Self::slot_in(self.vars, var)?;
        Ok(self
            .terms
            .keys()
            .map(|&(i, j)| if slot == 0 { i } else { j })
            .max())
    }

    fn check_vars(&self, other: &BiPoly) -> Result<(), AlgebraError> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(AlgebraError::VarMismatch {
                left: self.vars,
                right: other.vars,
            })
        }
    }

    pub fn try_add(&self, other: &BiPoly) -> Result<BiPoly, AlgebraError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &BiPoly) -> Result<BiPoly, AlgebraError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &BiPoly) -> Result<BiPoly, AlgebraError> {
        self.check_vars(other)?;
        let mut out = BiPoly::zero(self.vars);
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRat) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero(self.vars);
        }
        BiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Multiply by `v^di w^dj`.
    pub fn shift(&self, di: u32, dj: u32) -> BiPoly {
        BiPoly {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), v)| ((i + di, j + dj), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::one(self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn leading(&self) -> Option<(&(u32, u32), &BigRat)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / divisor`.
    ///
    /// Runs the single-divisor division algorithm under lex order; for one
    /// divisor the remainder vanishes iff the divisor divides `self`, so the
    /// first leading term that is not divisible is reported as
    /// [`AlgebraError::NonzeroRemainder`].
    pub fn div_exact(&self, divisor: &BiPoly) -> Result<BiPoly, AlgebraError> {
        self.check_vars(divisor)?;
        let (&(di, dj), dc) = divisor.leading().ok_or(AlgebraError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = BiPoly::zero(self.vars);
        while let Some((&(i, j), c)) = rem.leading() {
            if i < di || j < dj {
                return Err(AlgebraError::NonzeroRemainder);
            }
            let c = c / dc;
            let (si, sj) = (i - di, j - dj);
            rem.add_scaled_shifted(divisor, &-c.clone(), si, sj);
            quot.add_term((si, sj), c);
        }
        Ok(quot)
    }

    /// Replace `var` by `expr` (which must live in the same ring).
    pub fn subst(&self, var: Var, expr: &BiPoly) -> Result<BiPoly, AlgebraError> {
        self.check_vars(expr)?;
        let slot = Self::slot_in(self.vars, var)?;
        let max_e = self.degree(var)?.unwrap_or(0);
        let mut powers = Vec::with_capacity(max_e as usize + 1);
        powers.push(BiPoly::one(self.vars));
        for e in 1..=max_e as usize {
            let next = &powers[e - 1] * expr;
            powers.push(next);
        }
        let mut out = BiPoly::zero(self.vars);
        for (&(i, j), c) in &self.terms {
            let (e, rest) = if slot == 0 { (i, (0, j)) } else { (j, (i, 0)) };
            out.add_scaled_shifted(&powers[e as usize], c, rest.0, rest.1);
        }
        Ok(out)
    }

    /// Evaluate both variables at rational points.
    pub fn eval(&self, v: &BigRat, w: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * num_traits::pow(v.clone(), i as usize) * num_traits::pow(w.clone(), j as usize);
        }
        acc
    }

    /// Evaluate in floating point.
    pub fn eval_f64(&self, v: f64, w: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(&(i, j), c)| c.to_f64().unwrap_or(f64::NAN) * v.powi(i as i32) * w.powi(j as i32))
            .sum()
    }

    /// Rename the variables without touching coefficients.
    pub fn relabel(&self, vars: [Var; 2]) -> BiPoly {
        BiPoly {
            vars,
            terms: self.terms.clone(),
        }
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let [v, w] = self.vars;
        for (n, (&(i, j), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if i > 0 {
                write!(f, "·{v}^{i}")?;
            }
            if j > 0 {
                write!(f, "·{w}^{j}")?;
            }
        }
        Ok(())
    }
}

// Operator sugar panics on a variable mismatch; use the `try_*` forms when
// the rings are not known to agree.
impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        self.try_add(rhs).expect("BiPoly add")
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self.try_sub(rhs).expect("BiPoly sub")
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        self.try_mul(rhs).expect("BiPoly mul")
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&-BigRat::one())
    }
}
