use super::{zhat, Params, PgfError, Scalar};

/// Fractional linear map `x ↦ (a x + b) / (c x + d)`, stored as the matrix
/// `[[a, b], [c, d]]`. Composition is matrix multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusMap<S> {
    m: [S; 4],
}

impl<S: Scalar> MobiusMap<S> {
    pub fn new(a: S, b: S, c: S, d: S) -> Result<Self, PgfError> {
        let map = MobiusMap { m: [a, b, c, d] };
        if map.det().is_zero() {
            return Err(PgfError::Singular("zero determinant"));
        }
        Ok(map)
    }

    pub fn identity() -> Self {
        MobiusMap {
            m: [S::one(), S::zero(), S::zero(), S::one()],
        }
    }

    /// The fractional linear bound as a map in `x`.
    ///
    /// Writing `q = zeta^r` and `ẑ` for the geometric sum, substituting
    /// `y = (q - x)/ẑ` into `q (1 - x - r y)/(1 - x - r q y)` and clearing
    /// the common `1/ẑ` gives
    /// `[[q (r - ẑ), q (ẑ - r q)], [r q - ẑ, ẑ - r q^2]]`.
    pub fn from_params(p: &Params<S>) -> Self {
        let q = p.p_inf();
        let zh = zhat(p);
        let r = S::from_int(p.r() as i64);
        let rq = r.clone() * q.clone();
        let a = q.clone() * (r - zh.clone());
        let b = q.clone() * (zh.clone() - rq.clone());
        let c = rq.clone() - zh.clone();
        let d = zh - rq * q;
        MobiusMap { m: [a, b, c, d] }
    }

    pub fn entries(&self) -> &[S; 4] {
        &self.m
    }

    pub fn det(&self) -> S {
        let [a, b, c, d] = &self.m;
        a.clone() * d.clone() - b.clone() * c.clone()
    }

    pub fn apply(&self, x: &S) -> Result<S, PgfError> {
        let [a, b, c, d] = &self.m;
        let den = c.clone() * x.clone() + d.clone();
        if den.is_zero() {
            return Err(PgfError::Singular("Möbius pole"));
        }
        Ok((a.clone() * x.clone() + b.clone()) / den)
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let [a, b, c, d] = &self.m;
        let [e, f, g, h] = &other.m;
        let mut m = [
            a.clone() * e.clone() + b.clone() * g.clone(),
            a.clone() * f.clone() + b.clone() * h.clone(),
            c.clone() * e.clone() + d.clone() * g.clone(),
            c.clone() * f.clone() + d.clone() * h.clone(),
        ];
        S::normalize_projective(&mut m);
        MobiusMap { m }
    }

    /// n-fold self-composition by repeated squaring.
    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::identity();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.compose(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.compose(&base);
            }
        }
        acc
    }
}
