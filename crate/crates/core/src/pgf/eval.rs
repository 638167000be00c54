use super::{MobiusMap, Params, PgfError, Scalar};
use crate::algebra::{binom_rat, ratio, BiPoly, OneMinusFraction, Var};
use crate::verify::cgt_closed;

fn check_unit<S: Scalar>(name: &'static str, x: &S) -> Result<(), PgfError> {
    if *x >= S::zero() && *x <= S::one() {
        Ok(())
    } else {
        Err(PgfError::Domain {
            name,
            value: format!("{x}"),
        })
    }
}

fn int<S: Scalar>(v: i64) -> S {
    S::from_int(v)
}

/// `ẑ = Σ_{k<r} ζ^k`, summed term by term.
pub fn zhat<S: Scalar>(p: &Params<S>) -> S {
    let z = p.zeta();
    (0..p.r()).fold(S::zero(), |acc, _| acc * z.clone() + S::one())
}

/// `ẑ` via `(1 - ζ^r) / (1 - ζ)`.
pub fn zhat_closed<S: Scalar>(p: &Params<S>) -> S {
    (S::one() - p.p_inf()) / (S::one() - p.zeta().clone())
}

/// `y(x) = (ζ^r - x) / ẑ`.
pub fn y_of_x<S: Scalar>(p: &Params<S>, x: &S) -> Result<S, PgfError> {
    check_unit("x", x)?;
    Ok((p.p_inf() - x.clone()) / zhat(p))
}

/// Negative binomial pgf in the form `ζ^r / (1 + y(x))^r`.
pub fn phi_nb<S: Scalar>(p: &Params<S>, x: &S) -> Result<S, PgfError> {
    check_unit("x", x)?;
    if x.is_one() {
        return Ok(S::one());
    }
    let y = y_of_x(p, x)?;
    Ok(p.p_inf() / (S::one() + y).powu(p.r()))
}

/// The same pgf written as `(p / (1 - (1-p) x))^r`.
pub fn phi_nb_standard<S: Scalar>(p: &Params<S>, x: &S) -> Result<S, PgfError> {
    check_unit("x", x)?;
    let s = p.nb_success();
    let base = s.clone() / (S::one() - (S::one() - s) * x.clone());
    Ok(base.powu(p.r()))
}

/// Fractional linear bound `ζ^r (1 - x - r y) / (1 - x - r ζ^r y)`.
///
/// Numerator and denominator are positive on `[0, 1)`; a non-positive value
/// means the inputs or the implementation are broken and is reported as an
/// error rather than returned.
pub fn phi_fl<S: Scalar>(p: &Params<S>, x: &S) -> Result<S, PgfError> {
    check_unit("x", x)?;
    if x.is_one() {
        return Ok(S::one());
    }
    let y = y_of_x(p, x)?;
    let q = p.p_inf();
    let r: S = int(p.r() as i64);
    let base = S::one() - x.clone();
    let num = base.clone() - r.clone() * y.clone();
    let den = base - r * q.clone() * y;
    if num <= S::zero() {
        return Err(PgfError::NotPositive {
            what: "phi_fl numerator",
            value: format!("{num}"),
        });
    }
    if den <= S::zero() {
        return Err(PgfError::NotPositive {
            what: "phi_fl denominator",
            value: format!("{den}"),
        });
    }
    Ok(q * num / den)
}

/// `ζ^r (1/φ_FL(x) - 1/φ_NB(x))`; vanishes exactly at `x ∈ {ζ^r, 1}`.
pub fn f_nb<S: Scalar>(p: &Params<S>, x: &S) -> Result<S, PgfError> {
    let fl = phi_fl(p, x)?;
    let nb = phi_nb(p, x)?;
    Ok(p.p_inf() * (S::one() / fl - S::one() / nb))
}

/// `g_NB(y)` from its closed polynomial expression
/// `[y((1+y)^r - 1)(r(1-ζ) - (1-ζ^r)) - (1-ζ)(1-ζ^r)((1+y)^r - 1 - r y)] / (1-ζ)^3`.
pub fn g_nb<S: Scalar>(p: &Params<S>, y: &S) -> S {
    let one = S::one();
    let om = one.clone() - p.zeta().clone();
    let omr = one.clone() - p.p_inf();
    let r: S = int(p.r() as i64);
    let pw = (one.clone() + y.clone()).powu(p.r()) - one;
    let first = y.clone() * pw.clone() * (r.clone() * om.clone() - omr.clone());
    let second = om.clone() * omr * (pw - r * y.clone());
    (first - second) / om.powu(3)
}

/// `g_NB(y(x))` through its definition `f_NB(x) (1 - x - r y(x)) / (1-ζ)^2`.
pub fn g_nb_definitional<S: Scalar>(p: &Params<S>, x: &S) -> Result<S, PgfError> {
    let f = f_nb(p, x)?;
    let y = y_of_x(p, x)?;
    let r: S = int(p.r() as i64);
    let om = S::one() - p.zeta().clone();
    Ok(f * (S::one() - x.clone() - r * y) / om.powu(2))
}

/// Coefficient `c_g(r, j, ζ)` of `y^(j+2) binom(r, j+1)` in `g_NB`.
pub fn c_g<S: Scalar>(r: u32, j: u32, zeta: &S) -> Result<S, PgfError> {
    if j > r - 1 {
        return Err(PgfError::IndexOutOfRange { j, max: r - 1 });
    }
    let (r, j) = (r as i64, j as i64);
    let mut sum = S::zero();
    let mut zk = S::one();
    for k in 0..=r - 2 {
        let w = (k + 1) * (2 * r * (1 + j) - (2 + j) * k - 2);
        sum = sum + zk.clone() * int(w);
        zk = zk * zeta.clone();
    }
    // zk == ζ^(r-1) here
    let tail = zk / (S::one() - zeta.clone()) * int(r * (r + 1) * j);
    Ok((sum + tail) / int(2 * (j + 2)))
}

/// `c_g(r, j, ·)` as a rational function `numer(ζ) / (1-ζ)^pow` in the
/// `(y, ζ)` ring, constant in `y`.
pub fn c_g_exact(r: u32, j: u32) -> Result<OneMinusFraction, PgfError> {
    if j > r - 1 {
        return Err(PgfError::IndexOutOfRange { j, max: r - 1 });
    }
    const YZ: [Var; 2] = [Var::Y, Var::Zeta];
    let (ri, ji) = (r as i64, j as i64);
    let sum = BiPoly::from_terms(
        YZ,
        (0..=ri - 2).map(|k| {
            let w = (k + 1) * (2 * ri * (1 + ji) - (2 + ji) * k - 2);
            ((0, k as u32), ratio(w, 1))
        }),
    );
    let tail = BiPoly::monomial(YZ, ratio(ri * (ri + 1) * ji, 1), 0, r - 1);
    let f = OneMinusFraction::from_poly(sum, Var::Zeta)
        .and_then(|s| s.try_add(&OneMinusFraction::new(tail, Var::Zeta, 1)?))
        .expect("same ring");
    Ok(f.scale(&ratio(1, 2 * (ji + 2))))
}

/// `g_NB(y) = y^2 Σ_j y^j binom(r, j+1) c_g(r, j, ζ)`.
pub fn g_nb_series<S: Scalar>(p: &Params<S>, y: &S) -> S {
    let mut acc = S::zero();
    for j in (0..p.r()).rev() {
        let c = c_g(p.r(), j, p.zeta()).expect("j < r");
        acc = acc * y.clone() + S::from_rat(&binom_rat(p.r() as i64, j as i64 + 1)) * c;
    }
    acc * y.clone() * y.clone()
}

/// `g̃(u) = (1-ζ) g_NB(u - (1-ζ)) / (u - (1-ζ))^2`.
pub fn g_tilde<S: Scalar>(p: &Params<S>, u: &S) -> Result<S, PgfError> {
    let om = S::one() - p.zeta().clone();
    let y = u.clone() - om.clone();
    if y.is_zero() {
        return Err(PgfError::Singular("g_tilde quotient at u = 1 - zeta"));
    }
    Ok(om * g_nb(p, &y) / (y.clone() * y))
}

/// `g̃(u)` from the closed-form coefficient table
/// `Σ_{k=1}^{r-1} Σ_{n=0}^{2r-3-k} c̃_g(r,k,n) u^k ζ^n`.
pub fn g_tilde_closed<S: Scalar>(p: &Params<S>, u: &S) -> S {
    let r = p.r();
    let mut acc = S::zero();
    for k in (1..r).rev() {
        let mut inner = S::zero();
        for n in (0..=2 * r - 3 - k).rev() {
            inner = inner * p.zeta().clone() + S::from_rat(&cgt_closed(r, k, n));
        }
        acc = (acc + inner) * u.clone();
    }
    acc
}

/// n-th functional iterate of `φ_FL` via the matrix power of its Möbius map.
pub fn iterate_fl<S: Scalar>(p: &Params<S>, n: u64, x: &S) -> Result<S, PgfError> {
    check_unit("x", x)?;
    MobiusMap::from_params(p).pow(n).apply(x)
}

/// n-th iterate of `φ_FL` by applying it `n` times.
pub fn iterate_fl_sequential<S: Scalar>(p: &Params<S>, n: u64, x: &S) -> Result<S, PgfError> {
    let mut v = x.clone();
    for _ in 0..n {
        v = phi_fl(p, &v)?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn half(r: u32) -> Params<BigRational> {
        Params::exact(r, 1, 2).unwrap()
    }

    #[test]
    fn zhat_examples() {
        assert_eq!(zhat(&half(2)), ratio(3, 2));
        assert_eq!(zhat(&half(3)), ratio(7, 4));
        for r in 2..10 {
            let p = Params::exact(r, 3, 7).unwrap();
            assert_eq!(zhat(&p), zhat_closed(&p));
            assert_eq!(zhat(&p) * (rat(1) - p.zeta().clone()), rat(1) - p.p_inf());
        }
    }

    #[test]
    fn y_examples() {
        let p = half(2);
        assert_eq!(y_of_x(&p, &ratio(1, 4)).unwrap(), rat(0));
        assert_eq!(y_of_x(&p, &rat(1)).unwrap(), ratio(-1, 2));
        assert_eq!(y_of_x(&p, &rat(0)).unwrap(), ratio(1, 6));
        assert!(y_of_x(&p, &ratio(5, 4)).is_err());
        assert!(y_of_x(&p, &ratio(-1, 4)).is_err());
    }

    #[test]
    fn phi_examples() {
        let p = half(2);
        assert_eq!(phi_nb(&p, &ratio(1, 4)).unwrap(), ratio(1, 4));
        assert_eq!(phi_nb(&p, &rat(1)).unwrap(), rat(1));
        assert_eq!(phi_nb(&p, &rat(0)).unwrap(), ratio(9, 49));
        assert_eq!(phi_fl(&p, &ratio(1, 4)).unwrap(), ratio(1, 4));
        assert_eq!(phi_fl(&p, &rat(1)).unwrap(), rat(1));
        assert_eq!(phi_fl(&p, &rat(0)).unwrap(), ratio(2, 11));
        assert!(phi_fl(&p, &ratio(3, 2)).is_err());
    }

    #[test]
    fn f_and_g_examples() {
        let p = half(2);
        assert_eq!(f_nb(&p, &ratio(1, 4)).unwrap(), rat(0));
        assert_eq!(f_nb(&p, &rat(0)).unwrap(), ratio(1, 72));
        assert_eq!(f_nb(&half(3), &ratio(1, 8)).unwrap(), rat(0));

        assert_eq!(g_nb(&p, &rat(0)), rat(0));
        assert_eq!(g_nb(&p, &ratio(1, 6)), ratio(1, 27));
        assert_eq!(g_nb_definitional(&p, &rat(0)).unwrap(), ratio(1, 27));
        assert_eq!(g_nb(&p, &ratio(-1, 2)), rat(0));
    }

    #[test]
    fn c_g_examples() {
        assert_eq!(c_g(2, 0, &ratio(1, 2)).unwrap(), ratio(1, 2));
        assert_eq!(c_g(2, 1, &ratio(1, 2)).unwrap(), rat(2));
        assert!(c_g(2, 2, &ratio(1, 2)).is_err());
        // j = 0 has no (1-ζ) pole
        for r in 2..12 {
            assert_eq!(c_g_exact(r, 0).unwrap().pow(), 0);
            assert_eq!(c_g_exact(r, 1).unwrap().pow(), 1);
        }
        let e = c_g_exact(2, 1).unwrap();
        assert_eq!(e.eval(&rat(0), &ratio(1, 2)), rat(2));
    }

    #[test]
    fn c_g_positive_on_rational_samples() {
        for r in 2..=15 {
            for j in 0..r {
                for zi in 1..20 {
                    assert!(c_g(r, j, &ratio(zi, 20)).unwrap() > rat(0));
                }
            }
        }
    }

    #[test]
    fn g_tilde_examples() {
        let p = half(2);
        assert_eq!(g_tilde_closed(&p, &rat(0)), rat(0));
        assert_eq!(g_tilde(&p, &rat(0)).unwrap(), rat(0));
        assert_eq!(g_tilde(&p, &ratio(1, 4)).unwrap(), ratio(1, 4));
        assert_eq!(g_tilde_closed(&p, &ratio(1, 4)), ratio(1, 4));
        assert!(g_tilde(&p, &ratio(1, 2)).is_err());
        // just past u = 1 - ζ, i.e. x slightly below ζ^r
        for r in 2..8 {
            let p = half(r);
            let u = ratio(1, 2) + ratio(1, 1000);
            assert!(g_tilde(&p, &u).unwrap() > rat(0));
            assert!(g_tilde_closed(&p, &ratio(1, 2)) > rat(0));
        }
    }

    #[test]
    fn series_forms_agree_exactly() {
        for r in 2..=9 {
            for zi in [1, 3, 5, 7] {
                let p = Params::exact(r, zi, 8).unwrap();
                for yi in -8..=8 {
                    let y = ratio(yi, 9);
                    assert_eq!(g_nb(&p, &y), g_nb_series(&p, &y), "r={r} ζ={zi}/8 y={y}");
                }
                for ui in 0..=10 {
                    let u = ratio(ui, 11);
                    if u == rat(1) - p.zeta().clone() {
                        continue;
                    }
                    assert_eq!(g_tilde(&p, &u).unwrap(), g_tilde_closed(&p, &u));
                }
            }
        }
    }

    #[test]
    fn iterate_examples() {
        let p = half(2);
        let x = ratio(1, 3);
        assert_eq!(iterate_fl(&p, 0, &x).unwrap(), x);
        assert_eq!(iterate_fl(&p, 1, &x).unwrap(), phi_fl(&p, &x).unwrap());
        assert_eq!(
            iterate_fl(&p, 50, &rat(0)).unwrap(),
            iterate_fl_sequential(&p, 50, &rat(0)).unwrap()
        );
        let pf = p.to_f64();
        let a = iterate_fl(&pf, 50, &0.0).unwrap();
        let b = iterate_fl_sequential(&pf, 50, &0.0).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn y_bounds_chain() {
        for r in 2..=12u32 {
            for zi in 1..20 {
                let z = zi as f64 / 20.0;
                let p = Params::new(r, z).unwrap();
                let y0 = y_of_x(&p, &0.0).unwrap();
                let mid = z.powf((r + 1) as f64 / 2.0) / r as f64;
                assert!(y0 < mid && mid < 1.0 / r as f64, "r={r} ζ={z}");
            }
        }
    }

    #[test]
    fn standard_form_matches_exactly() {
        for r in 2..=8 {
            for zi in 1..10 {
                let p = Params::exact(r, zi, 10).unwrap();
                for xi in 0..=12 {
                    let x = ratio(xi, 12);
                    assert_eq!(phi_nb(&p, &x).unwrap(), phi_nb_standard(&p, &x).unwrap());
                }
            }
        }
    }

    fn params_strategy() -> impl Strategy<Value = (u32, f64)> {
        (2u32..=12, 0.01f64..0.99)
    }

    proptest! {
        #[test]
        fn standard_form_matches_float((r, z) in params_strategy(), x in 0.0f64..=1.0) {
            let p = Params::new(r, z).unwrap();
            let a = phi_nb(&p, &x).unwrap();
            let b = phi_nb_standard(&p, &x).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn g_routes_agree((r, z) in params_strategy(), x in 0.0f64..1.0) {
            let p = Params::new(r, z).unwrap();
            let y = y_of_x(&p, &x).unwrap();
            let closed = g_nb(&p, &y);
            let def = g_nb_definitional(&p, &x).unwrap();
            // f_NB is a difference of two O(1) terms, so the definitional
            // route carries an absolute rounding floor of that size
            let q = p.p_inf();
            let terms = q / phi_fl(&p, &x).unwrap() + q / phi_nb(&p, &x).unwrap();
            let floor = 64.0 * f64::EPSILON * terms * (1.0 - x - r as f64 * y).abs()
                / (1.0 - z).powi(2);
            let tol = 1e-10 * closed.abs() + floor;
            prop_assert!((closed - def).abs() <= tol, "closed={closed} def={def}");
        }

        #[test]
        fn both_pgfs_monotone_and_convex((r, z) in params_strategy()) {
            let p = Params::new(r, z).unwrap();
            let n = 200;
            let xs: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
            for f in [phi_nb::<f64>, phi_fl::<f64>] {
                let v: Vec<f64> = xs.iter().map(|x| f(&p, x).unwrap()).collect();
                for w in v.windows(2) {
                    prop_assert!(w[1] - w[0] >= -1e-14);
                }
                for w in v.windows(3) {
                    prop_assert!(w[2] - 2.0 * w[1] + w[0] >= -1e-12);
                }
            }
        }
    }
}
