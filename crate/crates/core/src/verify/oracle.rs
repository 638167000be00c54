//! Independent constructions of the `c̃_g` table.

use num_traits::{Signed, Zero};

use super::{Check, CoeffTable, IdentityReport, TableSource, VerifyError};
use crate::algebra::{binom_rat, rat, ratio, sign_pow, BiPoly, BigRat, Var};
use crate::pgf::c_g_exact;

const YZ: [Var; 2] = [Var::Y, Var::Zeta];
const UZ: [Var; 2] = [Var::U, Var::Zeta];

fn one_minus_zeta(vars: [Var; 2]) -> BiPoly {
    BiPoly::from_terms(vars, [((0, 0), rat(1)), ((0, 1), rat(-1))])
}

/// Numerator of `g_NB` in `(y, ζ)`:
/// `y((1+y)^r - 1)(r(1-ζ) - (1-ζ^r)) - (1-ζ)(1-ζ^r)((1+y)^r - 1 - r y)`.
pub fn g_numerator(r: u32) -> BiPoly {
    let one = BiPoly::one(YZ);
    let y = BiPoly::monomial(YZ, rat(1), 1, 0);
    let om = one_minus_zeta(YZ);
    let omr = BiPoly::from_terms(YZ, [((0, 0), rat(1)), ((0, r), rat(-1))]);
    let pw = &(&one + &y).pow(r) - &one;
    let lin = &om.scale(&rat(r as i64)) - &omr;
    let first = &(&y * &pw) * &lin;
    let second = &(&om * &omr) * &(&pw - &y.scale(&rat(r as i64)));
    &first - &second
}

/// Brute-force table: expand the `g_NB` numerator, strip `y^2`, shift
/// `y = u - (1-ζ)`, clear `(1-ζ)^2` exactly and read off coefficients.
pub fn oracle_expand_polynomial(r: u32) -> Result<CoeffTable, VerifyError> {
    if r < 2 {
        return Err(VerifyError::ShapeOutOfRange(r));
    }
    let numer = g_numerator(r);
    let y2 = BiPoly::monomial(YZ, rat(1), 2, 0);
    let reduced = numer.div_exact(&y2)?.relabel(UZ);
    let shift = BiPoly::from_terms(UZ, [((1, 0), rat(1)), ((0, 0), rat(-1)), ((0, 1), rat(1))]);
    let shifted = reduced.subst(Var::U, &shift)?;
    let g_tilde = shifted.div_exact(&one_minus_zeta(UZ).pow(2))?;
    let mut t = CoeffTable::new(r, TableSource::OraclePolynomial);
    for (&(k, n), c) in g_tilde.terms() {
        t.insert(k, n, c.clone());
    }
    Ok(t)
}

/// Summand factor for `0 <= n <= r-1`.
pub fn c_g1(r: u32, k: u32, n: u32, m: u32) -> BigRat {
    let (r, k, n, m) = (r as i64, k as i64, n as i64, m as i64);
    let lead = rat(r) - ratio(r + 1, k + m + 2);
    if n == 0 {
        sign_pow(m) * lead
    } else {
        sign_pow(m - n) * (binom_rat(m - 1, n) * lead + binom_rat(m - 2, n - 1))
    }
}

/// Summand factor for `r <= n <= 2r-3-k`.
pub fn c_g2(r: u32, k: u32, n: u32, m: u32) -> BigRat {
    let (r, k, n, m) = (r as i64, k as i64, n as i64, m as i64);
    if n == r && m == 1 {
        rat(1) - ratio(r + 1, k + 3)
    } else if n == r {
        sign_pow(m) * ratio(r + 1, k + 2 + m)
    } else {
        let s = n - r;
        sign_pow(m - s) * (binom_rat(m - 1, s) * ratio(r + 1, k + m + 2) - binom_rat(m - 2, s - 1))
    }
}

fn summand_weight(r: u32, k: u32, m: u32) -> BigRat {
    let (r, k, m) = (r as i64, k as i64, m as i64);
    binom_rat(m + k, k) * binom_rat(r, m + k + 1)
}

/// `c̃_g(r, k, n)` from the `m`-summation representation, evaluated for any
/// `n` (the sums vanish by themselves past `2r-3-k`).
pub fn cgt_summation(r: u32, k: u32, n: u32) -> BigRat {
    if k < 1 || k >= r {
        return BigRat::zero();
    }
    let top = r - 1 - k;
    if n < r {
        (0..=top)
            .map(|m| summand_weight(r, k, m) * c_g1(r, k, n, m))
            .sum()
    } else {
        let lo = n - r + 1;
        if lo > top {
            return BigRat::zero();
        }
        (lo..=top)
            .map(|m| summand_weight(r, k, m) * c_g2(r, k, n, m))
            .sum()
    }
}

pub fn oracle_expand_summation(r: u32) -> CoeffTable {
    let mut t = CoeffTable::new(r, TableSource::OracleSummation);
    for k in 1..r {
        for n in 0..=2 * r {
            t.insert(k, n, cgt_summation(r, k, n));
        }
    }
    t
}

/// `(1-ζ) c_g(r, j, ζ)` as a polynomial in the `(y, ζ)` ring.
fn scaled_c_g(r: u32, j: u32) -> BiPoly {
    c_g_exact(r, j)
        .expect("j < r")
        .mul_one_minus(1)
        .into_poly()
        .expect("c_g has at most a simple pole at ζ = 1")
}

/// The coefficient form `y^2 Σ_j y^j binom(r, j+1) c_g(r, j, ζ)` equals the
/// closed expression; compared as polynomials after multiplying by `(1-ζ)^3`.
pub fn check_coefficient_form(r: u32) -> IdentityReport {
    let mut c = Check::new("series.coefficient_form", r, "polynomial identity in (y, ζ)");
    let mut series = BiPoly::zero(YZ);
    for j in 0..r {
        let term = scaled_c_g(r, j)
            .shift(j + 2, 0)
            .scale(&binom_rat(r as i64, j as i64 + 1));
        series = &series + &term;
    }
    let lhs = g_numerator(r);
    let rhs = &series * &one_minus_zeta(YZ).pow(2);
    c.eq(|| "full polynomial".into(), &lhs, &rhs);
    c.finish()
}

/// `g̃(u)` as `Σ_k u^k Σ_{j>=k} binom(j,k) (ζ-1)^(j-k) (1-ζ) binom(r,j+1) c_g(r,j,ζ)`,
/// i.e. the binomial expansion of `y^j = (u - (1-ζ))^j` in the coefficient form.
pub fn expansion_via_c_g(r: u32) -> BiPoly {
    let zm1 = BiPoly::from_terms(UZ, [((0, 0), rat(-1)), ((0, 1), rat(1))]);
    let mut out = BiPoly::zero(UZ);
    for j in 0..r {
        let cg = scaled_c_g(r, j).relabel(UZ);
        let weighted = cg.scale(&binom_rat(r as i64, j as i64 + 1));
        for k in 0..=j {
            let term = &zm1.pow(j - k) * &weighted;
            out = &out + &term.shift(k, 0).scale(&binom_rat(j as i64, k as i64));
        }
    }
    out
}

/// `g̃(u)` from the triple sum over `i = j - k`, `n` and `l` whose inner
/// sums are the `γ` quantities.
pub fn expansion_via_gamma_sum(r: u32) -> BiPoly {
    let ri = r as i64;
    let mut out = BiPoly::zero(UZ);
    for k in 0..ri {
        for i in 0..=(ri - 1 - k) {
            let outer = binom_rat(i + k, k);
            let b1 = binom_rat(ri, i + k + 1);
            let b2 = binom_rat(ri + 1, i + k + 2);
            for n in 0..=(ri - 1 + i) {
                let mut inner = BigRat::zero();
                for l in (n - i).max(0)..=(ri - 1).min(n) {
                    let bracket = &b1 * rat(ri - l) - &b2;
                    inner += sign_pow(i - n + l) * binom_rat(i, i - n + l) * bracket;
                }
                let coeff = &outer * inner;
                out = &out + &BiPoly::monomial(UZ, coeff, k as u32, n as u32);
            }
        }
    }
    out
}

fn closed_poly(r: u32) -> BiPoly {
    BiPoly::from_terms(
        UZ,
        CoeffTable::closed_form(r)
            .iter()
            .map(|(&k, v)| (k, v.clone()))
            .collect::<Vec<_>>(),
    )
}

pub(crate) fn check_expansion_forms(r: u32) -> IdentityReport {
    let mut c = Check::new("expansion.c_g_and_gamma_forms", r, "polynomial identity in (u, ζ)");
    let want = closed_poly(r);
    c.eq(|| "via c_g".into(), &want, &expansion_via_c_g(r));
    c.eq(|| "via γ triple sum".into(), &want, &expansion_via_gamma_sum(r));
    c.finish()
}

/// Every summand weight of `c_g` is positive, which makes `c_g > 0` on (0,1):
/// `2r(1+j) - (2+j)k - 2 >= 2 + j(2r-k) >= 2` for `0 <= k <= r-2`.
pub(crate) fn check_c_g_positivity(r: u32) -> IdentityReport {
    let mut c = Check::new("series.c_g_positive", r, "0<=j<=r-1, 0<=k<=r-2");
    let ri = r as i64;
    for j in 0..ri {
        for k in 0..=ri - 2 {
            let w = 2 * ri * (1 + j) - (2 + j) * k - 2;
            let mid = 2 + j * (2 * ri - k);
            c.holds(|| format!("j={j} k={k} weight={w}"), "weight >= 2 + j(2r-k)", w >= mid);
            c.holds(|| format!("j={j} k={k}"), "2 + j(2r-k) >= 2", mid >= 2);
        }
        let tail = ri * (ri + 1) * j;
        c.holds(|| format!("j={j}"), "pole coefficient >= 0", tail >= 0);
        // spot values on rational ζ
        for zi in 1..8 {
            let z = ratio(zi, 8);
            let v = crate::pgf::c_g(r, j as u32, &z).expect("j < r");
            c.holds(|| format!("j={j} ζ={z} value={v}"), "c_g > 0", v.is_positive());
        }
    }
    c.finish()
}

fn alternates(vals: &[BigRat]) -> bool {
    let nz: Vec<&BigRat> = vals.iter().filter(|v| !v.is_zero()).collect();
    nz.windows(2).all(|w| w[0].is_positive() != w[1].is_positive())
}

pub(crate) fn check_summation_structure(r: u32) -> Vec<IdentityReport> {
    let ri = r as i64;
    let mut m0 = Check::new("summation.c_g1_m0", r, "1<=k<=r-1, 0<=n<=r-1");
    let mut vanish = Check::new("summation.c_g2_vanish", r, "n>=2r-2-k");
    let mut alt = Check::new("summation.sign_alternation", r, "c_g1 (m>=1 when n>=1), c_g2");
    for k in 1..r {
        let ki = k as i64;
        let top = r - 1 - k;
        for n in 0..r {
            let want = rat(ri - n as i64) - ratio(ri + 1, ki + 2);
            m0.eq(|| format!("k={k} n={n}"), &want, &c_g1(r, k, n, 0));
            let start = if n == 0 { 0 } else { 1 };
            let vals: Vec<BigRat> = (start..=top).map(|m| c_g1(r, k, n, m)).collect();
            alt.holds(|| format!("c_g1 k={k} n={n}"), "alternating signs", alternates(&vals));
        }
        for n in r..=(2 * r - 3).saturating_sub(k) {
            let lo = n - r + 1;
            if lo <= top {
                let vals: Vec<BigRat> = (lo..=top).map(|m| c_g2(r, k, n, m)).collect();
                alt.holds(|| format!("c_g2 k={k} n={n}"), "alternating signs", alternates(&vals));
            }
        }
        // at and beyond 2r-2-k only m = r-1-k (or nothing) remains and it vanishes
        for n in (2 * r - 2 - k).max(r)..=(2 * r + 1) {
            let lo = n - r + 1;
            for m in lo..=top {
                vanish.eq(|| format!("k={k} n={n} m={m}"), &BigRat::zero(), &c_g2(r, k, n, m));
            }
            vanish.eq(|| format!("k={k} n={n} sum"), &BigRat::zero(), &cgt_summation(r, k, n));
        }
    }
    vec![m0.finish(), vanish.finish(), alt.finish()]
}
