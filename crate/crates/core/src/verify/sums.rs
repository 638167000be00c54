//! The intermediate summation identities used to collapse the `m`-sums into
//! the closed-form branches, plus the `γ` sums.

use super::{cgt_closed, cgt_summation, c_g2, Check, IdentityReport, VerifyError};
use crate::algebra::{binom_rat, rat, ratio, sign_pow, BigRat};

/// A sum evaluated literally next to its closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckedValue {
    pub literal: BigRat,
    pub closed: BigRat,
}

impl CheckedValue {
    pub fn agrees(&self) -> bool {
        self.literal == self.closed
    }
}

/// `γ1, γ2` exist for `0 <= n <= r-1`; `γ3, γ4` for `r <= n <= r-1+i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSums {
    pub gamma1: Option<CheckedValue>,
    pub gamma2: Option<CheckedValue>,
    pub gamma3: Option<CheckedValue>,
    pub gamma4: Option<CheckedValue>,
}

fn gamma_term(i: i64, n: i64, l: i64) -> BigRat {
    sign_pow(i - n + l) * binom_rat(i, i - n + l)
}

/// Literal and closed-form `γ` sums for `0 <= i <= r-2`.
pub fn gamma_sums(r: u32, n: u32, i: u32) -> Result<GammaSums, VerifyError> {
    let (ri, ni, ii) = (r as i64, n as i64, i as i64);
    if ii > ri - 2 || ni > ri - 1 + ii {
        return Err(VerifyError::IndexRange {
            what: format!("r={r} n={n} i={i}"),
        });
    }
    let lo = (ni - ii).max(0);
    if ni < ri {
        let g1: BigRat = (lo..=ni).map(|l| gamma_term(ii, ni, l)).sum();
        let g2: BigRat = (lo..=ni).map(|l| gamma_term(ii, ni, l) * rat(l)).sum();
        let c1 = sign_pow(ii - ni) * binom_rat(ii - 1, ni);
        let c2 = if ni == 0 {
            rat(0)
        } else {
            sign_pow(ii - ni - 1) * binom_rat(ii - 2, ni - 1)
        };
        Ok(GammaSums {
            gamma1: Some(CheckedValue { literal: g1, closed: c1 }),
            gamma2: Some(CheckedValue { literal: g2, closed: c2 }),
            gamma3: None,
            gamma4: None,
        })
    } else {
        let g3: BigRat = (lo..=ri - 1).map(|l| gamma_term(ii, ni, l)).sum();
        let g4: BigRat = (lo..=ri - 1).map(|l| gamma_term(ii, ni, l) * rat(l)).sum();
        let sign = sign_pow(ri - 1 - (ni - ii));
        let c3 = if ii == 0 {
            rat(0)
        } else {
            sign.clone() * binom_rat(ii - 1, ni - ri)
        };
        let c4 = if ii <= 1 && ni > ri {
            rat(0)
        } else if ii == 1 && ni == ri {
            rat(ri - 1)
        } else {
            // i > 1 here: n >= r rules out i = 0
            sign * ratio(ri * ii - ni, ii - 1) * binom_rat(ii - 1, ni - ri)
        };
        Ok(GammaSums {
            gamma1: None,
            gamma2: None,
            gamma3: Some(CheckedValue { literal: g3, closed: c3 }),
            gamma4: Some(CheckedValue { literal: g4, closed: c4 }),
        })
    }
}

pub(crate) fn check_gamma_sums(r: u32) -> IdentityReport {
    let mut c = Check::new("sums.gamma", r, "0<=i<=r-2, 0<=n<=r-1+i");
    for i in 0..=r.saturating_sub(2) {
        for n in 0..=(r - 1 + i) {
            match gamma_sums(r, n, i) {
                Ok(g) => {
                    for (name, v) in [
                        ("γ1", &g.gamma1),
                        ("γ2", &g.gamma2),
                        ("γ3", &g.gamma3),
                        ("γ4", &g.gamma4),
                    ] {
                        if let Some(v) = v {
                            c.eq(|| format!("{name} n={n} i={i}"), &v.closed, &v.literal);
                        }
                    }
                }
                Err(e) => c.fail(format!("n={n} i={i}"), e),
            }
        }
    }
    c.finish()
}

fn weight_r(r: i64, k: i64, m: i64) -> BigRat {
    binom_rat(m + k, k) * binom_rat(r, m + k + 1)
}

fn weight_r1(r: i64, k: i64, m: i64) -> BigRat {
    binom_rat(m + k, k) * binom_rat(r + 1, m + k + 2)
}

/// Low branch, `0 <= n <= r-1-k`: the three `m`-sums and their combination
/// `k binom(k+n+2, k+2)`.
pub fn check_low_branch_sums(r: u32, k: u32, n: u32) -> IdentityReport {
    let mut c = Check::new("branch.low", r, "0<=n<=r-1-k").k(k).n(n);
    let (ri, ki, ni) = (r as i64, k as i64, n as i64);
    if ki < 1 || ki > ri - 1 || ni > ri - 1 - ki {
        c.fail(format!("k={k} n={n}"), "index outside the low branch");
        return c.finish();
    }
    let ms = 0..=(ri - 1 - ki);
    let top = binom_rat(ki + ni + 2, ki + 2);
    let den = ki + ni + 2;

    let s1: BigRat = ms
        .clone()
        .map(|m| weight_r(ri, ki, m) * sign_pow(m - ni) * binom_rat(m - 1, ni))
        .sum();
    c.eq(|| "sum binom(m-1,n)".into(), &binom_rat(ki + ni + 1, ki + 1), &s1);
    c.eq(|| "sum binom(m-1,n) rescaled".into(), &(top.clone() * ratio(ki + 2, den)), &s1);

    let s2: BigRat = ms
        .clone()
        .map(|m| weight_r1(ri, ki, m) * sign_pow(m - ni) * binom_rat(m - 1, ni))
        .sum();
    let want2 = top.clone() * ratio(ri * (ki + 2) - ki * den - ni, den);
    c.eq(|| "sum binom(r+1,..) binom(m-1,n)".into(), &want2, &s2);

    let s3: BigRat = if ni >= 1 {
        let s: BigRat = ms
            .map(|m| weight_r(ri, ki, m) * sign_pow(m - ni) * binom_rat(m - 2, ni - 1))
            .sum();
        c.eq(|| "sum binom(m-2,n-1)".into(), &(top.clone() * ratio(-ni, den)), &s);
        s
    } else {
        rat(0)
    };

    let combined = rat(ri) * s1 - s2 + s3;
    let want = top * rat(ki);
    c.eq(|| "combination".into(), &want, &combined);
    c.eq(|| "closed form".into(), &want, &cgt_closed(r, k, n));
    c.eq(|| "summation form".into(), &want, &cgt_summation(r, k, n));
    if n == 0 {
        c.eq(|| "n=0 gives k".into(), &rat(ki), &combined);
    }
    c.finish()
}

/// Middle branch, `r-k <= n <= r-1`: each `m`-sum collapses to its `m <= 1`
/// summands.
pub fn check_middle_branch_sums(r: u32, k: u32, n: u32) -> IdentityReport {
    let mut c = Check::new("branch.middle", r, "r-k<=n<=min(r-1, 2r-3-k)").k(k).n(n);
    let (ri, ki, ni) = (r as i64, k as i64, n as i64);
    if ki < 1 || ki > ri - 1 || ni < ri - ki || ni > (ri - 1).min(2 * ri - 3 - ki) {
        c.fail(format!("k={k} n={n}"), "index outside the middle branch");
        return c.finish();
    }
    let ms = 0..=(ri - 1 - ki);
    let b = binom_rat(ri, ki + 1);

    let a: BigRat = ms
        .clone()
        .map(|m| weight_r(ri, ki, m) * sign_pow(m - ni) * binom_rat(m - 1, ni) * rat(ri))
        .sum();
    c.eq(|| "r-weighted sum".into(), &(b.clone() * rat(ri)), &a);

    let bsum: BigRat = ms
        .clone()
        .map(|m| weight_r1(ri, ki, m) * sign_pow(m - ni) * binom_rat(m - 1, ni))
        .sum();
    c.eq(|| "(r+1)-weighted sum".into(), &(b.clone() * ratio(ri + 1, ki + 2)), &bsum);

    let csum: BigRat = ms
        .map(|m| weight_r(ri, ki, m) * sign_pow(m - ni) * binom_rat(m - 2, ni - 1))
        .sum();
    let mid = b.clone() * rat(-ni) + binom_rat(ri, ki + 2) * rat(ki + 1);
    c.eq(|| "m<=1 summands".into(), &mid, &csum);
    c.eq(
        || "collapsed form".into(),
        &(b.clone() * (ratio((ki + 1) * (ri - 1 - ki), ki + 2) - rat(ni))),
        &csum,
    );

    let combined = a - bsum + csum;
    let factor = (2 * ri - ki) * (ki + 1) - (ni + 1) * (ki + 2);
    let want = b * ratio(factor, ki + 2);
    c.eq(|| "combination".into(), &want, &combined);
    c.eq(|| "closed form".into(), &want, &cgt_closed(r, k, n));
    c.holds(|| format!("factor={factor}"), "(2r-k)(k+1)-(n+1)(k+2) > 0", factor > 0);
    c.finish()
}

/// High branch with `n >= r+1`, `s = n - r`: the two `m`-sums and their
/// difference.
pub fn check_high_branch_sums(r: u32, k: u32, n: u32) -> IdentityReport {
    let mut c = Check::new("branch.high", r, "r+1<=n<=2r-3-k").k(k).n(n);
    let (ri, ki, ni) = (r as i64, k as i64, n as i64);
    if ri < 4 || ki < 1 || ki > ri - 3 || ni < ri + 1 || ni > 2 * ri - 3 - ki {
        c.fail(format!("k={k} n={n}"), "index outside the high branch");
        return c.finish();
    }
    let s = ni - ri;
    let ms = (s + 1)..=(ri - 1 - ki);
    let b = binom_rat(ri, ki + 1);
    let bs2 = binom_rat(ki + s + 1, ki + 2);
    let bs1 = binom_rat(ki + s + 1, ki + 1);

    let ta: BigRat = ms
        .clone()
        .map(|m| weight_r1(ri, ki, m) * sign_pow(m - s) * binom_rat(m - 1, s))
        .sum();
    let ta1 = -binom_rat(ri + 1, ki + 2) + (ratio((ki + 2) * (ri - ki), s) - rat(ki + 1)) * bs2.clone();
    let ta2 = -(b.clone() * ratio(ri + 1, ki + 2)) + (rat(ri - ki) - ratio((ki + 1) * s, ki + 2)) * bs1.clone();
    c.eq(|| "binom(m-1,s) sum, first form".into(), &ta1, &ta);
    c.eq(|| "binom(m-1,s) sum, second form".into(), &ta2, &ta);

    let tb: BigRat = ms
        .map(|m| weight_r(ri, ki, m) * sign_pow(m - s) * binom_rat(m - 2, s - 1))
        .sum();
    let tb1 = binom_rat(ri, ki + 2) * (ratio(s * (ki + 2), ri - ki - 1) - rat(ki + 1)) - bs2;
    let tb2 = b * (rat(s) - ratio((ri - ki - 1) * (ki + 1), ki + 2)) - bs1 * ratio(s, ki + 2);
    c.eq(|| "binom(m-2,s-1) sum, first form".into(), &tb1, &tb);
    c.eq(|| "binom(m-2,s-1) sum, second form".into(), &tb2, &tb);

    let diff = ta - tb;
    c.eq(|| "difference vs closed form".into(), &cgt_closed(r, k, n), &diff);
    c.eq(|| "difference vs summation".into(), &cgt_summation(r, k, n), &diff);
    c.finish()
}

/// The `n = r` case of the high branch, which only has the special `m = 1`
/// summand and the `(r+1)/(k+2+m)` tail.
pub fn check_high_branch_at_r(r: u32, k: u32) -> IdentityReport {
    let mut c = Check::new("branch.high_at_r", r, "n=r, r>=4, k<=r-3").k(k).n(r);
    let (ri, ki) = (r as i64, k as i64);
    if ri < 4 || ki > ri - 3 {
        return c.finish();
    }
    c.eq(|| "m=1 summand".into(), &(rat(1) - ratio(ri + 1, ki + 3)), &c_g2(r, k, r, 1));
    let sum: BigRat = (1..=(ri - 1 - ki))
        .map(|m| weight_r(ri, ki, m) * c_g2(r, k, r, m as u32))
        .sum();
    // term-by-term reduction: Σ_{m>=1} w_m (-1)^m (r+1)/(k+2+m) + w_1
    let split: BigRat = (1..=(ri - 1 - ki))
        .map(|m| weight_r1(ri, ki, m) * sign_pow(m))
        .sum::<BigRat>()
        + weight_r(ri, ki, 1);
    c.eq(|| "split sum".into(), &split, &sum);
    let closed = cgt_closed(r, k, r);
    c.eq(|| "sum vs closed".into(), &closed, &sum);
    let special = binom_rat(ri, ki + 1) * ratio((ri - ki - 2) * ki - 2, ki + 2) + rat(ri - ki);
    c.eq(|| "special case formula".into(), &special, &closed);
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Status;

    #[test]
    fn gamma_examples() {
        let g = gamma_sums(5, 0, 3).unwrap();
        assert_eq!(g.gamma2.unwrap().literal, rat(0));
        let g = gamma_sums(5, 5, 1).unwrap();
        assert_eq!(g.gamma4.unwrap().literal, rat(4));
        let g = gamma_sums(5, 1, 3).unwrap();
        let g1 = g.gamma1.unwrap();
        assert_eq!(g1.literal, rat(2));
        assert!(g1.agrees());
    }

    #[test]
    fn gamma_rejects_out_of_range() {
        assert!(gamma_sums(4, 0, 3).is_err());
        assert!(gamma_sums(4, 6, 1).is_err());
    }

    #[test]
    fn named_step_examples() {
        assert_eq!(check_low_branch_sums(5, 2, 1).status, Status::Pass);
        assert_eq!(check_low_branch_sums(5, 2, 0).status, Status::Pass);
        assert_eq!(check_middle_branch_sums(6, 2, 5).status, Status::Pass);
        assert_eq!(check_high_branch_sums(7, 2, 9).status, Status::Pass);
        assert_eq!(check_high_branch_at_r(7, 2).status, Status::Pass);
    }

    #[test]
    fn out_of_branch_indices_fail_loudly() {
        assert_eq!(check_low_branch_sums(5, 2, 3).status, Status::Fail);
        assert_eq!(check_middle_branch_sums(6, 2, 2).status, Status::Fail);
        assert_eq!(check_high_branch_sums(7, 2, 7).status, Status::Fail);
        assert_eq!(check_high_branch_at_r(5, 3).status, Status::VacuousPass);
    }
}
