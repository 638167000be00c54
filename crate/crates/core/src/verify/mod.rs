//! Machine check of the coefficient identities behind the pgf inequality.
//!
//! The closed-form table `c̃_g(r, k, n)` is compared against two independent
//! constructions: a brute-force polynomial expansion of `g_NB` followed by the
//! shift `y = u - (1-ζ)`, and the alternating `m`-summation form. Around that
//! sit checks for the intermediate summation identities and the `γ` sums.
//! A difference argument shows the high-branch coefficients are positive.
//!
//! Every check produces an [`IdentityReport`]; a failing report always carries
//! the first counterexample it found.

mod argument;
mod closed;
mod oracle;
mod sums;

pub use argument::check_positivity_argument;
pub use closed::{cgt_branch, cgt_closed, cgt_convex_part, cgt_linear_part, CgtBranch};
pub use oracle::{
    g_numerator, c_g1, c_g2, cgt_summation, check_coefficient_form, expansion_via_c_g,
    expansion_via_gamma_sum, oracle_expand_polynomial, oracle_expand_summation,
};
pub use sums::{
    check_low_branch_sums, check_middle_branch_sums, check_high_branch_sums, check_high_branch_at_r,
    gamma_sums, CheckedValue, GammaSums,
};

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{is_integral, AlgebraError, BigRat};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("r_max = {0} is below the smallest admissible shape 2")]
    RMaxTooSmall(u32),
    #[error("r = {0} outside the supported range")]
    ShapeOutOfRange(u32),
    #[error("index ({what}) outside the range where the identity is stated")]
    IndexRange { what: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableSource {
    ClosedForm,
    OraclePolynomial,
    OracleSummation,
}

/// Exact coefficients `c̃_g(r, k, n)` of `u^k ζ^n` for one `r`.
///
/// Only nonzero entries are stored; lookups outside return zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    pub r: u32,
    pub source: TableSource,
    entries: BTreeMap<(u32, u32), BigRat>,
}

impl CoeffTable {
    pub fn new(r: u32, source: TableSource) -> Self {
        CoeffTable {
            r,
            source,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, k: u32, n: u32, v: BigRat) {
        if num_traits::Zero::is_zero(&v) {
            self.entries.remove(&(k, n));
        } else {
            self.entries.insert((k, n), v);
        }
    }

    pub fn get(&self, k: u32, n: u32) -> BigRat {
        self.entries
            .get(&(k, n))
            .cloned()
            .unwrap_or_else(num_traits::Zero::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &BigRat)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Closed-form table over `1 <= k <= r-1`, `0 <= n <= 2r-3-k`.
    pub fn closed_form(r: u32) -> Self {
        let mut t = CoeffTable::new(r, TableSource::ClosedForm);
        for k in 1..r {
            for n in 0..=2 * r - 3 - k {
                t.insert(k, n, cgt_closed(r, k, n));
            }
        }
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// The parameter range was empty; recorded explicitly so an index bug
    /// cannot hide behind a silent pass.
    VacuousPass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub at: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub id: &'static str,
    pub r: u32,
    pub k: Option<u32>,
    pub n: Option<u32>,
    /// Human readable description of the index range covered.
    pub range: String,
    /// Number of individual equalities or inequalities evaluated.
    pub checked: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} r={}", self.id, self.r)?;
        if let Some(k) = self.k {
            write!(f, " k={k}")?;
        }
        if let Some(n) = self.n {
            write!(f, " n={n}")?;
        }
        write!(f, " [{}] {:?} ({} checks)", self.range, self.status, self.checked)?;
        if let Some(c) = &self.counterexample {
            write!(f, " at {}: expected {}, got {}", c.at, c.expected, c.actual)?;
        }
        Ok(())
    }
}

/// Accumulates equality and inequality checks for one report.
pub(crate) struct Check {
    id: &'static str,
    r: u32,
    k: Option<u32>,
    n: Option<u32>,
    range: String,
    checked: usize,
    failure: Option<Counterexample>,
}

impl Check {
    pub(crate) fn new(id: &'static str, r: u32, range: impl Into<String>) -> Self {
        Check {
            id,
            r,
            k: None,
            n: None,
            range: range.into(),
            checked: 0,
            failure: None,
        }
    }

    pub(crate) fn k(mut self, k: u32) -> Self {
        self.k = Some(k);
        self
    }

    pub(crate) fn n(mut self, n: u32) -> Self {
        self.n = Some(n);
        self
    }

    pub(crate) fn eq<T: PartialEq + fmt::Display>(
        &mut self,
        at: impl FnOnce() -> String,
        expected: &T,
        actual: &T,
    ) {
        self.checked += 1;
        if expected != actual && self.failure.is_none() {
            self.failure = Some(Counterexample {
                at: at(),
                expected: expected.to_string(),
                actual: actual.to_string(),
            });
        }
    }

    pub(crate) fn holds(&mut self, at: impl FnOnce() -> String, claim: &str, ok: bool) {
        self.checked += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(Counterexample {
                at: at(),
                expected: claim.to_string(),
                actual: "violated".to_string(),
            });
        }
    }

    pub(crate) fn fail(&mut self, at: impl Into<String>, err: impl fmt::Display) {
        self.checked += 1;
        if self.failure.is_none() {
            self.failure = Some(Counterexample {
                at: at.into(),
                expected: "no error".into(),
                actual: err.to_string(),
            });
        }
    }

    pub(crate) fn finish(self) -> IdentityReport {
        let status = if self.failure.is_some() {
            Status::Fail
        } else if self.checked == 0 {
            Status::VacuousPass
        } else {
            Status::Pass
        };
        IdentityReport {
            id: self.id,
            r: self.r,
            k: self.k,
            n: self.n,
            range: self.range,
            checked: self.checked,
            status,
            counterexample: self.failure,
        }
    }
}

/// Largest shape for which the brute-force expansion is attempted.
pub const R_MAX_LIMIT: u32 = 60;

/// Triple agreement, integrality, support, positivity and zero pattern of the
/// coefficient table for one `r`.
pub fn check_tables(r: u32) -> Vec<IdentityReport> {
    let closed = CoeffTable::closed_form(r);
    let summation = oracle_expand_summation(r);
    let poly = oracle_expand_polynomial(r);
    let box_range = format!("0<=k<={r}, 0<=n<={}", 2 * r);
    let mut out = Vec::new();

    let mut agree = Check::new("table.triple_agreement", r, box_range);
    match &poly {
        Ok(poly) => {
            for k in 0..=r {
                for n in 0..=2 * r {
                    let c = cgt_closed(r, k, n);
                    let at = || format!("k={k} n={n}");
                    agree.eq(at, &c, &poly.get(k, n));
                    agree.eq(at, &c, &summation.get(k, n));
                }
            }
        }
        Err(e) => agree.fail("oracle_expand_polynomial", e),
    }
    out.push(agree.finish());

    let mut support = Check::new("table.support", r, "every expanded term of g̃");
    if let Ok(poly) = &poly {
        for (&(k, n), v) in poly.iter().chain(summation.iter()) {
            support.holds(
                || format!("k={k} n={n} value={v}"),
                "1<=k<=r-1 and n<=2r-3-k",
                cgt_branch(r, k, n) != CgtBranch::Outside,
            );
        }
    } else {
        support.fail("oracle_expand_polynomial", "expansion failed");
    }
    out.push(support.finish());

    let mut integral = Check::new("table.integrality", r, "all three tables");
    for t in [Some(&closed), Some(&summation), poly.as_ref().ok()].into_iter().flatten() {
        for (&(k, n), v) in t.iter() {
            integral.holds(
                || format!("{:?} k={k} n={n} value={v}", t.source),
                "integer coefficient",
                is_integral(v),
            );
        }
    }
    out.push(integral.finish());

    let mut positive = Check::new("table.positivity", r, "1<=k<=r-1, 0<=n<=2r-3-k");
    for k in 1..r {
        for n in 0..=2 * r - 3 - k {
            let v = cgt_closed(r, k, n);
            positive.holds(|| format!("k={k} n={n} value={v}"), "c̃_g > 0", v > BigRat::from_integer(0.into()));
        }
    }
    out.push(positive.finish());

    let mut zeros = Check::new("table.zero_pattern", r, "n=2r-i-k, i in {0,1,2}");
    for k in 1..r {
        for i in 0..=2u32 {
            let n = 2 * r - i - k;
            let at = || format!("k={k} n={n}");
            let zero = BigRat::from_integer(0.into());
            if let Ok(poly) = &poly {
                zeros.eq(at, &zero, &poly.get(k, n));
            }
            zeros.eq(at, &zero, &summation.get(k, n));
            // the high-branch formula continued past its range also vanishes
            if r >= 4 && k <= r - 3 {
                let cont = cgt_linear_part(r, k, n as i64) + cgt_convex_part(r, k, n as i64);
                zeros.eq(at, &zero, &cont);
            }
        }
    }
    out.push(zeros.finish());

    let mut special = Check::new("table.special_cases", r, "n=0, n=r, n=2r-3-k");
    for k in 1..r {
        let (ri, ki) = (r as i64, k as i64);
        special.eq(
            || format!("k={k} n=0"),
            &crate::algebra::rat(ki),
            &cgt_closed(r, k, 0),
        );
        special.eq(
            || format!("k={k} n=2r-3-k"),
            &crate::algebra::binom_rat(ri - 2, ki - 1),
            &cgt_closed(r, k, 2 * r - 3 - k),
        );
        if r >= 4 && k <= r - 3 {
            let want = crate::algebra::binom_rat(ri, ki + 1)
                * crate::algebra::ratio((ri - ki - 2) * ki - 2, ki + 2)
                + crate::algebra::rat(ri - ki);
            special.eq(|| format!("k={k} n=r"), &want, &cgt_closed(r, k, r));
        }
    }
    out.push(special.finish());

    let mut applicability = Check::new("table.high_branch_applicability", r, "1<=k<=r-1");
    for k in 1..r {
        let nonempty = (0..=2 * r).any(|n| cgt_branch(r, k, n) == CgtBranch::High);
        applicability.eq(
            || format!("k={k}"),
            &(r >= 4 && k + 3 <= r),
            &nonempty,
        );
    }
    out.push(applicability.finish());

    out
}

/// Every check for one shape `r`.
pub fn verify_r(r: u32) -> Vec<IdentityReport> {
    let mut out = check_tables(r);
    out.push(check_coefficient_form(r));
    out.push(oracle::check_expansion_forms(r));
    out.push(oracle::check_c_g_positivity(r));
    out.extend(oracle::check_summation_structure(r));
    out.push(sums::check_gamma_sums(r));

    for k in 1..r {
        let (ri, ki) = (r as i64, k as i64);
        let low: Vec<u32> = (0..=(ri - 1 - ki)).map(|n| n as u32).collect();
        let middle: Vec<u32> = ((ri - ki)..=(ri - 1).min(2 * ri - 3 - ki)).map(|n| n as u32).collect();
        let high: Vec<u32> = ((ri + 1)..=(2 * ri - 3 - ki)).map(|n| n as u32).collect();
        push_range(&mut out, "branch.low", r, k, &low, check_low_branch_sums);
        push_range(&mut out, "branch.middle", r, k, &middle, check_middle_branch_sums);
        push_range(&mut out, "branch.high", r, k, &high, check_high_branch_sums);
        out.push(check_high_branch_at_r(r, k));
        out.push(check_positivity_argument(r, k));
    }
    out
}

fn push_range(
    out: &mut Vec<IdentityReport>,
    id: &'static str,
    r: u32,
    k: u32,
    ns: &[u32],
    f: fn(u32, u32, u32) -> IdentityReport,
) {
    if ns.is_empty() {
        out.push(Check::new(id, r, "empty n-range").k(k).finish());
    } else {
        out.extend(ns.iter().map(|&n| f(r, k, n)));
    }
}

/// Run every check for `2 <= r <= r_max`. Failures are collected, never
/// short-circuited; each `r` is an independent unit of work.
pub fn verify_all(r_max: u32) -> Result<Vec<IdentityReport>, VerifyError> {
    if r_max < 2 {
        return Err(VerifyError::RMaxTooSmall(r_max));
    }
    if r_max > R_MAX_LIMIT {
        return Err(VerifyError::ShapeOutOfRange(r_max));
    }
    let per_r: Vec<Vec<IdentityReport>> = (2..=r_max).into_par_iter().map(verify_r).collect();
    Ok(per_r.into_iter().flatten().collect())
}

/// Closed-form-only positivity and difference argument up to `r_max`, which
/// is cheap enough to run well past the brute-force range.
pub fn closed_form_scan(r_max: u32) -> Vec<IdentityReport> {
    let per_r: Vec<Vec<IdentityReport>> = (2..=r_max)
        .into_par_iter()
        .map(|r| {
            let mut c = Check::new("closed.positivity_scan", r, "1<=k<=r-1, 0<=n<=2r-3-k");
            for k in 1..r {
                for n in 0..=2 * r - 3 - k {
                    let v = cgt_closed(r, k, n);
                    c.holds(|| format!("k={k} n={n} value={v}"), "c̃_g > 0", v > BigRat::from_integer(0.into()));
                    c.holds(|| format!("k={k} n={n} value={v}"), "integer", is_integral(&v));
                }
            }
            let mut out = vec![c.finish()];
            out.extend((1..r).map(|k| check_positivity_argument(r, k)));
            out
        })
        .collect();
    per_r.into_iter().flatten().collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifySummary {
    pub total: usize,
    pub passed: usize,
    pub vacuous: usize,
    pub failed: usize,
    pub checks: usize,
}

pub fn summarize(reports: &[IdentityReport]) -> VerifySummary {
    let mut s = VerifySummary {
        total: reports.len(),
        passed: 0,
        vacuous: 0,
        failed: 0,
        checks: 0,
    };
    for rep in reports {
        s.checks += rep.checked;
        match rep.status {
            Status::Pass => s.passed += 1,
            Status::VacuousPass => s.vacuous += 1,
            Status::Fail => s.failed += 1,
        }
    }
    s
}
