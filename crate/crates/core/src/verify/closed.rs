//! Closed-form coefficients `c̃_g(r, k, n)` of `g̃(u) = Σ c̃_g u^k ζ^n`.

use num_traits::Zero;

use crate::algebra::{binom_rat, ratio, BigRat};

/// Which closed-form branch covers `(r, k, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgtBranch {
    /// `0 <= n <= r-1-k`
    Low,
    /// `r-k <= n <= r-1`
    Middle,
    /// `r <= n <= 2r-3-k`; nonempty only when `r >= 4` and `k <= r-3`
    High,
    /// Outside `1 <= k <= r-1`, `0 <= n <= 2r-3-k`; the coefficient is zero.
    Outside,
}

pub fn cgt_branch(r: u32, k: u32, n: u32) -> CgtBranch {
    let (r, k, n) = (r as i64, k as i64, n as i64);
    if k < 1 || k > r - 1 || n > 2 * r - 3 - k {
        CgtBranch::Outside
    } else if n <= r - 1 - k {
        CgtBranch::Low
    } else if n < r {
        CgtBranch::Middle
    } else {
        CgtBranch::High
    }
}

/// Linear part `binom(r, k+1) ((2r-k)(k+1) - (n+1)(k+2)) / (k+2)`, shared by
/// the middle and high branches. Defined for every integer `n`.
pub fn cgt_linear_part(r: u32, k: u32, n: i64) -> BigRat {
    let (r, k) = (r as i64, k as i64);
    binom_rat(r, k + 1) * ratio((2 * r - k) * (k + 1) - (n + 1) * (k + 2), k + 2)
}

/// Convex part `binom(k+(n-r)+1, k+1) ((2r-k)(k+1) - (n+1)k) / (k+2)` of the
/// high branch. Only meaningful for `n >= r - 1`.
pub fn cgt_convex_part(r: u32, k: u32, n: i64) -> BigRat {
    let (r, k) = (r as i64, k as i64);
    debug_assert!(n >= r - 1, "convex part needs n >= r-1");
    binom_rat(k + (n - r) + 1, k + 1) * ratio((2 * r - k) * (k + 1) - (n + 1) * k, k + 2)
}

/// `c̃_g(r, k, n)`; zero outside the index range.
pub fn cgt_closed(r: u32, k: u32, n: u32) -> BigRat {
    match cgt_branch(r, k, n) {
        CgtBranch::Outside => BigRat::zero(),
        CgtBranch::Low => {
            let (k, n) = (k as i64, n as i64);
            binom_rat(n + k + 2, k + 2) * ratio(k, 1)
        }
        CgtBranch::Middle => cgt_linear_part(r, k, n as i64),
        CgtBranch::High => cgt_linear_part(r, k, n as i64) + cgt_convex_part(r, k, n as i64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{binom_rat, rat};

    #[test]
    fn small_examples() {
        assert_eq!(cgt_closed(2, 1, 0), rat(1));
        assert_eq!(cgt_closed(4, 1, 0), rat(1));
        assert_eq!(cgt_closed(2, 1, 1), rat(0));
        assert_eq!(cgt_closed(5, 0, 0), rat(0));
        assert_eq!(cgt_closed(5, 5, 0), rat(0));
    }

    #[test]
    fn special_cases() {
        for r in 2..=25u32 {
            for k in 1..r {
                let top = 2 * r - 3 - k;
                assert_eq!(
                    cgt_closed(r, k, top),
                    binom_rat(r as i64 - 2, k as i64 - 1),
                    "r={r} k={k}"
                );
                assert_eq!(cgt_closed(r, k, 0), rat(k as i64));
                if r >= 4 && k <= r - 3 {
                    let (ri, ki) = (r as i64, k as i64);
                    let want = binom_rat(ri, ki + 1) * ratio((ri - ki - 2) * ki - 2, ki + 2)
                        + rat(ri - ki);
                    assert_eq!(cgt_closed(r, k, r), want);
                }
            }
        }
    }

    #[test]
    fn branch_boundaries() {
        assert_eq!(cgt_branch(6, 2, 3), CgtBranch::Low);
        assert_eq!(cgt_branch(6, 2, 4), CgtBranch::Middle);
        assert_eq!(cgt_branch(6, 2, 5), CgtBranch::Middle);
        assert_eq!(cgt_branch(6, 2, 6), CgtBranch::High);
        assert_eq!(cgt_branch(6, 2, 7), CgtBranch::High);
        assert_eq!(cgt_branch(6, 2, 8), CgtBranch::Outside);
        // k = r-1 never reaches the high branch
        for r in 2..20 {
            for n in 0..2 * r {
                assert_ne!(cgt_branch(r, r - 1, n), CgtBranch::High);
                assert_ne!(cgt_branch(r, r - 2, n), CgtBranch::High);
            }
        }
    }
}
