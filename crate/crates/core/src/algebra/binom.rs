use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AlgebraError, BigRat};

/// Binomial coefficient with the conventions used by the coefficient proofs.
///
/// * `k < 0` gives 0 for every `n`.
/// * `0 <= n < k` gives 0.
/// * `n = -1` gives `(-1)^k`, and `n = -2` gives `(-1)^k (k+1)`, which are
///   the only negative upper indices the summation forms ever touch.
///
/// Any other negative upper index is rejected.
pub fn checked_binom(n: i64, k: i64) -> Result<BigInt, AlgebraError> {
    if k < 0 {
        return Ok(BigInt::zero());
    }
    match n {
        -1 => Ok(alternate(k, BigInt::one())),
        -2 => Ok(alternate(k, BigInt::from(k + 1))),
        n if n < 0 => Err(AlgebraError::UnsupportedBinomial { n, k }),
        n if k > n => Ok(BigInt::zero()),
        n => {
            let k = k.min(n - k);
            let mut acc = BigInt::one();
            // acc stays integral: after step i it equals C(n, i+1).
            for i in 0..k {
                acc *= n - i;
                acc /= i + 1;
            }
            Ok(acc)
        }
    }
}

fn alternate(k: i64, v: BigInt) -> BigInt {
    if k % 2 == 0 {
        v
    } else {
        -v
    }
}

/// [`checked_binom`] for callers that stay inside the supported table.
///
/// # Panics
/// On a negative upper index other than -1 or -2.
pub fn binom(n: i64, k: i64) -> BigInt {
    checked_binom(n, k).unwrap_or_else(|e| panic!("{e}"))
}

pub fn binom_rat(n: i64, k: i64) -> BigRat {
    BigRat::from_integer(binom(n, k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64, k: i64) -> i64 {
        i64::try_from(binom(n, k)).unwrap()
    }

    #[test]
    fn small_values() {
        assert_eq!(b(5, 2), 10);
        assert_eq!(b(0, 0), 1);
        assert_eq!(b(3, 4), 0);
        assert_eq!(b(3, -1), 0);
        assert_eq!(b(30, 15), 155_117_520);
    }

    #[test]
    fn negative_upper_index_table() {
        // binom(-1, n) = (-1)^n
        assert_eq!(b(-1, 3), -1);
        assert_eq!(b(-1, 4), 1);
        // binom(-2, n-1) = (-1)^(n-1) n, here n = 3
        assert_eq!(b(-2, 2), 3);
        assert_eq!(b(-2, 3), -4);
        assert_eq!(b(-2, -1), 0);
    }

    #[test]
    fn unsupported_negative_index_is_rejected() {
        assert_eq!(
            checked_binom(-3, 2),
            Err(AlgebraError::UnsupportedBinomial { n: -3, k: 2 })
        );
        // k < 0 is zero regardless of the upper index
        assert_eq!(checked_binom(-7, -1), Ok(BigInt::zero()));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..40 {
            for k in 0..=n {
                assert_eq!(binom(n, k), binom(n - 1, k - 1) + binom(n - 1, k));
            }
        }
    }

    #[test]
    fn pascal_rule_reaches_negative_table() {
        // The generalized values satisfy the same recurrence where it links
        // the m ∈ {0, 1} rows used in the proofs: C(m-1, n) = C(m-2, n) + C(m-2, n-1).
        for n in 0..12 {
            assert_eq!(binom(-1, n), binom(-2, n) + binom(-2, n - 1));
            assert_eq!(binom(0, n), binom(-1, n) + binom(-1, n - 1));
        }
    }
}
