//! Positivity of the high branch via differences.
//!
//! Write `c̃ = c_a + c_b` with `c_a` the linear part and `c_b` the convex part.
//! `c_a` drops by exactly `binom(r, k+1)` per step; the first difference of
//! `c_b` grows while its second difference is positive and reaches
//! `binom(r, k+1)` at `n = 2r-k-2`. So `c̃` is non-increasing on the high branch
//! and ends at `binom(r-2, k-1) > 0`.

use num_traits::{Signed, Zero};

use super::{cgt_closed, cgt_convex_part, cgt_linear_part, Check, IdentityReport};
use crate::algebra::{binom_rat, ratio, BigRat};

fn second_difference_closed(r: i64, k: i64, n: i64) -> BigRat {
    binom_rat(k + n - r + 1, k) * ratio((2 * r - n - k - 2) * k, n - r + 2)
}

pub fn check_positivity_argument(r: u32, k: u32) -> IdentityReport {
    let mut c = Check::new("high_branch.positivity_argument", r, "r>=4, 1<=k<=r-3, r-1<=n<=2r").k(k);
    let (ri, ki) = (r as i64, k as i64);
    if ri < 4 || ki < 1 || ki > ri - 3 {
        return c.finish();
    }
    let cb = |n: i64| cgt_convex_part(r, k, n);
    let ca = |n: i64| cgt_linear_part(r, k, n);
    let peak = 2 * ri - ki - 2;
    let step = binom_rat(ri, ki + 1);

    for n in ri..=2 * ri - 2 {
        let d2 = cb(n + 2) - cb(n + 1) * ratio(2, 1) + cb(n);
        c.eq(|| format!("second difference n={n}"), &second_difference_closed(ri, ki, n), &d2);
        let (claim, ok) = match n.cmp(&peak) {
            std::cmp::Ordering::Less => ("second difference > 0", d2.is_positive()),
            std::cmp::Ordering::Equal => ("second difference = 0", d2.is_zero()),
            std::cmp::Ordering::Greater => ("second difference < 0", d2.is_negative()),
        };
        c.holds(|| format!("n={n} d2={d2}"), claim, ok);
    }

    for n in ri - 1..=2 * ri {
        c.eq(|| format!("linear slope n={n}"), &(-step.clone()), &(ca(n + 1) - ca(n)));
    }

    // largest first difference of c_b up to the peak sits at the peak
    let diffs: Vec<BigRat> = (ri - 1..=peak).map(|n| cb(n + 1) - cb(n)).collect();
    c.eq(|| format!("first difference at n={peak}"), &step, diffs.last().unwrap());
    c.holds(
        || "first differences up to the peak".into(),
        "strictly increasing",
        diffs.windows(2).all(|w| w[0] < w[1]),
    );

    for n in ri..=2 * ri - 3 - ki {
        let v = cb(n);
        c.holds(|| format!("c_b n={n} value={v}"), "c_b > 0", v.is_positive());
        let total = ca(n) + cb(n);
        c.eq(|| format!("decomposition n={n}"), &cgt_closed(r, k, n as u32), &total);
        c.holds(|| format!("c̃ n={n} value={total}"), "c̃ > 0", total.is_positive());
        if n < 2 * ri - 3 - ki {
            let next = cgt_closed(r, k, n as u32 + 1);
            c.holds(|| format!("n={n}"), "c̃ non-increasing on the high branch", next <= total);
        }
    }
    c.eq(
        || "end value".into(),
        &binom_rat(ri - 2, ki - 1),
        &cgt_closed(r, k, (2 * ri - 3 - ki) as u32),
    );

    for i in 0..=2 {
        let n = 2 * ri - i - ki;
        c.eq(|| format!("continued formula at n={n}"), &BigRat::zero(), &(ca(n) + cb(n)));
    }
    c.finish()
}
