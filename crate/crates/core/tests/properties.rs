use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use gwbound::algebra::ratio;
use gwbound::pgf::{iterate_fl, iterate_fl_sequential, phi_fl, phi_nb, Params};
use gwbound::verify::{cgt_closed, cgt_summation};

fn exact_params() -> impl Strategy<Value = Params<BigRational>> {
    (2u32..=10, 2i64..=40)
        .prop_flat_map(|(r, den)| (Just(r), 1..den, Just(den)))
        .prop_map(|(r, num, den)| Params::exact(r, num, den).unwrap())
}

fn unit_rational() -> impl Strategy<Value = BigRational> {
    (1i64..=1000).prop_flat_map(|den| (0..=den).prop_map(move |num| ratio(num, den)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bound_holds_exactly(p in exact_params(), x in unit_rational()) {
        let gap = phi_nb(&p, &x).unwrap() - phi_fl(&p, &x).unwrap();
        let at_equality = x == p.p_inf() || x.is_one();
        prop_assert!(gap >= BigRational::zero());
        prop_assert_eq!(gap.is_zero(), at_equality);
    }

    #[test]
    fn both_pgfs_fix_the_extinction_probability(p in exact_params()) {
        let q = p.p_inf();
        prop_assert_eq!(phi_nb(&p, &q).unwrap(), q.clone());
        prop_assert_eq!(phi_fl(&p, &q).unwrap(), q);
    }

    #[test]
    fn matrix_power_is_composition(p in exact_params(), n in 0u64..12, x in unit_rational()) {
        prop_assert_eq!(iterate_fl(&p, n, &x).unwrap(), iterate_fl_sequential(&p, n, &x).unwrap());
    }

    #[test]
    fn closed_form_equals_summation(r in 2u32..=40, k in 0u32..=41, n in 0u32..=82) {
        prop_assert_eq!(cgt_closed(r, k, n), cgt_summation(r, k, n));
    }
}
