mod common;

use proptest::prelude::*;
use tropma_core::expr::{make_max, make_sum};
use tropma_core::rational::{int, pow2};
use tropma_core::slice::{
    e_set_union, lelong_at_origin, slice_lelong_profile, toric_slice_invariant, ESet, PhiFunction, SliceValue,
};
use tropma_core::{Rational, TropicalExpr};

fn limit(e: &TropicalExpr, k: usize) -> Rational {
    PhiFunction::new(e, k).unwrap().limit_value()
}

fn three_var_pair() -> impl Strategy<Value = (TropicalExpr, TropicalExpr, usize)> {
    (common::expr(3), common::expr(3), 1usize..=2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_is_monotone_and_reaches_its_limit((e, _f, k) in three_var_pair(), x in common::negative_point(2)) {
        let phi = PhiFunction::new(&e, k).unwrap();
        let x = &x[..k];
        let ladder: Vec<Rational> = (0..=12).map(pow2).collect();
        let values: Vec<Rational> = ladder.iter().map(|s| phi.value(x, s)).collect();
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        let min_tail = e.terms().iter().map(|t| t.exponent.sum_over(k..3)).min().unwrap();
        prop_assert_eq!(phi.limit_at(x), -min_tail.clone());
        prop_assert_eq!(phi.limit_value(), -min_tail);
    }

    #[test]
    fn lelong_and_phi_limits_are_covariant((u, v, k) in three_var_pair(), w in common::positive_rational()) {
        let scaled = u.scale(&w).unwrap();
        prop_assert_eq!(lelong_at_origin(&scaled), &w * lelong_at_origin(&u));
        let sum = make_sum(&[u.clone(), v.clone()], &[int(1), int(1)]).unwrap();
        prop_assert_eq!(limit(&sum, k), limit(&u, k) + limit(&v, k));
        let mx = make_max(&[u.clone(), v.clone()]).unwrap();
        prop_assert_eq!(limit(&mx, k), limit(&u, k).max(limit(&v, k)));
    }

    #[test]
    fn e_set_is_the_union_of_exceptional_strata((e, _f, k) in three_var_pair()) {
        let profile = slice_lelong_profile(&e, k).unwrap();
        let set = e_set_union(&e, k).unwrap();
        if profile.generic > Rational::from_integer(0.into()) {
            prop_assert_eq!(set, ESet::All);
        } else {
            let ESet::Strata(strata) = set else { unreachable!() };
            let exceptional: Vec<&Vec<usize>> = profile
                .strata
                .iter()
                .filter(|(_, v)| *v != SliceValue::Finite(Rational::from_integer(0.into())))
                .map(|(s, _)| s)
                .collect();
            // Each listed stratum is exceptional and every exceptional one contains a listed one.
            prop_assert!(strata.iter().all(|s| exceptional.contains(&s)));
            prop_assert!(exceptional.iter().all(|s| strata.iter().any(|t| t.iter().all(|i| s.contains(i)))));
        }
    }

    #[test]
    fn toric_invariant_holds((e, _f, k) in three_var_pair()) {
        prop_assert!(toric_slice_invariant(&e, k).unwrap().holds);
    }
}
