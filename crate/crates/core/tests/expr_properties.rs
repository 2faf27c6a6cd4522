mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropma_core::dsl;
use tropma_core::expr::{canonicalize, make_sum, recession};
use tropma_core::rational::{int, rat};
use tropma_core::Rational;

fn grid(n: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..100)
        .map(|_| (0..n).map(|_| rat(-rng.gen_range(1..100), 100)).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonicalize_is_idempotent_and_preserves_values(e in common::expr_any_n(), seed in any::<u64>()) {
        let c = canonicalize(&e);
        prop_assert_eq!(&canonicalize(&c), &c);
        prop_assert!(c.is_canonical());
        for x in grid(e.n(), seed) {
            prop_assert_eq!(c.eval_finite(&x), e.eval_finite(&x));
        }
    }

    #[test]
    fn make_sum_is_commutative_and_associative(
        (a, b, c) in (2usize..=3).prop_flat_map(|n| (common::expr(n), common::expr(n), common::expr(n))),
    ) {
        let one = [int(1), int(1)];
        let ab = make_sum(&[a.clone(), b.clone()], &one).unwrap();
        let ba = make_sum(&[b.clone(), a.clone()], &one).unwrap();
        prop_assert_eq!(&ab, &ba);
        let left = make_sum(&[ab, c.clone()], &one).unwrap();
        let right = make_sum(&[a.clone(), make_sum(&[b, c], &one).unwrap()], &one).unwrap();
        prop_assert_eq!(&left, &right);
        let flat = make_sum(&[a.clone(), a.clone()], &one).unwrap();
        prop_assert_eq!(flat, make_sum(&[a], &[int(2)]).unwrap());
    }

    #[test]
    fn eval_is_monotone_and_midpoint_convex(
        (e, x, f, y) in (2usize..=3).prop_flat_map(|n| (
            common::expr(n),
            common::negative_point(n),
            prop::collection::vec((1i64..=4).prop_map(|d| rat(d, 4)), n),
            common::negative_point(n),
        )),
    ) {
        // x_i * f_i with f_i in (0, 1] is componentwise above x.
        let above: Vec<Rational> = x.iter().zip(&f).map(|(a, b)| a * b).collect();
        prop_assert!(e.eval_finite(&x) <= e.eval_finite(&above));
        let mid: Vec<Rational> = x.iter().zip(&y).map(|(a, b)| (a + b) / int(2)).collect();
        prop_assert!(int(2) * e.eval_finite(&mid) <= e.eval_finite(&x) + e.eval_finite(&y));
    }

    #[test]
    fn recession_commutes_with_sum(
        (a, b) in (2usize..=3).prop_flat_map(|n| (common::expr(n), common::expr(n))),
    ) {
        let one = [int(1), int(1)];
        let lhs = canonicalize(&recession(&make_sum(&[a.clone(), b.clone()], &one).unwrap()));
        let rhs = canonicalize(&make_sum(&[recession(&a), recession(&b)], &one).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn dsl_round_trip(e in common::expr_any_n()) {
        let text = dsl::to_dsl(&e);
        let back = dsl::parse(&text, Some(e.n())).unwrap();
        prop_assert_eq!(&back, &e);
        prop_assert_eq!(dsl::to_dsl(&back), text);
        let json = serde_json::to_string(&e).unwrap();
        prop_assert_eq!(serde_json::from_str::<tropma_core::TropicalExpr>(&json).unwrap(), e);
    }
}
