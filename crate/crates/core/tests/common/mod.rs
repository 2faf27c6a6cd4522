#![allow(dead_code)]

use proptest::prelude::*;
use tropma_core::expr::make_max;
use tropma_core::rational::{int, rat};
use tropma_core::{ExponentVector, Rational, TropicalExpr, TropicalTerm};

/// Half-integer exponents in `[0, 3]`, constants in `[-3, 0]`.
pub fn expr(n: usize) -> impl Strategy<Value = TropicalExpr> {
    prop::collection::vec((prop::collection::vec(0i64..=6, n), -6i64..=0), 1..6).prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .map(|(a, c)| {
                let a = a.into_iter().map(|v| rat(v, 2)).collect();
                TropicalTerm::new(ExponentVector::new(a).unwrap(), rat(c, 2))
            })
            .collect();
        make_max(&[TropicalExpr::new(n, terms).unwrap()]).unwrap()
    })
}

pub fn expr_any_n() -> impl Strategy<Value = TropicalExpr> {
    (2usize..=3).prop_flat_map(expr)
}

pub fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..=9, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

/// `max_i(a_i x_i)` plus extra homogeneous monomials: convenient, constants zero.
pub fn convenient(n: usize) -> impl Strategy<Value = TropicalExpr> {
    (
        prop::collection::vec(positive_rational(), n),
        prop::collection::vec(prop::collection::vec(0i64..=6, n), 0..3),
    )
        .prop_map(move |(axes, extra)| {
            let mut parts = vec![TropicalExpr::max_of_monomials(&axes).unwrap()];
            for a in extra.into_iter().filter(|a| a.iter().any(|&v| v > 0)) {
                let a = a.into_iter().map(|v| rat(v, 2)).collect();
                let t = TropicalTerm::new(ExponentVector::new(a).unwrap(), int(0));
                parts.push(TropicalExpr::new(n, vec![t]).unwrap());
            }
            make_max(&parts).unwrap()
        })
}

/// Points of `(-3, 0)^n` with denominators up to 4.
pub fn negative_point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((1i64..=12, 1i64..=4).prop_map(|(p, q)| rat(-p, q)), n)
}

pub fn point_cloud(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec((0i64..=8).prop_map(|v| rat(v, 2)), n), 4..8)
}
