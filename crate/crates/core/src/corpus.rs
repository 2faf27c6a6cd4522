//! Seeded random inputs for the check suites and property tests.
//!
//! Every case draws from its own ChaCha stream, indexed by the case number,
//! so a case can be reproduced alone and suites can run cases in parallel.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{make_max, ExponentVector, TropicalExpr, TropicalTerm};
use crate::geometry::{convex_hull, RationalPolytope};
use crate::rational::{rat, Rational};

/// Generator for case `index` of the family `tag` under `seed`.
pub fn case_rng(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(index);
    rng
}

/// `p/q` with `p` in `1..=9` and `q` in `1..=4`.
pub fn positive_rational(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(1..=9), rng.gen_range(1..=4))
}

pub fn positive_vector(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| positive_rational(rng)).collect()
}

const SLOPES: [(i64, i64); 6] = [(0, 1), (1, 2), (1, 1), (3, 2), (2, 1), (3, 1)];

fn slope(rng: &mut impl Rng) -> Rational {
    let (p, q) = *SLOPES.choose(rng).expect("non-empty");
    rat(p, q)
}

/// Convenient with all constants zero: `max_i(a_i x_i)` plus up to two
/// extra monomials. Such functions are homogeneous, so their whole
/// Monge-Ampère mass sits at the origin.
pub fn convenient_homogeneous(rng: &mut impl Rng, n: usize) -> TropicalExpr {
    let mut parts = vec![TropicalExpr::max_of_monomials(&positive_vector(rng, n)).expect("positive")];
    for _ in 0..rng.gen_range(0..=2) {
        let a: Vec<Rational> = (0..n).map(|_| slope(rng)).collect();
        if a.iter().all(Zero::is_zero) {
            continue;
        }
        let term = TropicalTerm::new(ExponentVector::new(a).expect("non-negative"), Rational::zero());
        parts.push(TropicalExpr::new(n, vec![term]).expect("valid"));
    }
    make_max(&parts).expect("same dimension")
}

/// Two to six terms with slopes in `{0, 1/2, 1, 3/2, 2, 3}` and constants in
/// `{0, -1/2, -1, -2, -3}`, canonicalized. Constants are non-positive so the
/// function is at most zero near the distinguished boundary.
pub fn canonical_expr(rng: &mut impl Rng, n: usize) -> TropicalExpr {
    const CONSTANTS: [(i64, i64); 5] = [(0, 1), (-1, 2), (-1, 1), (-2, 1), (-3, 1)];
    let count = rng.gen_range(2..=6);
    let terms = (0..count)
        .map(|_| {
            let a: Vec<Rational> = (0..n).map(|_| slope(rng)).collect();
            let (p, q) = *CONSTANTS.choose(rng).expect("non-empty");
            TropicalTerm::new(ExponentVector::new(a).expect("non-negative"), rat(p, q))
        })
        .collect();
    make_max(&[TropicalExpr::new(n, terms).expect("valid")]).expect("valid")
}

/// Hull of four to eight points with coordinates in `{0, 1/2, ..., 4}`.
pub fn polytope(rng: &mut impl Rng, n: usize) -> RationalPolytope {
    let count = rng.gen_range(4..=8);
    let pts: Vec<Vec<Rational>> = (0..count)
        .map(|_| (0..n).map(|_| rat(rng.gen_range(0..=8), 2)).collect())
        .collect();
    convex_hull(&pts).expect("non-empty")
}

/// Four to nine integer points in `[0, 4]^n` with heights in `[-3, 3]`.
pub fn lifted_points(rng: &mut impl Rng, n: usize) -> Vec<(Vec<Rational>, Rational)> {
    let count = rng.gen_range(4..=9);
    let mut out: Vec<(Vec<Rational>, Rational)> = Vec::new();
    while out.len() < count {
        let a: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(0..=4), 1)).collect();
        if out.iter().any(|(b, _)| *b == a) {
            continue;
        }
        out.push((a, rat(rng.gen_range(-3..=3), 1)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = canonical_expr(&mut case_rng(7, 1, 3), 3);
        let b = canonical_expr(&mut case_rng(7, 1, 3), 3);
        assert_eq!(a, b);
        let c: Vec<TropicalExpr> = (0..8).map(|i| canonical_expr(&mut case_rng(7, 1, i), 3)).collect();
        assert!(c.iter().any(|e| *e != a));
    }

    #[test]
    fn generated_inputs_satisfy_their_contracts() {
        for i in 0..20 {
            let e = convenient_homogeneous(&mut case_rng(1, 2, i), 2);
            assert!(e.newton_diagram().is_convenient());
            assert!(e.terms().iter().all(|t| t.constant == Rational::zero()));
            let e = canonical_expr(&mut case_rng(1, 3, i), 3);
            assert!(e.is_canonical());
            assert!(e.max_constant() <= Rational::zero());
        }
    }
}
