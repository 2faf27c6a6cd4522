//! Double description method over the integers.
//!
//! Computes the extreme rays of a pointed cone `{y : A y >= 0}` together
//! with the set of constraints tight at each ray. Everything above this
//! (facets of V-polytopes, vertices of polyhedra, upper hulls) is phrased
//! as one such cone.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg;
use crate::rational::{normalize_integer_vector, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet(Vec<u64>);

impl BitSet {
    pub fn new(bits: usize) -> Self {
        BitSet(vec![0; bits.div_ceil(64)])
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[cfg(test)]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| w * 64 + b)
        })
    }
}

#[derive(Clone, Debug)]
pub struct Ray {
    pub v: Vec<BigInt>,
    /// Indices of constraint rows with `a · v = 0`.
    pub tight: BitSet,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Extreme rays of `{y : rows · y >= 0}`.
///
/// The row matrix must have full column rank (pointed cone); callers
/// guarantee this by reducing to the affine hull first.
pub fn extreme_rays(rows: &[Vec<BigInt>]) -> Vec<Ray> {
    let m = rows.len();
    let d = rows.first().map_or(0, Vec::len);
    assert!(d > 0, "empty constraint system");

    // Pick d independent rows for the initial simplicial cone.
    let as_rat: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let mut basis: Vec<usize> = Vec::with_capacity(d);
    let mut acc: Vec<Vec<Rational>> = Vec::new();
    for (i, r) in as_rat.iter().enumerate() {
        acc.push(r.clone());
        if linalg::rank(&acc) == acc.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        } else {
            acc.pop();
        }
    }
    assert_eq!(basis.len(), d, "constraint matrix is not of full column rank");

    // Columns of the inverse of the basis matrix are the initial rays.
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let mut e = vec![Rational::zero(); d];
            e[j] = Rational::from_integer(1.into());
            let a0: Vec<Vec<Rational>> = basis.iter().map(|&i| as_rat[i].clone()).collect();
            let col = linalg::solve(&a0, &e).expect("basis rows are independent");
            let v = crate::rational::primitive_integer_vector(&col);
            let mut tight = BitSet::new(m);
            for (k, &i) in basis.iter().enumerate() {
                if k != j {
                    tight.insert(i);
                }
            }
            Ray { v, tight }
        })
        .collect();

    let mut in_basis = vec![false; m];
    for &i in &basis {
        in_basis[i] = true;
    }

    for (i, row) in rows.iter().enumerate() {
        if in_basis[i] {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| values[k].is_negative()).collect();
        if neg.is_empty() {
            for (k, r) in rays.iter_mut().enumerate() {
                if values[k].is_zero() {
                    r.tight.insert(i);
                }
            }
            continue;
        }

        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.intersection(&rays[q].tight);
                if common.len() + 2 < d {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != p && k != q && common.is_subset(&r.tight));
                if blocked {
                    continue;
                }
                let vp = &values[p];
                let vq = -&values[q];
                let mut v: Vec<BigInt> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(a, b)| vp * a + &vq * b)
                    .collect();
                normalize_integer_vector(&mut v);
                let mut tight = common;
                tight.insert(i);
                fresh.push(Ray { v, tight });
            }
        }

        let mut kept = Vec::with_capacity(pos.len() + fresh.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if values[k].is_zero() {
                r.tight.insert(i);
                kept.push(r);
            } else if values[k].is_positive() {
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }
    rays
}
