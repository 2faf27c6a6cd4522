//! Small exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Reduced row echelon form. Returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Affine hull of a point set: base point, the pivot coordinates (the
/// projection onto these coordinates is injective on the hull), and the
/// affine dimension.
#[derive(Clone, Debug)]
pub struct AffineHull {
    pub base: Vec<Rational>,
    pub pivots: Vec<usize>,
    /// Basis of the direction space, in reduced echelon form.
    pub directions: Vec<Vec<Rational>>,
}

impl AffineHull {
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates of `p` restricted to the pivot set.
    pub fn project(&self, p: &[Rational]) -> Vec<Rational> {
        self.pivots.iter().map(|&i| p[i].clone()).collect()
    }

    /// Normals `h` with `<h, x> = <h, base>` on the hull; they span the
    /// orthogonal complement of the direction space.
    pub fn equalities(&self) -> Vec<(Vec<Rational>, Rational)> {
        let d = self.base.len();
        let free: Vec<usize> = (0..d).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut h = vec![Rational::zero(); d];
                h[f] = Rational::one();
                for (row, &p) in self.directions.iter().zip(&self.pivots) {
                    h[p] = -row[f].clone();
                }
                let beta = dot(&h, &self.base);
                (h, beta)
            })
            .collect()
    }
}

/// Affine hull of points together with extra direction vectors (rays).
pub fn affine_hull(points: &[Vec<Rational>], rays: &[Vec<Rational>]) -> AffineHull {
    let base = points[0].clone();
    let mut m: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
        .chain(rays.iter().cloned())
        .collect();
    let pivots = rref(&mut m);
    m.truncate(pivots.len());
    AffineHull {
        base,
        pivots,
        directions: m,
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn det(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut acc = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            acc = -acc;
        }
        let pivot = m[c][c].clone();
        acc *= &pivot;
        let pivot_row = m[c][c..].to_vec();
        for row in m.iter_mut().skip(c + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot;
                for (x, p) in row[c..].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    acc
}

/// Solves the square system `a x = b`, or `None` when singular.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn determinant_and_solve() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        assert_eq!(det(m.clone()), int(5));
        let x = solve(&m, &[int(3), int(4)]).unwrap();
        assert_eq!(x, vec![int(1), int(1)]);
        assert!(solve(&[vec![int(1), int(2)], vec![int(2), int(4)]], &[int(1), int(2)]).is_none());
    }

    #[test]
    fn affine_hull_of_collinear_points() {
        let pts = vec![
            vec![int(0), int(0), int(1)],
            vec![int(1), int(2), int(1)],
            vec![int(2), int(4), int(1)],
        ];
        let h = affine_hull(&pts, &[]);
        assert_eq!(h.dim(), 1);
        let eqs = h.equalities();
        assert_eq!(eqs.len(), 2);
        for p in &pts {
            for (n, b) in &eqs {
                assert_eq!(dot(n, p), *b);
            }
        }
        assert!(eqs
            .iter()
            .any(|(n, b)| dot(n, &[rat(1, 2), int(0), int(1)]) != *b));
    }
}
