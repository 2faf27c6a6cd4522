//! Regular subdivisions induced by lifting points to heights and taking
//! the upper faces of the lifted hull.
//!
//! A full-dimensional cell comes with its dual vertex `w`: the heights
//! satisfy `h_t + <w, a_t> <= level` for every point, with equality exactly
//! on the cell. For a max-plus expression `max_t (h_t + <a_t, x>)` this `w`
//! is the point where all terms of the cell tie.

use num_traits::{Signed, Zero};

use super::linalg;
use super::polytope::{self, convex_hull, RationalPolytope};
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct Cell {
    /// Indices into the lifted point list lying on this upper face.
    pub indices: Vec<usize>,
    pub polytope: RationalPolytope,
    /// Tie point and tie value, present for full-dimensional cells.
    pub dual_vertex: Option<(Vec<Rational>, Rational)>,
}

impl Cell {
    pub fn is_full_dimensional(&self) -> bool {
        self.dual_vertex.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct RegularSubdivision {
    pub lifted_points: Vec<(Vec<Rational>, Rational)>,
    pub cells: Vec<Cell>,
}

impl RegularSubdivision {
    pub fn full_dimensional_cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.is_full_dimensional())
    }
}

pub fn regular_subdivision(lifted: &[(Vec<Rational>, Rational)]) -> RegularSubdivision {
    let mut out = RegularSubdivision {
        lifted_points: lifted.to_vec(),
        cells: Vec::new(),
    };
    let Some((first, _)) = lifted.first() else {
        return out;
    };
    let n = first.len();
    let points: Vec<Vec<Rational>> = lifted.iter().map(|(a, _)| a.clone()).collect();
    let hull = linalg::affine_hull(&points, &[]);
    let r = hull.dim();

    let make_cell = |indices: Vec<usize>, dual: Option<(Vec<Rational>, Rational)>| {
        let pts: Vec<Vec<Rational>> = indices.iter().map(|&i| points[i].clone()).collect();
        Cell {
            polytope: convex_hull(&pts).expect("cell is non-empty"),
            indices,
            dual_vertex: dual,
        }
    };

    if r == 0 {
        // All points coincide: the cell is that single point.
        let top = lifted.iter().map(|(_, h)| h).max().expect("non-empty");
        let indices = (0..lifted.len()).filter(|&i| &lifted[i].1 == top).collect();
        let dual = (n == 0).then(|| (Vec::new(), top.clone()));
        out.cells.push(make_cell(indices, dual));
        return out;
    }

    // Work in pivot coordinates, where the projected points are full-dimensional.
    let lifted_proj: Vec<Vec<Rational>> = lifted
        .iter()
        .map(|(a, h)| {
            let mut p = hull.project(a);
            p.push(h.clone());
            p
        })
        .collect();
    let full = r == n;

    if linalg::affine_hull(&lifted_proj, &[]).dim() == r {
        // Heights are affine on the hull: one cell, h = level - <w, a>.
        let dual = full.then(|| affine_fit(&points, lifted));
        out.cells.push(make_cell((0..lifted.len()).collect(), dual));
        return out;
    }

    for facet in polytope::facets_full_dim(&lifted_proj, &[]) {
        let hc = &facet.normal[r];
        if !hc.is_positive() {
            continue;
        }
        let dual = full.then(|| {
            let w: Vec<Rational> = facet.normal[..r].iter().map(|x| x / hc).collect();
            (w, &facet.offset / hc)
        });
        out.cells.push(make_cell(facet.points, dual));
    }
    out
}

/// Solves `h_t = level - <w, a_t>` for full-dimensional `a` and returns `(w, level)`.
fn affine_fit(points: &[Vec<Rational>], lifted: &[(Vec<Rational>, Rational)]) -> (Vec<Rational>, Rational) {
    let n = points[0].len();
    // Choose n+1 affinely independent points.
    let mut chosen: Vec<usize> = vec![0];
    for i in 1..points.len() {
        let trial: Vec<Vec<Rational>> = chosen
            .iter()
            .chain(std::iter::once(&i))
            .map(|&k| points[k].clone())
            .collect();
        if linalg::affine_hull(&trial, &[]).dim() == chosen.len() {
            chosen.push(i);
            if chosen.len() == n + 1 {
                break;
            }
        }
    }
    // Unknowns (w, level): -<w, a_t> + level = h_t.
    let a: Vec<Vec<Rational>> = chosen
        .iter()
        .map(|&k| {
            let mut row: Vec<Rational> = points[k].iter().map(|x| -x.clone()).collect();
            row.push(Rational::from_integer(1.into()));
            row
        })
        .collect();
    let b: Vec<Rational> = chosen.iter().map(|&k| lifted[k].1.clone()).collect();
    let mut sol = linalg::solve(&a, &b).expect("affinely independent points");
    let level = sol.pop().unwrap_or_else(Rational::zero);
    (sol, level)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn lift(v: &[(&[i64], Rational)]) -> Vec<(Vec<Rational>, Rational)> {
        v.iter()
            .map(|(a, h)| (a.iter().map(|&x| int(x)).collect(), h.clone()))
            .collect()
    }

    #[test]
    fn single_cell_dual_to_one_vertex() {
        let s = regular_subdivision(&lift(&[(&[1, 0], int(0)), (&[0, 1], int(0)), (&[0, 0], int(-1))]));
        let cells: Vec<_> = s.full_dimensional_cells().collect();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].polytope.volume(), rat(1, 2));
        let (w, level) = cells[0].dual_vertex.clone().unwrap();
        assert_eq!(w, vec![int(-1), int(-1)]);
        assert_eq!(level, int(-1));
    }

    #[test]
    fn equal_heights_give_no_subdivision() {
        let s = regular_subdivision(&lift(&[
            (&[0, 0], int(2)),
            (&[1, 0], int(2)),
            (&[0, 1], int(2)),
            (&[1, 1], int(2)),
        ]));
        assert_eq!(s.cells.len(), 1);
        assert_eq!(s.cells[0].indices.len(), 4);
        assert_eq!(s.cells[0].dual_vertex.clone().unwrap().0, vec![int(0), int(0)]);
    }

    #[test]
    fn two_points_have_no_full_dimensional_cell() {
        let s = regular_subdivision(&lift(&[(&[1, 0], int(0)), (&[0, 1], int(0))]));
        assert_eq!(s.full_dimensional_cells().count(), 0);
        assert_eq!(s.cells.len(), 1);
    }

    #[test]
    fn raised_centre_splits_square() {
        // Centre lifted above the corners: four triangles, non-simplicial ties kept.
        let s = regular_subdivision(&lift(&[
            (&[0, 0], int(0)),
            (&[2, 0], int(0)),
            (&[0, 2], int(0)),
            (&[2, 2], int(0)),
            (&[1, 1], int(1)),
        ]));
        let cells: Vec<_> = s.full_dimensional_cells().collect();
        assert_eq!(cells.len(), 4);
        let total: Rational = cells.iter().map(|c| c.polytope.volume()).sum();
        assert_eq!(total, int(4));
        // Lowered centre: the square stays one cell containing all four corners.
        let s = regular_subdivision(&lift(&[
            (&[0, 0], int(0)),
            (&[2, 0], int(0)),
            (&[0, 2], int(0)),
            (&[2, 2], int(0)),
            (&[1, 1], int(-1)),
        ]));
        let cells: Vec<_> = s.full_dimensional_cells().collect();
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].indices.len(), 4);
    }
}
