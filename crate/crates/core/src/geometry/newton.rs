//! Newton diagrams `conv(generators) + R^n_{>=0}` and their covolumes.

use num_traits::{One, Zero};

use super::polytope::{self, Facet};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Covolume {
    Finite(Rational),
    NotConvenient,
}

#[derive(Clone, Debug)]
pub struct NewtonDiagram {
    n: usize,
    generators: Vec<Vec<Rational>>,
    vertices: Vec<Vec<Rational>>,
}

fn unit_rays(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            let mut e = vec![Rational::zero(); n];
            e[i] = Rational::one();
            e
        })
        .collect()
}

impl NewtonDiagram {
    /// Panics if `generators` is empty or has ragged lengths.
    pub fn new(generators: Vec<Vec<Rational>>) -> Self {
        let n = generators.first().expect("at least one generator").len();
        assert!(generators.iter().all(|g| g.len() == n), "ragged generators");
        let mut gens = generators;
        gens.sort();
        gens.dedup();
        let vertices = polytope::vertex_indices(&gens, &unit_rays(n))
            .into_iter()
            .map(|i| gens[i].clone())
            .collect();
        NewtonDiagram {
            n,
            generators: gens,
            vertices,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    /// Generators on the boundary of the diagram that are its vertices.
    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    /// True iff every coordinate axis carries a generator (zero entries
    /// off that axis), i.e. the region below the diagram is bounded.
    pub fn is_convenient(&self) -> bool {
        (0..self.n).all(|i| {
            self.generators
                .iter()
                .any(|g| g.iter().enumerate().all(|(j, x)| j == i || x.is_zero()))
        })
    }

    /// Facets of the diagram as a polyhedron (including the coordinate
    /// facets contributed by the recession cone).
    pub fn facets(&self) -> Vec<Facet> {
        polytope::facets_full_dim(&self.vertices, &unit_rays(self.n))
    }

    /// Volume of `R^n_{>=0}` minus the diagram, computed by complementation
    /// inside the box `[0, M]^n` with `M` the largest generator coordinate.
    pub fn covolume(&self) -> Covolume {
        if !self.is_convenient() {
            return Covolume::NotConvenient;
        }
        let m = self
            .vertices
            .iter()
            .flatten()
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero);
        if m.is_zero() {
            return Covolume::Finite(Rational::zero());
        }
        // (diagram ∩ box) is the hull of every vertex with any subset of its
        // coordinates raised to M.
        let mut clipped = Vec::with_capacity(self.vertices.len() << self.n);
        for v in &self.vertices {
            for mask in 0u32..(1 << self.n) {
                clipped.push(
                    v.iter()
                        .enumerate()
                        .map(|(i, x)| if mask & (1 << i) != 0 { m.clone() } else { x.clone() })
                        .collect(),
                );
            }
        }
        let box_volume = num_traits::pow(m, self.n);
        Covolume::Finite(box_volume - polytope::volume_of_points(&clipped))
    }
}

pub fn covolume(d: &NewtonDiagram) -> Covolume {
    d.covolume()
}
