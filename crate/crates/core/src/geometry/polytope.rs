//! Exact rational polytopes in V-representation with a lazily derived
//! H-representation.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::dd;
use super::linalg::{self, AffineHull};
use crate::rational::{factorial, primitive_integer_vector, Rational};
use crate::Error;

/// Half-space `<normal, x> <= offset`, with the input generators tight on it.
#[derive(Clone, Debug)]
pub struct Facet {
    pub normal: Vec<Rational>,
    pub offset: Rational,
    /// Indices into the point list that lie on the facet.
    pub points: Vec<usize>,
}

/// Facets of `conv(points) + cone(rays)`, which must be full-dimensional
/// in its ambient space. Rays of the polar cone with zero normal (the face
/// at infinity) are dropped.
pub(crate) fn facets_full_dim(points: &[Vec<Rational>], rays: &[Vec<Rational>]) -> Vec<Facet> {
    let rows: Vec<Vec<BigInt>> = points
        .iter()
        .map(|p| {
            let mut r = vec![Rational::one()];
            r.extend(p.iter().map(|x| -x.clone()));
            primitive_integer_vector(&r)
        })
        .chain(rays.iter().map(|v| {
            let mut r = vec![Rational::zero()];
            r.extend(v.iter().map(|x| -x.clone()));
            primitive_integer_vector(&r)
        }))
        .collect();
    dd::extreme_rays(&rows)
        .into_iter()
        .filter(|ray| ray.v[1..].iter().any(|x| !x.is_zero()))
        .map(|ray| {
            let offset = Rational::from_integer(ray.v[0].clone());
            let normal = ray.v[1..]
                .iter()
                .map(|x| Rational::from_integer(x.clone()))
                .collect();
            let points = ray.tight.iter().filter(|&i| i < points.len()).collect();
            Facet {
                normal,
                offset,
                points,
            }
        })
        .collect()
}

fn dedup_sorted(points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    pts
}

/// Indices of the points that are vertices of `conv(points) + cone(rays)`.
/// Points must be pairwise distinct.
pub(crate) fn vertex_indices(points: &[Vec<Rational>], rays: &[Vec<Rational>]) -> Vec<usize> {
    if points.is_empty() {
        return Vec::new();
    }
    let hull = linalg::affine_hull(points, rays);
    let r = hull.dim();
    if r == 0 {
        return vec![0];
    }
    let proj: Vec<Vec<Rational>> = points.iter().map(|p| hull.project(p)).collect();
    let proj_rays: Vec<Vec<Rational>> = rays
        .iter()
        .map(|v| hull.pivots.iter().map(|&i| v[i].clone()).collect())
        .collect();
    let facets = facets_full_dim(&proj, &proj_rays);
    (0..points.len())
        .filter(|&i| {
            let normals: Vec<Vec<Rational>> = facets
                .iter()
                .filter(|f| f.points.contains(&i))
                .map(|f| f.normal.clone())
                .collect();
            normals.len() >= r && linalg::rank(&normals) == r
        })
        .collect()
}

/// Inequalities and equalities describing a polytope in ambient space.
#[derive(Clone, Debug)]
pub struct HRep {
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
}

impl HRep {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.equalities.iter().all(|(h, b)| linalg::dot(h, x) == *b)
            && self.inequalities.iter().all(|(h, b)| linalg::dot(h, x) <= *b)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RationalPolytope {
    /// Ambient dimension.
    pub ambient: usize,
    #[serde(with = "vertex_list")]
    vertices: Vec<Vec<Rational>>,
    #[serde(skip)]
    hrep: OnceLock<HRep>,
}

mod vertex_list {
    use crate::rational::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let raw: Vec<Vec<String>> = v
            .iter()
            .map(|p| p.iter().map(ToString::to_string).collect())
            .collect();
        raw.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|p| {
                p.iter()
                    .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

impl Clone for RationalPolytope {
    fn clone(&self) -> Self {
        RationalPolytope {
            ambient: self.ambient,
            vertices: self.vertices.clone(),
            hrep: self.hrep.clone(),
        }
    }
}

impl PartialEq for RationalPolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

impl Eq for RationalPolytope {}

impl RationalPolytope {
    /// Extreme points in lexicographic order.
    pub fn vertices(&self) -> &[Vec<Rational>] {
        &self.vertices
    }

    fn affine_hull(&self) -> AffineHull {
        linalg::affine_hull(&self.vertices, &[])
    }

    /// Dimension of the affine hull.
    pub fn dim(&self) -> usize {
        self.affine_hull().dim()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn hrep(&self) -> &HRep {
        self.hrep.get_or_init(|| {
            let hull = self.affine_hull();
            let equalities = hull.equalities();
            let inequalities = if hull.dim() == 0 {
                Vec::new()
            } else {
                let proj: Vec<Vec<Rational>> =
                    self.vertices.iter().map(|p| hull.project(p)).collect();
                facets_full_dim(&proj, &[])
                    .into_iter()
                    .map(|f| {
                        let mut h = vec![Rational::zero(); self.ambient];
                        for (k, &i) in hull.pivots.iter().enumerate() {
                            h[i] = f.normal[k].clone();
                        }
                        (h, f.offset)
                    })
                    .collect()
            };
            HRep {
                equalities,
                inequalities,
            }
        })
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.hrep().contains(x)
    }

    pub fn volume(&self) -> Rational {
        volume_exact(self)
    }
}

/// Convex hull of a non-empty point set.
pub fn convex_hull(points: &[Vec<Rational>]) -> Result<RationalPolytope, Error> {
    let Some(first) = points.first() else {
        return Err(Error::Empty("convex hull of no points"));
    };
    let ambient = first.len();
    if points.iter().any(|p| p.len() != ambient) {
        return Err(Error::DimensionMismatch {
            expected: ambient,
            found: points.iter().map(Vec::len).find(|&l| l != ambient).unwrap_or(0),
        });
    }
    let pts = dedup_sorted(points);
    let vertices = vertex_indices(&pts, &[])
        .into_iter()
        .map(|i| pts[i].clone())
        .collect();
    Ok(RationalPolytope {
        ambient,
        vertices,
        hrep: OnceLock::new(),
    })
}

pub fn minkowski_sum(p: &RationalPolytope, q: &RationalPolytope) -> Result<RationalPolytope, Error> {
    if p.ambient != q.ambient {
        return Err(Error::DimensionMismatch {
            expected: p.ambient,
            found: q.ambient,
        });
    }
    let sums: Vec<Vec<Rational>> = p
        .vertices
        .iter()
        .flat_map(|a| {
            q.vertices
                .iter()
                .map(move |b| a.iter().zip(b).map(|(x, y)| x + y).collect())
        })
        .collect();
    convex_hull(&sums)
}

/// Lebesgue volume in the ambient dimension; zero for lower-dimensional
/// polytopes.
pub fn volume_exact(p: &RationalPolytope) -> Rational {
    volume_of_points(&p.vertices)
}

/// Volume of `conv(points)` in its ambient dimension.
pub(crate) fn volume_of_points(points: &[Vec<Rational>]) -> Rational {
    let Some(first) = points.first() else {
        return Rational::zero();
    };
    let d = first.len();
    if d == 0 {
        return Rational::one();
    }
    let pts = dedup_sorted(points);
    if pts.len() <= d {
        return Rational::zero();
    }
    if linalg::affine_hull(&pts, &[]).dim() < d {
        return Rational::zero();
    }
    if d == 1 {
        return &pts[pts.len() - 1][0] - &pts[0][0];
    }
    // Fan from the lexicographically smallest point, which is a vertex.
    let apex = &pts[0];
    let mut total = Rational::zero();
    for facet in facets_full_dim(&pts, &[]) {
        if facet.points.contains(&0) {
            continue;
        }
        let height = &facet.offset - linalg::dot(&facet.normal, apex);
        if facet.points.len() == d {
            let m: Vec<Vec<Rational>> = facet
                .points
                .iter()
                .map(|&i| pts[i].iter().zip(apex).map(|(a, b)| a - b).collect())
                .collect();
            total += linalg::det(m).abs() / factorial(d);
            continue;
        }
        let j = facet
            .normal
            .iter()
            .position(|x| !x.is_zero())
            .expect("facet normal is non-zero");
        let projected: Vec<Vec<Rational>> = facet
            .points
            .iter()
            .map(|&i| {
                pts[i]
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let area = volume_of_points(&projected);
        total += height * area / (Rational::from_integer(BigInt::from(d)) * facet.normal[j].abs());
    }
    total
}
