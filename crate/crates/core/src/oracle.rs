//! Approximate cross-checks for exact masses.
//!
//! Nothing here reuses the exact hull or volume code: membership tests come
//! from a brute-force half-space enumeration and the grid estimator computes
//! hull volumes in floating point.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::expr::TropicalExpr;
use crate::geometry::{linalg, Covolume, NewtonDiagram, RationalPolytope};
use crate::measure::interior_atoms;
use crate::rational::{factorial, to_f64, Rational};
use crate::{Error, Result};

/// Samples per independent random stream.
pub const CHUNK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tolerance {
    /// `|estimate - exact| <= 3 std_error`.
    ThreeSigma,
    /// `|estimate - exact| <= 1% of |exact|`.
    Relative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleReport {
    pub exact: Rational,
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub tolerance: Tolerance,
    pub pass: bool,
}

impl OracleReport {
    fn judge(exact: Rational, estimate: f64, std_error: f64, samples: u64, seed: u64, tolerance: Tolerance) -> Self {
        let e = to_f64(&exact);
        let diff = (estimate - e).abs();
        let slack = 1e-12 * e.abs().max(1.0);
        let pass = match tolerance {
            Tolerance::ThreeSigma => diff <= 3.0 * std_error + slack,
            Tolerance::Relative => diff <= 0.01 * e.abs() + slack,
        };
        OracleReport {
            exact,
            estimate,
            std_error,
            samples,
            seed,
            tolerance,
            pass,
        }
    }

    /// Rescales exact value, estimate and error (e.g. volume to mass).
    pub fn scaled(self, factor: &Rational) -> Self {
        let f = to_f64(factor);
        OracleReport::judge(
            self.exact * factor,
            self.estimate * f,
            self.std_error * f,
            self.samples,
            self.seed,
            self.tolerance,
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "exact": self.exact.to_string(),
            "estimate": self.estimate,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
            "tolerance": match self.tolerance {
                Tolerance::ThreeSigma => "3sigma",
                Tolerance::Relative => "1%",
            },
            "verdict": if self.pass { "pass" } else { "fail" },
        })
    }
}

/// Half-spaces `<h, y> >= beta` cutting out `conv(points) + cone(rays)`,
/// found by trying every hyperplane spanned by `m >= 1` points and `n - m`
/// rays and keeping the valid ones.
/// Returns `None` for lower-dimensional sets.
pub fn brute_force_halfspaces(points: &[Vec<Rational>], rays: &[Vec<Rational>]) -> Option<Vec<(Vec<f64>, f64)>> {
    let n = points.first()?.len();
    if linalg::affine_hull(points, rays).dim() < n {
        return None;
    }
    let mut out: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for m in 1..=n.min(points.len()) {
        for pts in combinations(points.len(), m) {
            for rs in combinations(rays.len(), n - m) {
                let base = &points[pts[0]];
                let rows: Vec<Vec<Rational>> = pts[1..]
                    .iter()
                    .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
                    .chain(rs.iter().map(|&j| rays[j].clone()))
                    .collect();
                let Some(h) = null_vector(&rows, n) else {
                    continue;
                };
                let beta = linalg::dot(&h, base);
                let point_sides: Vec<Rational> = points.iter().map(|p| linalg::dot(&h, p) - &beta).collect();
                let ray_sides: Vec<Rational> = rays.iter().map(|r| linalg::dot(&h, r)).collect();
                let all = |f: fn(&Rational) -> bool| point_sides.iter().chain(&ray_sides).all(|v| v.is_zero() || f(v));
                let (h, beta) = if all(Signed::is_positive) {
                    (h, beta)
                } else if all(Signed::is_negative) {
                    (h.into_iter().map(|x| -x).collect(), -beta)
                } else {
                    continue;
                };
                if !out.contains(&(h.clone(), beta.clone())) {
                    out.push((h, beta));
                }
            }
        }
    }
    Some(
        out.into_iter()
            .map(|(h, b)| (h.iter().map(to_f64).collect(), to_f64(&b)))
            .collect(),
    )
}

/// A non-zero vector orthogonal to `rows` when they span a hyperplane,
/// scaled so its first non-zero entry has absolute value 1.
fn null_vector(rows: &[Vec<Rational>], n: usize) -> Option<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = linalg::rref(&mut m);
    if pivots.len() != n - 1 {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut h = vec![Rational::zero(); n];
    h[free] = Rational::one();
    for (row, &p) in m.iter().zip(&pivots) {
        h[p] = -row[free].clone();
    }
    let scale = h.iter().find(|x| !x.is_zero())?.abs();
    Some(h.into_iter().map(|x| x / &scale).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn inside(halfspaces: &[(Vec<f64>, f64)], y: &[f64]) -> bool {
    halfspaces
        .iter()
        .all(|(h, b)| h.iter().zip(y).map(|(a, x)| a * x).sum::<f64>() >= *b)
}

/// Hit count of `hit` over uniform samples in the box `[lo, hi]`, using one
/// ChaCha stream per chunk so the result does not depend on scheduling.
fn hit_or_miss(lo: &[f64], hi: &[f64], samples: u64, seed: u64, hit: impl Fn(&[f64]) -> bool + Sync) -> u64 {
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut y = vec![0.0; lo.len()];
            let mut hits = 0;
            for _ in 0..count {
                for (i, v) in y.iter_mut().enumerate() {
                    *v = lo[i] + (hi[i] - lo[i]) * rng.gen::<f64>();
                }
                if hit(&y) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

fn binomial_report(exact: Rational, box_volume: f64, hits: u64, samples: u64, seed: u64) -> OracleReport {
    let p = hits as f64 / samples as f64;
    let estimate = box_volume * p;
    let std_error = box_volume * (p * (1.0 - p) / samples as f64).sqrt();
    OracleReport::judge(exact, estimate, std_error, samples, seed, Tolerance::ThreeSigma)
}

/// Hit-or-miss estimate of the covolume inside the box spanned by the
/// axis intercepts of the diagram.
pub fn mc_covolume(d: &NewtonDiagram, samples: u64, seed: u64) -> Result<OracleReport> {
    let Covolume::Finite(exact) = d.covolume() else {
        return Err(Error::NotConvenient("covolume oracle needs a convenient diagram".into()));
    };
    if samples == 0 {
        return Err(Error::Invalid("need at least one sample".into()));
    }
    let n = d.n();
    let intercepts: Vec<f64> = (0..n)
        .map(|i| {
            d.generators()
                .iter()
                .filter(|g| g.iter().enumerate().all(|(j, x)| j == i || x.is_zero()))
                .map(|g| to_f64(&g[i]))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let box_volume: f64 = intercepts.iter().product();
    if box_volume == 0.0 {
        return Ok(OracleReport::judge(exact, 0.0, 0.0, samples, seed, Tolerance::ThreeSigma));
    }
    let rays: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    let hs = brute_force_halfspaces(d.generators(), &rays).expect("diagram is full-dimensional");
    let lo = vec![0.0; n];
    let hits = hit_or_miss(&lo, &intercepts, samples, seed, |y| !inside(&hs, y));
    Ok(binomial_report(exact, box_volume, hits, samples, seed))
}

/// `n!` times [`mc_covolume`] of the expression's diagram.
pub fn mc_origin_mass(expr: &TropicalExpr, samples: u64, seed: u64) -> Result<OracleReport> {
    Ok(mc_covolume(&expr.newton_diagram(), samples, seed)?.scaled(&factorial(expr.n())))
}

/// Hit-or-miss estimate of a polytope volume inside its bounding box.
pub fn mc_volume(p: &RationalPolytope, samples: u64, seed: u64) -> Result<OracleReport> {
    if samples == 0 {
        return Err(Error::Invalid("need at least one sample".into()));
    }
    let exact = p.volume();
    let Some(hs) = brute_force_halfspaces(p.vertices(), &[]) else {
        return Ok(OracleReport::judge(exact, 0.0, 0.0, samples, seed, Tolerance::ThreeSigma));
    };
    let n = p.ambient;
    let lo: Vec<f64> = (0..n)
        .map(|i| p.vertices().iter().map(|v| to_f64(&v[i])).fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..n)
        .map(|i| p.vertices().iter().map(|v| to_f64(&v[i])).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let hits = hit_or_miss(&lo, &hi, samples, seed, |y| inside(&hs, y));
    Ok(binomial_report(exact, box_volume, hits, samples, seed))
}

/// Axis-aligned log-box `[lo, hi]` strictly inside the negative orthant.
#[derive(Clone, Debug)]
pub struct LogBox {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl LogBox {
    pub fn cube(n: usize, lo: Rational, hi: Rational) -> Self {
        LogBox {
            lo: vec![lo; n],
            hi: vec![hi; n],
        }
    }

    fn contains(&self, x: &[Rational]) -> bool {
        x.iter()
            .zip(&self.lo)
            .zip(&self.hi)
            .all(|((v, a), b)| a <= v && v <= b)
    }
}

/// Real Monge-Ampère mass of `g` over `region`: `n!` times the volume of
/// the gradient image. On every grid cell the gradients seen at its corners
/// span (part of) a subdifferential; the maximal such gradient sets are
/// the dual cells of the tropical vertices inside the region.
pub fn grid_real_ma(expr: &TropicalExpr, region: &LogBox, resolution: usize) -> Result<OracleReport> {
    let n = expr.n();
    if !(2..=3).contains(&n) {
        return Err(Error::Invalid("grid oracle supports n = 2 or 3".into()));
    }
    if region.lo.len() != n || region.hi.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: region.lo.len(),
        });
    }
    if region.hi.iter().any(|h| *h >= Rational::zero())
        || region.lo.iter().zip(&region.hi).any(|(a, b)| a >= b)
    {
        return Err(Error::Invalid("region must be a non-empty box strictly inside the negative orthant".into()));
    }
    if resolution == 0 {
        return Err(Error::Invalid("resolution must be positive".into()));
    }
    let exact: Rational = interior_atoms(expr)
        .iter()
        .filter(|a| {
            let x: Vec<Rational> = a.location.iter().map(|c| c.finite().expect("interior").clone()).collect();
            region.contains(&x)
        })
        .map(|a| a.mass.clone())
        .sum();

    let terms: Vec<(Vec<f64>, f64)> = expr
        .terms()
        .iter()
        .map(|t| (t.exponent.entries().iter().map(to_f64).collect(), to_f64(&t.constant)))
        .collect();
    let lo: Vec<f64> = region.lo.iter().map(to_f64).collect();
    let hi: Vec<f64> = region.hi.iter().map(to_f64).collect();
    let coord = |i: usize, k: usize| lo[i] + (hi[i] - lo[i]) * k as f64 / resolution as f64;
    let maximizers = |x: &[f64]| -> u64 {
        let vals: Vec<f64> = terms
            .iter()
            .map(|(a, c)| c + a.iter().zip(x).map(|(p, q)| p * q).sum::<f64>())
            .collect();
        let top = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let tol = 1e-12 * top.abs().max(1.0);
        vals.iter()
            .enumerate()
            .filter(|(_, v)| top - **v <= tol)
            .fold(0u64, |m, (i, _)| m | (1 << i))
    };
    if terms.len() > 64 {
        return Err(Error::Invalid("grid oracle supports at most 64 terms".into()));
    }

    // Maximizer sets at every grid node, then unions over each cell.
    let side = resolution + 1;
    let nodes = side.pow(n as u32);
    let node_sets: Vec<u64> = (0..nodes)
        .into_par_iter()
        .map(|idx| {
            let x: Vec<f64> = (0..n).map(|i| coord(i, (idx / side.pow(i as u32)) % side)).collect();
            maximizers(&x)
        })
        .collect();
    let mut cell_sets: Vec<u64> = (0..resolution.pow(n as u32))
        .into_par_iter()
        .map(|c| {
            let base: Vec<usize> = (0..n).map(|i| (c / resolution.pow(i as u32)) % resolution).collect();
            (0..1usize << n).fold(0u64, |m, corner| {
                let idx: usize = (0..n)
                    .map(|i| (base[i] + ((corner >> i) & 1)) * side.pow(i as u32))
                    .sum();
                m | node_sets[idx]
            })
        })
        .filter(|s| s.count_ones() as usize > n)
        .collect();
    cell_sets.sort_unstable();
    cell_sets.dedup();
    let maximal: Vec<u64> = cell_sets
        .iter()
        .copied()
        .filter(|&s| !cell_sets.iter().any(|&o| o != s && o & s == s))
        .collect();
    let fact = (1..=n).product::<usize>() as f64;
    let estimate: f64 = maximal
        .iter()
        .map(|&s| {
            let pts: Vec<Vec<f64>> = (0..terms.len())
                .filter(|i| s & (1 << i) != 0)
                .map(|i| terms[i].0.clone())
                .collect();
            fact * hull_volume_f64(&pts)
        })
        .sum();
    Ok(OracleReport::judge(
        exact,
        estimate,
        0.0,
        nodes as u64,
        0,
        Tolerance::Relative,
    ))
}

/// Convex hull volume in dimension 2 or 3 by brute force in floating point.
fn hull_volume_f64(pts: &[Vec<f64>]) -> f64 {
    match pts.first().map(Vec::len) {
        Some(2) => {
            // Monotone chain, then shoelace.
            let mut p: Vec<(f64, f64)> = pts.iter().map(|v| (v[0], v[1])).collect();
            p.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
            let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
            let mut hull: Vec<(f64, f64)> = Vec::new();
            for pass in 0..2 {
                let start = hull.len();
                let iter: Box<dyn Iterator<Item = &(f64, f64)>> =
                    if pass == 0 { Box::new(p.iter()) } else { Box::new(p.iter().rev()) };
                for &q in iter {
                    while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0.0 {
                        hull.pop();
                    }
                    hull.push(q);
                }
                hull.pop();
            }
            let m = hull.len();
            (0..m)
                .map(|i| {
                    let (a, b) = (hull[i], hull[(i + 1) % m]);
                    a.0 * b.1 - a.1 * b.0
                })
                .sum::<f64>()
                .abs()
                / 2.0
        }
        Some(3) => {
            // Sum of tetrahedra from the centroid over every facet triangle.
            let m = pts.len() as f64;
            let c: Vec<f64> = (0..3).map(|i| pts.iter().map(|p| p[i]).sum::<f64>() / m).collect();
            let sub = |a: &[f64], b: &[f64]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
            let cross = |a: [f64; 3], b: [f64; 3]| [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
            let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
            let mut vol = 0.0;
            let mut seen: Vec<Vec<usize>> = Vec::new();
            for t in combinations(pts.len(), 3) {
                let nrm = cross(sub(&pts[t[1]], &pts[t[0]]), sub(&pts[t[2]], &pts[t[0]]));
                let scale = dot(nrm, nrm).sqrt();
                if scale < 1e-12 {
                    continue;
                }
                let side: Vec<f64> = pts.iter().map(|p| dot(nrm, sub(p, &pts[t[0]])) / scale).collect();
                let tol = 1e-9;
                if !(side.iter().all(|&s| s <= tol) || side.iter().all(|&s| s >= -tol)) {
                    continue;
                }
                let face: Vec<usize> = (0..pts.len()).filter(|&i| side[i].abs() <= tol).collect();
                if seen.contains(&face) {
                    continue;
                }
                // Order the facet points by angle around their centroid.
                let fc: Vec<f64> = (0..3)
                    .map(|i| face.iter().map(|&j| pts[j][i]).sum::<f64>() / face.len() as f64)
                    .collect();
                let u = sub(&pts[face[0]], &fc);
                let w = cross(nrm, u);
                let mut ring: Vec<(f64, usize)> = face
                    .iter()
                    .map(|&j| {
                        let d = sub(&pts[j], &fc);
                        (dot(d, w).atan2(dot(d, u)), j)
                    })
                    .collect();
                ring.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
                for i in 1..ring.len().saturating_sub(1) {
                    let (a, b, d) = (&pts[ring[0].1], &pts[ring[i].1], &pts[ring[i + 1].1]);
                    vol += dot(sub(a, &c), cross(sub(b, &c), sub(d, &c))).abs() / 6.0;
                }
                seen.push(face);
            }
            vol
        }
        _ => 0.0,
    }
}
