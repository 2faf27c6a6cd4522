//! Monge-Ampère measures of tropical expressions.
//!
//! Interior atoms sit on torus fibres dual to full-dimensional cells of the
//! regular subdivision of the lifted exponents; the residual Dirac mass at
//! the origin is `n!` times the covolume of the Newton diagram.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::expr::{canonicalize, make_max, make_sum, TropicalExpr};
use crate::geometry::{regular_subdivision, Covolume};
use crate::rational::{factorial, nth_root_bounds, pow2, to_f64, LogCoord, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MAAtom {
    pub location: Vec<LogCoord>,
    pub mass: Rational,
    pub note: Option<String>,
}

impl MAAtom {
    pub fn is_origin(&self) -> bool {
        self.location.iter().all(LogCoord::is_neg_inf)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MAMeasure {
    pub n: usize,
    /// Sorted by location.
    pub atoms: Vec<MAAtom>,
    /// Zero-based coordinate subsets `S` (the stratum `z_S = 0`) whose mass
    /// could not be determined.
    pub unresolved_strata: Vec<Vec<usize>>,
    /// Tropical vertices outside the open polydisc that were dropped.
    pub discarded_vertices: usize,
}

impl MAMeasure {
    fn new(n: usize, mut atoms: Vec<MAAtom>, mut unresolved: Vec<Vec<usize>>, discarded: usize) -> Self {
        atoms.sort_by(|a, b| a.location.cmp(&b.location));
        unresolved.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        MAMeasure {
            n,
            atoms,
            unresolved_strata: unresolved,
            discarded_vertices: discarded,
        }
    }

    pub fn total_mass(&self) -> Rational {
        self.atoms.iter().map(|a| &a.mass).sum()
    }

    pub fn origin_mass(&self) -> Rational {
        self.atoms
            .iter()
            .filter(|a| a.is_origin())
            .map(|a| &a.mass)
            .sum()
    }

    /// Same atom locations and masses (notes ignored) and same unresolved strata.
    pub fn same_masses(&self, other: &MAMeasure) -> bool {
        self.n == other.n
            && self.unresolved_strata == other.unresolved_strata
            && self.atoms.len() == other.atoms.len()
            && self
                .atoms
                .iter()
                .zip(&other.atoms)
                .all(|(a, b)| a.location == b.location && a.mass == b.mass)
    }

    pub fn to_json(&self) -> Value {
        let atoms: Vec<Value> = self
            .atoms
            .iter()
            .map(|a| {
                let mut v = json!({
                    "x": a.location.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "mass": a.mass.to_string(),
                });
                if let Some(note) = &a.note {
                    v["note"] = json!(note);
                }
                v
            })
            .collect();
        let unresolved: Vec<Vec<usize>> = self
            .unresolved_strata
            .iter()
            .map(|s| s.iter().map(|i| i + 1).collect())
            .collect();
        json!({ "atoms": atoms, "unresolved": unresolved })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.n).map(|i| format!("x{i}")).collect();
        let _ = writeln!(out, "{},mass", header.join(","));
        for a in &self.atoms {
            let xs: Vec<String> = a.location.iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "{},{}", xs.join(","), a.mass);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OriginMass {
    Exact(Rational),
    /// Diagram not convenient; only a lower bound is available.
    NotConvenient { lower_bound: Rational, converged: bool },
}

impl OriginMass {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            OriginMass::Exact(m) => Some(m),
            OriginMass::NotConvenient { .. } => None,
        }
    }

    pub fn lower_bound(&self) -> &Rational {
        match self {
            OriginMass::Exact(m) => m,
            OriginMass::NotConvenient { lower_bound, .. } => lower_bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StratumMass {
    Mass(Rational),
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassReport {
    pub total: Rational,
    pub origin: OriginMass,
    pub interior: Rational,
    /// Every non-empty proper coordinate subset (zero-based).
    pub strata: BTreeMap<Vec<usize>, StratumMass>,
    pub discarded_vertices: usize,
}

impl MassReport {
    pub fn to_json(&self) -> Value {
        let (origin, convenient) = match &self.origin {
            OriginMass::Exact(m) => (m.to_string(), true),
            OriginMass::NotConvenient { lower_bound, .. } => (lower_bound.to_string(), false),
        };
        let strata: Vec<Value> = self
            .strata
            .iter()
            .map(|(s, m)| {
                json!({
                    "S": s.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "mass": match m {
                        StratumMass::Mass(r) => r.to_string(),
                        StratumMass::Unresolved => "unresolved".to_string(),
                    },
                })
            })
            .collect();
        json!({
            "total": self.total.to_string(),
            "origin": origin,
            "convenient": convenient,
            "interior": self.interior.to_string(),
            "strata": strata,
            "discarded_vertices": self.discarded_vertices,
        })
    }
}

fn mobius_note(expr: &TropicalExpr) -> Option<String> {
    if expr.tags().is_empty() {
        return None;
    }
    let parts: Vec<String> = expr
        .tags()
        .iter()
        .map(|t| format!("x{}: torus around Möbius center {}", t.variable + 1, t.center))
        .collect();
    Some(parts.join("; "))
}

/// Interior atoms together with the number of tropical vertices that fell
/// outside the open negative orthant.
pub fn interior_atoms_with_diagnostics(expr: &TropicalExpr) -> (Vec<MAAtom>, usize) {
    let expr = canonicalize(expr);
    let n = expr.n();
    let lifted: Vec<(Vec<Rational>, Rational)> = expr
        .terms()
        .iter()
        .map(|t| (t.exponent.entries().to_vec(), t.constant.clone()))
        .collect();
    let scale = factorial(n);
    let note = mobius_note(&expr);
    let mut atoms = Vec::new();
    let mut discarded = 0;
    for cell in regular_subdivision(&lifted).full_dimensional_cells() {
        let (w, _) = cell.dual_vertex.as_ref().expect("full-dimensional cell");
        if w.iter().all(Signed::is_negative) {
            atoms.push(MAAtom {
                location: w.iter().cloned().map(LogCoord::Finite).collect(),
                mass: &scale * cell.polytope.volume(),
                note: note.clone(),
            });
        } else {
            discarded += 1;
        }
    }
    atoms.sort_by(|a, b| a.location.cmp(&b.location));
    (atoms, discarded)
}

pub fn interior_atoms(expr: &TropicalExpr) -> Vec<MAAtom> {
    interior_atoms_with_diagnostics(expr).0
}

/// Largest truncation exponent `2^TRUNCATION_STEPS` tried for non-convenient input.
pub const TRUNCATION_STEPS: i64 = 10;

pub fn origin_mass(expr: &TropicalExpr) -> OriginMass {
    let n = expr.n();
    match expr.newton_diagram().covolume() {
        Covolume::Finite(v) => OriginMass::Exact(factorial(n) * v),
        Covolume::NotConvenient => {
            // Truncations max(g, A (x_1 + ... + x_n)) for A = 1, 2, ..., 2^10.
            // The added exponent lies on the diagonal, so a truncation is
            // convenient only if g already is; the bound then stays at 0.
            let mut best = Rational::zero();
            for e in 0..=TRUNCATION_STEPS {
                let a = pow2(e);
                let diagonal = crate::expr::TropicalTerm::new(
                    crate::ExponentVector::new(vec![a; n]).expect("positive"),
                    Rational::zero(),
                );
                let Ok(diag) = TropicalExpr::new(n, vec![diagonal]) else {
                    continue;
                };
                let Ok(truncated) = make_max(&[expr.clone(), diag]) else {
                    continue;
                };
                if let Covolume::Finite(v) = truncated.newton_diagram().covolume() {
                    best = best.max(factorial(n) * v);
                }
            }
            OriginMass::NotConvenient {
                lower_bound: best,
                converged: false,
            }
        }
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u64..(1u64 << n) - 1).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

/// True when every term has a positive slope on some coordinate of `s`,
/// i.e. `u` is identically `-inf` on the stratum `z_S = 0`.
fn stratum_killed(expr: &TropicalExpr, s: &[usize]) -> bool {
    expr.terms()
        .iter()
        .all(|t| s.iter().any(|&i| t.exponent.entries()[i].is_positive()))
}

/// Proper strata on which `u` is not identically `-inf` carry no mass off
/// smaller strata (the function is locally bounded near them). Strata where
/// every term dies are reported as unresolved. A decomposition
/// `max(φ(x_{S^c}), ψ(x_S))` always leaves the terms of φ alive on `z_S = 0`,
/// so it never applies to a killed stratum.
pub fn total_measure(expr: &TropicalExpr) -> MAMeasure {
    let expr = canonicalize(expr);
    let n = expr.n();
    let (mut atoms, discarded) = interior_atoms_with_diagnostics(&expr);
    let mut unresolved: Vec<Vec<usize>> = subsets(n).filter(|s| stratum_killed(&expr, s)).collect();
    match origin_mass(&expr) {
        OriginMass::Exact(m) => {
            if m.is_positive() {
                atoms.push(MAAtom {
                    location: vec![LogCoord::NegInf; n],
                    mass: m,
                    note: mobius_note(&expr),
                });
            }
        }
        OriginMass::NotConvenient { .. } => unresolved.push((0..n).collect()),
    }
    MAMeasure::new(n, atoms, unresolved, discarded)
}

pub fn mass_report(expr: &TropicalExpr) -> MassReport {
    let expr = canonicalize(expr);
    let n = expr.n();
    let (atoms, discarded) = interior_atoms_with_diagnostics(&expr);
    let interior: Rational = atoms.iter().map(|a| &a.mass).sum();
    let origin = origin_mass(&expr);
    let strata = subsets(n)
        .map(|s| {
            let m = if stratum_killed(&expr, &s) {
                StratumMass::Unresolved
            } else {
                StratumMass::Mass(Rational::zero())
            };
            (s, m)
        })
        .collect::<BTreeMap<_, _>>();
    let resolved: Rational = strata
        .values()
        .filter_map(|m| match m {
            StratumMass::Mass(r) => Some(r.clone()),
            StratumMass::Unresolved => None,
        })
        .sum();
    MassReport {
        total: &interior + origin.lower_bound() + resolved,
        origin,
        interior,
        strata,
        discarded_vertices: discarded,
    }
}

/// Mixed residual mass by polarization:
/// `(1/n!) Σ_{∅≠I} (-1)^{n-|I|} origin_mass(Σ_{i∈I} u_i)`.
pub fn mixed_origin_mass(exprs: &[TropicalExpr]) -> Result<Rational> {
    let Some(first) = exprs.first() else {
        return Err(Error::Empty("no expressions"));
    };
    let n = first.n();
    if exprs.len() != n {
        return Err(Error::Invalid(format!(
            "mixed mass in {n} variables needs {n} expressions, got {}",
            exprs.len()
        )));
    }
    let mut acc = Rational::zero();
    for mask in 1u64..(1u64 << n) {
        let chosen: Vec<TropicalExpr> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| exprs[i].clone())
            .collect();
        let sum = make_sum(&chosen, &vec![Rational::one(); chosen.len()])?;
        let m = origin_mass(&sum);
        let Some(m) = m.exact() else {
            return Err(Error::NotConvenient(format!("partial sum over subset mask {mask:#b}")));
        };
        if (n - chosen.len()).is_multiple_of(2) {
            acc += m;
        } else {
            acc -= m;
        }
    }
    Ok(acc / factorial(n))
}

/// A measure charges only `{u = -inf}` in the sense used by the product
/// constructions: all atoms at the origin and nothing unresolved.
fn charges_only_origin(m: &MAMeasure) -> std::result::Result<(), String> {
    if let Some(a) = m.atoms.iter().find(|a| !a.is_origin()) {
        let loc: Vec<String> = a.location.iter().map(ToString::to_string).collect();
        return Err(format!("atom of mass {} at ({})", a.mass, loc.join(", ")));
    }
    if !m.unresolved_strata.is_empty() {
        return Err("measure has unresolved strata".into());
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ProductIdentity {
    pub lhs: MAMeasure,
    pub rhs: MAMeasure,
    pub equal: bool,
    /// Hypothesis violations of the factors, if any.
    pub violations: Vec<String>,
}

fn product_measure(a: &MAMeasure, b: &MAMeasure) -> MAMeasure {
    let atoms = a
        .atoms
        .iter()
        .flat_map(|x| {
            b.atoms.iter().map(move |y| MAAtom {
                location: x.location.iter().chain(&y.location).cloned().collect(),
                mass: &x.mass * &y.mass,
                note: None,
            })
        })
        .collect();
    let unresolved = a
        .unresolved_strata
        .iter()
        .cloned()
        .chain(b.unresolved_strata.iter().map(|s| s.iter().map(|i| i + a.n).collect()))
        .collect();
    MAMeasure::new(a.n + b.n, atoms, unresolved, 0)
}

/// Compares `(dd^c max(u1, u2))^{n1+n2}` with the product of the factor
/// measures, for `u1`, `u2` in disjoint variable sets.
pub fn product_mass_identity(u1: &TropicalExpr, u2: &TropicalExpr) -> Result<ProductIdentity> {
    let (n1, n2) = (u1.n(), u2.n());
    let n = n1 + n2;
    let joint = make_max(&[u1.embed(n, 0)?, u2.embed(n, n1)?])?;
    let m1 = total_measure(u1);
    let m2 = total_measure(u2);
    let violations: Vec<String> = [("u1", &m1), ("u2", &m2)]
        .into_iter()
        .filter_map(|(name, m)| charges_only_origin(m).err().map(|e| format!("{name}: {e}")))
        .collect();
    let lhs = total_measure(&joint);
    let rhs = product_measure(&m1, &m2);
    let equal = lhs.same_masses(&rhs);
    Ok(ProductIdentity {
        lhs,
        rhs,
        equal,
        violations,
    })
}

#[derive(Clone, Debug)]
pub struct Lift {
    pub u: TropicalExpr,
    pub measure: MAMeasure,
    pub expected: MAMeasure,
    pub check: bool,
}

/// `u = max(φ(x_1..x_k), x_{k+1}, ..., x_n)`, checked against the pushforward
/// of `(dd^c φ)^k` to `(·, -inf, ..., -inf)`.
pub fn lift_to_subvariety(phi: &TropicalExpr, n: usize) -> Result<Lift> {
    let k = phi.n();
    if n < k {
        return Err(Error::DimensionMismatch { expected: k, found: n });
    }
    let phi_measure = total_measure(phi);
    charges_only_origin(&phi_measure).map_err(|e| Error::Hypothesis(format!("(dd^c φ)^k charges {{φ > -inf}}: {e}")))?;
    let mut parts = vec![phi.embed(n, 0)?];
    for i in k..n {
        parts.push(TropicalExpr::variable(n, i, Rational::one())?);
    }
    let u = make_max(&parts)?;
    let measure = total_measure(&u);
    let atoms = phi_measure
        .atoms
        .iter()
        .map(|a| MAAtom {
            location: a
                .location
                .iter()
                .cloned()
                .chain(std::iter::repeat_n(LogCoord::NegInf, n - k))
                .collect(),
            mass: a.mass.clone(),
            note: None,
        })
        .collect();
    let expected = MAMeasure::new(n, atoms, Vec::new(), 0);
    let check = measure.same_masses(&expected);
    Ok(Lift {
        u,
        measure,
        expected,
        check,
    })
}

#[derive(Clone, Debug)]
pub struct MassInterval {
    pub mass: Rational,
    pub lower: Rational,
    /// Certified enclosure of `(Σ_j (Π_i a_ij)^{1/n})^n`.
    pub upper_lo: Rational,
    pub upper_hi: Rational,
    pub inside: bool,
}

impl MassInterval {
    pub fn upper(&self) -> f64 {
        to_f64(&self.upper_hi)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mass": self.mass.to_string(),
            "lower": self.lower.to_string(),
            "upper": self.upper(),
            "upper_enclosure": [self.upper_lo.to_string(), self.upper_hi.to_string()],
            "inside": self.inside,
        })
    }
}

/// `Σ_j max_i (a_ij x_i)` for positive rows `a_j`.
pub fn example1_partial_sum(rows: &[Vec<Rational>]) -> Result<TropicalExpr> {
    let Some(first) = rows.first() else {
        return Err(Error::Empty("no rows"));
    };
    let n = first.len();
    let mut exprs = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        if !row.iter().all(Signed::is_positive) {
            return Err(Error::Invalid("rows must be positive".into()));
        }
        exprs.push(TropicalExpr::max_of_monomials(row)?);
    }
    make_sum(&exprs, &vec![Rational::one(); exprs.len()])
}

/// Mass of the partial sum against `[Σ Π a, (Σ (Π a)^{1/n})^n]`; the
/// upper end is enclosed with directed rounding and `inside` uses its
/// upper enclosure.
pub fn example1_mass_interval(rows: &[Vec<Rational>]) -> Result<MassInterval> {
    let expr = example1_partial_sum(rows)?;
    let n = expr.n();
    let mass = origin_mass(&expr)
        .exact()
        .cloned()
        .ok_or_else(|| Error::NotConvenient("positive rows always give a convenient diagram".into()))?;
    let products: Vec<Rational> = rows.iter().map(|r| r.iter().product()).collect();
    let lower: Rational = products.iter().sum();
    let (mut lo, mut hi) = (Rational::zero(), Rational::zero());
    for p in &products {
        let (l, h) = nth_root_bounds(p, n as u32);
        lo += l;
        hi += h;
    }
    let upper_lo = num_traits::pow(lo, n);
    let upper_hi = num_traits::pow(hi, n);
    let inside = lower <= mass && mass <= upper_hi;
    Ok(MassInterval {
        mass,
        lower,
        upper_lo,
        upper_hi,
        inside,
    })
}

/// Rows `(1, 4^-j)` for odd `j` and `(4^-j, 1)` for even `j`, `j = 1..=J`.
pub fn example1_alternating_rows(j_max: usize) -> Vec<Vec<Rational>> {
    (1..=j_max)
        .map(|j| {
            let small = pow2(-2 * j as i64);
            if j % 2 == 1 {
                vec![Rational::one(), small]
            } else {
                vec![small, Rational::one()]
            }
        })
        .collect()
}

/// Term `j` of the divergent family: `max(2^-j y_1, (2^j/j) x_2, x_3, ..., x_n, -2^j)`
/// with `y_1` tagged by the Möbius center `2^-j`.
pub fn example2_term(j: u32, n: usize) -> Result<TropicalExpr> {
    if j == 0 || n < 2 {
        return Err(Error::Invalid("need j >= 1 and n >= 2".into()));
    }
    let j_i = i64::from(j);
    let mut parts = vec![
        TropicalExpr::variable(n, 0, pow2(-j_i))?,
        TropicalExpr::variable(n, 1, pow2(j_i) / Rational::from_integer(j.into()))?,
    ];
    for i in 2..n {
        parts.push(TropicalExpr::variable(n, i, Rational::one())?);
    }
    parts.push(TropicalExpr::constant(n, -pow2(j_i))?);
    make_max(&parts)?.with_tag(crate::MobiusTag::new(0, pow2(-j_i))?)
}

/// `H_k = Σ_{j=1}^{k} 1/j`, summed by binary splitting.
pub fn harmonic(k: u64) -> Rational {
    fn split(a: u64, b: u64) -> (BigInt, BigInt) {
        if b - a == 1 {
            return (BigInt::one(), BigInt::from(a));
        }
        let m = a + (b - a) / 2;
        let (p1, q1) = split(a, m);
        let (p2, q2) = split(m, b);
        (p1 * &q2 + p2 * &q1, q1 * q2)
    }
    if k == 0 {
        return Rational::zero();
    }
    let (p, q) = split(1, k + 1);
    Rational::new(p, q)
}

/// `Σ_{j≤k}` of the interior mass of each term; each term contributes one
/// atom of mass `1/j`, so the result is `H_k`.
pub fn example2_lower_bound(k: u32, n: usize) -> Result<Rational> {
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let mut total = Rational::zero();
    for j in 1..=k {
        total += interior_atoms(&example2_term(j, n)?)
            .iter()
            .map(|a| &a.mass)
            .sum::<Rational>();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::geometry::linalg;
    use crate::rational::{int, rat};

    fn p(s: &str) -> TropicalExpr {
        parse(s, None).unwrap()
    }

    fn fin(v: &[Rational]) -> Vec<LogCoord> {
        v.iter().cloned().map(LogCoord::Finite).collect()
    }

    #[test]
    fn single_interior_atom() {
        let atoms = interior_atoms(&p("max(x1, x2, -1)"));
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].location, fin(&[int(-1), int(-1)]));
        assert_eq!(atoms[0].mass, int(1));
        assert!(interior_atoms(&p("max(x1, x2)")).is_empty());
    }

    /// Tropical vertices by brute force: every n-subset of terms whose tie
    /// system has a unique solution where those terms attain the maximum.
    fn brute_force_vertices(e: &TropicalExpr) -> Vec<Vec<Rational>> {
        let n = e.n();
        let t = e.terms();
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (0..=n).collect();
        loop {
            let rows: Vec<Vec<Rational>> = idx[1..]
                .iter()
                .map(|&j| {
                    t[j].exponent
                        .entries()
                        .iter()
                        .zip(t[idx[0]].exponent.entries())
                        .map(|(a, b)| a - b)
                        .collect()
                })
                .collect();
            let rhs: Vec<Rational> = idx[1..].iter().map(|&j| &t[idx[0]].constant - &t[j].constant).collect();
            if let Some(x) = linalg::solve(&rows, &rhs) {
                let m = e.maximizers(&x);
                if idx.iter().all(|i| m.contains(i)) && x.iter().all(Signed::is_negative) && !out.contains(&x) {
                    out.push(x);
                }
            }
            // Next (n+1)-combination.
            let mut i = n;
            loop {
                if idx[i] < t.len() - (n + 1 - i) {
                    idx[i] += 1;
                    for k in i + 1..=n {
                        idx[k] = idx[k - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
            }
        }
    }

    #[test]
    fn interior_atoms_match_brute_force_vertices() {
        let e = p("max(x1, x2, -1/2) + max(x1, 2*x2, -1/3)");
        let atoms = interior_atoms(&e);
        let locs: Vec<Vec<Rational>> = atoms
            .iter()
            .map(|a| a.location.iter().map(|c| c.finite().unwrap().clone()).collect())
            .collect();
        assert_eq!(locs, brute_force_vertices(&e));
        assert!(atoms.iter().all(|a| a.mass.is_positive()));
    }

    #[test]
    fn origin_mass_examples() {
        assert_eq!(origin_mass(&p("max(2*x1, 3*x2)")), OriginMass::Exact(int(6)));
        assert_eq!(
            origin_mass(&p("max(x1, x2) + max(2*x1, x2)")),
            OriginMass::Exact(int(5))
        );
        assert_eq!(
            origin_mass(&parse("x1", Some(2)).unwrap()),
            OriginMass::NotConvenient {
                lower_bound: int(0),
                converged: false
            }
        );
    }

    #[test]
    fn total_measure_examples() {
        let m = total_measure(&p("max(x1, x2)"));
        assert_eq!(m.atoms.len(), 1);
        assert!(m.atoms[0].is_origin());
        assert_eq!(m.atoms[0].mass, int(1));
        assert!(m.unresolved_strata.is_empty());

        let m = total_measure(&p("x1 + x2"));
        assert!(m.atoms.is_empty());
        assert_eq!(m.unresolved_strata, vec![vec![0], vec![1], vec![0, 1]]);
    }

    #[test]
    fn lifting_a_function_with_an_interior_atom() {
        // φ = max(2x1, 3x2, -1) has an interior atom, so the product formula
        // does not apply; the direct computation finds a single finite vertex.
        let u = p("max(2*x1, 3*x2, -1, x3)");
        let m = total_measure(&u);
        assert_eq!(m.atoms.len(), 1);
        assert_eq!(m.atoms[0].location, fin(&[rat(-1, 2), rat(-1, 3), int(-1)]));
        assert_eq!(m.atoms[0].mass, int(6));
        let phi = total_measure(&p("max(2*x1, 3*x2, -1)"));
        assert_eq!(phi.total_mass(), m.total_mass());
        assert!(matches!(
            lift_to_subvariety(&p("max(2*x1, 3*x2, -1)"), 3),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn mixed_masses() {
        let u = p("max(x1, x2)");
        let v = p("max(2*x1, x2)");
        assert_eq!(mixed_origin_mass(&[u.clone(), v]).unwrap(), int(1));
        let w = p("max(3*x1, 1/2*x2)");
        assert_eq!(mixed_origin_mass(&[w.clone(), w]).unwrap(), rat(3, 2));
        assert!(mixed_origin_mass(&[u.clone(), parse("x1", Some(2)).unwrap()]).is_err());
        assert!(mixed_origin_mass(&[u]).is_err());
    }

    #[test]
    fn bi_monomial_mixed_mass_is_min() {
        for (a, b, c, d) in [(1, 2, 3, 4), (2, 1, 1, 2), (5, 3, 2, 7), (1, 1, 1, 1)] {
            let u = TropicalExpr::max_of_monomials(&[int(a), int(b)]).unwrap();
            let v = TropicalExpr::max_of_monomials(&[int(c), int(d)]).unwrap();
            assert_eq!(mixed_origin_mass(&[u, v]).unwrap(), int((a * d).min(b * c)));
        }
    }

    #[test]
    fn product_identity_examples() {
        let r = product_mass_identity(&p("max(x1, x2)"), &p("max(x1, x2)")).unwrap();
        assert!(r.equal && r.violations.is_empty());
        assert_eq!(r.lhs.total_mass(), int(1));
        let r = product_mass_identity(&p("max(2*x1, 3*x2)"), &p("max(4*x1, 5*x2)")).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs.origin_mass(), int(120));
        let r = product_mass_identity(&p("max(x1, x2, -1)"), &p("max(x1, x2)")).unwrap();
        assert_eq!(r.violations.len(), 1);
    }

    #[test]
    fn lift_examples() {
        let l = lift_to_subvariety(&p("max(2*x1, 3*x2)"), 4).unwrap();
        assert!(l.check);
        assert_eq!(l.measure.atoms.len(), 1);
        assert_eq!(l.measure.atoms[0].mass, int(6));
        let l = lift_to_subvariety(&p("x1"), 2).unwrap();
        assert_eq!(l.u, p("max(x1, x2)"));
        assert!(l.check);
        assert!(matches!(lift_to_subvariety(&p("max(x1, -1)"), 2), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn example1_single_row_collapses() {
        let r = example1_mass_interval(&[vec![int(2), int(3)]]).unwrap();
        assert_eq!(r.mass, int(6));
        assert_eq!(r.lower, int(6));
        assert!(r.inside);
    }

    #[test]
    fn example1_two_rows() {
        let r = example1_mass_interval(&[vec![int(1), rat(1, 16)], vec![rat(1, 16), int(1)]]).unwrap();
        // Diagram vertices (17/16,0), (1/16,1/16), (0,17/16): covolume 17/256.
        assert_eq!(r.mass, rat(17, 128));
        assert_eq!(r.lower, rat(1, 8));
        assert_eq!(r.upper_lo, rat(1, 4));
        assert_eq!(r.upper_hi, rat(1, 4));
        assert!(r.inside);
    }

    #[test]
    fn example2_terms() {
        let t = example2_term(2, 3).unwrap();
        let atoms = interior_atoms(&t);
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].mass, rat(1, 2));
        assert_eq!(atoms[0].location, fin(&[int(-16), int(-2), int(-4)]));
        assert!(atoms[0].note.as_deref().unwrap().contains("1/4"));
        assert_eq!(example2_lower_bound(1, 2).unwrap(), int(1));
        assert_eq!(example2_lower_bound(4, 3).unwrap(), rat(25, 12));
        assert_eq!(harmonic(4), rat(25, 12));
        let naive: Rational = (1..=37).map(|j| rat(1, j)).sum();
        assert_eq!(harmonic(37), naive);
    }

    #[test]
    fn measure_serialization() {
        let m = total_measure(&p("max(x1, x2, -1) + max(x1, x2)"));
        let j = m.to_json();
        assert_eq!(j["atoms"].as_array().unwrap().len(), m.atoms.len());
        let csv = m.to_csv();
        assert!(csv.starts_with("x1,x2,mass\n"));
        assert!(csv.contains("-inf,-inf,"));
    }

    #[test]
    fn report_totals() {
        let r = mass_report(&p("max(x1, x2, -1) + max(2*x1, x2)"));
        assert_eq!(r.total, &r.interior + r.origin.lower_bound());
        assert!(r.strata.values().all(|m| *m == StratumMass::Mass(int(0))));
    }
}
