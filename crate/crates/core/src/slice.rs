//! Lelong numbers of slices `u(z', ·)` at `z'' = 0`, where `z'` is the first
//! `k` coordinates.
//!
//! Radii enter through `s = |log r| > 0`, so `r -> 0` is `s -> inf` and
//! every quantity stays rational.

use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::expr::{canonicalize, TropicalExpr, TropicalTerm};
use crate::measure::total_measure;
use crate::rational::{LogCoord, Rational};
use crate::{Error, Result};

fn check_split(expr: &TropicalExpr, k: usize) -> Result<()> {
    if k == 0 || k >= expr.n() {
        return Err(Error::Invalid(format!(
            "split k = {k} must satisfy 1 <= k < n = {}",
            expr.n()
        )));
    }
    Ok(())
}

fn tail_slope(t: &TropicalTerm, k: usize) -> Rational {
    t.exponent.sum_over(k..t.exponent.len())
}

/// Lelong number of `u` at the origin: the smallest total degree.
pub fn lelong_at_origin(expr: &TropicalExpr) -> Rational {
    expr.terms()
        .iter()
        .map(|t| t.exponent.sum_over(0..expr.n()))
        .min()
        .expect("non-empty")
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SliceValue {
    Finite(Rational),
    /// No term survives: the slice is identically `-inf`.
    Infinite,
}

impl SliceValue {
    pub fn at_least(&self, t: &Rational) -> bool {
        match self {
            SliceValue::Finite(v) => v >= t,
            SliceValue::Infinite => true,
        }
    }
}

impl fmt::Display for SliceValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceValue::Finite(v) => write!(f, "{v}"),
            SliceValue::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceLelongProfile {
    pub k: usize,
    pub generic: Rational,
    /// Every non-empty `S` of zero-based `z'` indices, with the slice Lelong
    /// number at points whose `S`-coordinates vanish and the others do not.
    pub strata: Vec<(Vec<usize>, SliceValue)>,
}

impl SliceLelongProfile {
    pub fn to_json(&self) -> Value {
        json!({
            "generic": self.generic.to_string(),
            "strata": self.strata.iter().map(|(s, v)| json!({
                "S": s.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "nu": v.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn surviving<'a>(expr: &'a TropicalExpr, s: &'a [usize]) -> impl Iterator<Item = &'a TropicalTerm> {
    expr.terms()
        .iter()
        .filter(move |t| s.iter().all(|&i| t.exponent.entries()[i].is_zero()))
}

pub fn slice_lelong_profile(expr: &TropicalExpr, k: usize) -> Result<SliceLelongProfile> {
    check_split(expr, k)?;
    let expr = canonicalize(expr);
    let generic = expr
        .terms()
        .iter()
        .map(|t| tail_slope(t, k))
        .min()
        .expect("non-empty");
    let mut strata: Vec<(Vec<usize>, SliceValue)> = (1u64..(1u64 << k))
        .map(|mask| {
            let s: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).collect();
            let v = surviving(&expr, &s)
                .map(|t| tail_slope(t, k))
                .min()
                .map_or(SliceValue::Infinite, SliceValue::Finite);
            (s, v)
        })
        .collect();
    strata.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    Ok(SliceLelongProfile { k, generic, strata })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ESet {
    /// The whole polydisc `Δ^k`.
    All,
    /// Union of the coordinate subspaces `{z_S = 0}` over the listed minimal `S`.
    Strata(Vec<Vec<usize>>),
}

impl ESet {
    pub fn is_pluripolar(&self) -> bool {
        matches!(self, ESet::Strata(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            ESet::All => json!({ "all": true, "strata": [] }),
            ESet::Strata(v) => json!({
                "all": false,
                "strata": v.iter().map(|s| s.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
        }
    }
}

/// `E(u, t, 0) = { z' : ν_{u(z', ·)}(0) >= t }`.
pub fn e_set(expr: &TropicalExpr, k: usize, t: &Rational) -> Result<ESet> {
    if !t.is_positive() {
        return Err(Error::Invalid("t must be positive".into()));
    }
    let profile = slice_lelong_profile(expr, k)?;
    Ok(e_set_from_profile(&profile, t))
}

pub fn e_set_from_profile(profile: &SliceLelongProfile, t: &Rational) -> ESet {
    if &profile.generic >= t {
        return ESet::All;
    }
    let hits: Vec<&Vec<usize>> = profile
        .strata
        .iter()
        .filter(|(_, v)| v.at_least(t))
        .map(|(s, _)| s)
        .collect();
    // Keep minimal subsets; supersets describe smaller subspaces.
    let minimal = hits
        .iter()
        .filter(|s| !hits.iter().any(|o| o.len() < s.len() && o.iter().all(|i| s.contains(i))))
        .map(|s| (*s).clone())
        .collect();
    ESet::Strata(minimal)
}

/// Strata on which the slice Lelong number is positive: the union over
/// `t > 0` of `E(u, t, 0)` when the generic value is zero.
pub fn e_set_union(expr: &TropicalExpr, k: usize) -> Result<ESet> {
    let profile = slice_lelong_profile(expr, k)?;
    if profile.generic.is_positive() {
        return Ok(ESet::All);
    }
    let smallest_positive = profile
        .strata
        .iter()
        .filter_map(|(_, v)| match v {
            SliceValue::Finite(x) if x.is_positive() => Some(x.clone()),
            _ => None,
        })
        .min();
    let t = smallest_positive.unwrap_or_else(|| Rational::from_integer(1.into()));
    Ok(e_set_from_profile(&profile, &t))
}

/// `φ(x', s) = g(x', -s, ..., -s) / s`, the normalised maximum of `u` over
/// `{|z''_i| = r}` with `s = |log r|`.
#[derive(Clone, Debug)]
pub struct PhiFunction {
    expr: TropicalExpr,
    k: usize,
}

impl PhiFunction {
    pub fn new(expr: &TropicalExpr, k: usize) -> Result<Self> {
        check_split(expr, k)?;
        Ok(PhiFunction {
            expr: canonicalize(expr),
            k,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn point(&self, x: &[Rational], s: &Rational) -> Vec<Rational> {
        x.iter()
            .cloned()
            .chain(std::iter::repeat_n(-s.clone(), self.expr.n() - self.k))
            .collect()
    }

    pub fn value(&self, x: &[Rational], s: &Rational) -> Rational {
        self.expr.eval_finite(&self.point(x, s)) / s
    }

    /// `-min_t Σ_{i>k} a_ti`.
    pub fn limit_value(&self) -> Rational {
        -self
            .expr
            .terms()
            .iter()
            .map(|t| tail_slope(t, self.k))
            .min()
            .expect("non-empty")
    }

    /// Smallest `s0 >= 1` beyond which the maximizing terms at `(x', -s 1)`
    /// all have minimal tail slope; there `φ(x', s) = C/s - σ` exactly.
    pub fn stabilization(&self, x: &[Rational]) -> Rational {
        let k = self.k;
        let base = |t: &TropicalTerm| -> Rational {
            &t.constant
                + t.exponent.entries()[..k]
                    .iter()
                    .zip(x)
                    .map(|(a, v)| a * v)
                    .sum::<Rational>()
        };
        let sigma = -self.limit_value();
        let top = self
            .expr
            .terms()
            .iter()
            .filter(|t| tail_slope(t, k) == sigma)
            .map(base)
            .max()
            .expect("some term has minimal slope");
        let mut s0 = Rational::from_integer(1.into());
        for t in self.expr.terms() {
            let st = tail_slope(t, k);
            if st > sigma {
                let cross = (base(t) - &top) / (st - &sigma);
                if cross > s0 {
                    s0 = cross;
                }
            }
        }
        s0
    }

    /// Limit of `φ(x', s)` as `s -> inf`, read off from two exact
    /// evaluations past the stabilization point.
    pub fn limit_at(&self, x: &[Rational]) -> Rational {
        let s1 = self.stabilization(x) + Rational::from_integer(1.into());
        let s2 = &s1 + Rational::from_integer(1.into());
        let f1 = self.value(x, &s1) * &s1;
        let f2 = self.value(x, &s2) * &s2;
        // f(s) = C - σ s on the stable range.
        (f2 - f1) / (s2 - s1)
    }
}

#[derive(Clone, Debug)]
pub struct PhiConstancy {
    pub holds: bool,
    pub limit: Rational,
    /// `(x', stabilization s0, limit at x')`.
    pub points: Vec<(Vec<Rational>, Rational, Rational)>,
}

pub fn phi_constancy_check(expr: &TropicalExpr, k: usize, grid: &[Vec<Rational>]) -> Result<PhiConstancy> {
    let phi = PhiFunction::new(expr, k)?;
    for x in grid {
        if x.len() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: x.len(),
            });
        }
        if let Some(i) = x.iter().position(|v| !v.is_negative()) {
            return Err(Error::Invalid(format!("grid coordinate x{} must be negative", i + 1)));
        }
    }
    let limit = phi.limit_value();
    let points: Vec<_> = grid
        .iter()
        .map(|x| (x.clone(), phi.stabilization(x), phi.limit_at(x)))
        .collect();
    let holds = points.iter().all(|(_, _, l)| *l == limit);
    Ok(PhiConstancy { holds, limit, points })
}

/// True iff some term has no slope in `z''`. This is equivalent to a zero
/// generic slice Lelong number and to `φ_u ≡ 0`.
pub fn class_e_phi_zero(expr: &TropicalExpr, k: usize) -> Result<bool> {
    check_split(expr, k)?;
    Ok(expr.terms().iter().any(|t| tail_slope(t, k).is_zero()))
}

/// `(s, sup |φ(x', x'' - s 1) - limit|)` over the log-box `[-M, -1/M]^n`
/// for each `s = |log r|`. `g` is non-decreasing in every coordinate, so the
/// supremum is attained at one of the two extreme corners.
pub fn capacity_convergence_profile(
    expr: &TropicalExpr,
    k: usize,
    log_radii: &[Rational],
    m: &Rational,
) -> Result<Vec<(Rational, Rational)>> {
    let phi = PhiFunction::new(expr, k)?;
    if *m <= Rational::from_integer(1.into()) {
        return Err(Error::Invalid("box parameter M must exceed 1".into()));
    }
    if let Some(s) = log_radii.iter().find(|s| !s.is_positive()) {
        return Err(Error::Invalid(format!("log-radius {s} is not positive")));
    }
    let n = expr.n();
    let limit = phi.limit_value();
    let corners = [vec![-m.clone(); n], vec![-m.recip(); n]];
    Ok(log_radii
        .iter()
        .map(|s| {
            let err = corners
                .iter()
                .map(|c| {
                    let mut x = c.clone();
                    for v in &mut x[k..] {
                        *v -= s;
                    }
                    (phi.expr.eval_finite(&x) / s - &limit).abs()
                })
                .max()
                .expect("two corners");
            (s.clone(), err)
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct SliceInvariant {
    pub holds: bool,
    /// Offending atoms: finite in `z'`, `-inf` in all of `z''`.
    pub offending: Vec<Vec<LogCoord>>,
    /// Whether the mass on `{z'' = 0}` itself could not be resolved.
    pub slice_stratum_unresolved: bool,
}

/// No atom may sit on a torus fibre of `Δ^k × {0}` with `z'` finite.
pub fn toric_slice_invariant(expr: &TropicalExpr, k: usize) -> Result<SliceInvariant> {
    check_split(expr, k)?;
    let m = total_measure(expr);
    let offending: Vec<Vec<LogCoord>> = m
        .atoms
        .iter()
        .filter(|a| {
            a.mass.is_positive()
                && a.location[..k].iter().all(|c| !c.is_neg_inf())
                && a.location[k..].iter().all(LogCoord::is_neg_inf)
        })
        .map(|a| a.location.clone())
        .collect();
    let tail: Vec<usize> = (k..expr.n()).collect();
    Ok(SliceInvariant {
        holds: offending.is_empty(),
        offending,
        slice_stratum_unresolved: m.unresolved_strata.contains(&tail),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::rational::{int, rat};

    fn p(s: &str) -> TropicalExpr {
        parse(s, None).unwrap()
    }

    #[test]
    fn lelong_examples() {
        let e = p("max(3*x1, 2*x2)");
        assert_eq!(lelong_at_origin(&e), int(2));
        // g(t, t) / t at t = -10^6.
        let t = int(-1_000_000);
        assert_eq!(e.eval_finite(&[t.clone(), t.clone()]) / t, int(2));
        assert_eq!(lelong_at_origin(&p("max(x1, x2)")), int(1));
        assert_eq!(lelong_at_origin(&p("max(x1, x2, -3)")), int(0));
    }

    #[test]
    fn profile_examples() {
        let pr = slice_lelong_profile(&p("max(x1, x2)"), 1).unwrap();
        assert_eq!(pr.generic, int(0));
        assert_eq!(pr.strata, vec![(vec![0], SliceValue::Finite(int(1)))]);
        let pr = slice_lelong_profile(&p("max(x1 + x2, 3*x2)"), 1).unwrap();
        assert_eq!(pr.generic, int(1));
        assert_eq!(pr.strata, vec![(vec![0], SliceValue::Finite(int(3)))]);
        let pr = slice_lelong_profile(&p("max(x1, x2, x3, -1)"), 2).unwrap();
        assert_eq!(pr.generic, int(0));
        assert!(pr.strata.iter().all(|(_, v)| *v == SliceValue::Finite(int(0))));
        let pr = slice_lelong_profile(&p("x1 + x2"), 1).unwrap();
        assert_eq!(pr.strata, vec![(vec![0], SliceValue::Infinite)]);
        assert!(slice_lelong_profile(&p("x1 + x2"), 2).is_err());
    }

    #[test]
    fn profile_json_shape() {
        let pr = slice_lelong_profile(&p("x1 + x2"), 1).unwrap();
        let j = pr.to_json();
        assert_eq!(j["generic"], "1");
        assert_eq!(j["strata"][0]["nu"], "inf");
        assert_eq!(j["strata"][0]["S"][0], 1);
    }

    #[test]
    fn e_set_examples() {
        assert_eq!(
            e_set(&p("max(x1, x2)"), 1, &rat(1, 2)).unwrap(),
            ESet::Strata(vec![vec![0]])
        );
        assert_eq!(e_set(&p("x1 + x2"), 1, &int(1)).unwrap(), ESet::All);
        assert_eq!(
            e_set(&p("max(x1, x2, -1)"), 1, &rat(1, 100)).unwrap(),
            ESet::Strata(vec![])
        );
        // Minimal subsets only.
        let e = e_set(&p("max(x1 + x3, x2 + x3, 2*x3, x1 + x2)"), 2, &int(1)).unwrap();
        assert_eq!(e, ESet::Strata(vec![vec![0], vec![1]]));
    }

    #[test]
    fn phi_limits() {
        let c = phi_constancy_check(&p("max(x1, x2)"), 1, &[vec![int(-1)], vec![rat(-1, 7)]]).unwrap();
        assert!(c.holds);
        assert_eq!(c.limit, int(0));
        let c = phi_constancy_check(&parse("x2", Some(2)).unwrap(), 1, &[vec![int(-3)]]).unwrap();
        assert!(c.holds);
        assert_eq!(c.limit, int(-1));
        let phi = PhiFunction::new(&p("max(x1 + x2, 3*x2, -5)"), 1).unwrap();
        assert_eq!(phi.limit_value(), int(0));
        let x = [int(-2)];
        let s0 = phi.stabilization(&x);
        // Past s0 the constant term wins: φ = -5/s.
        let s = &s0 + int(3);
        assert_eq!(phi.value(&x, &s), int(-5) / s);
    }

    #[test]
    fn phi_is_monotone_in_s() {
        let phi = PhiFunction::new(&p("max(x1 + 2*x2, 3*x2 - 1, x1 - 4)"), 1).unwrap();
        let x = [rat(-1, 2)];
        let mut prev = None;
        for e in 0..12 {
            let v = phi.value(&x, &crate::rational::pow2(e));
            if let Some(pv) = prev {
                assert!(v >= pv);
            }
            prev = Some(v);
        }
    }

    #[test]
    fn class_e_examples() {
        assert!(class_e_phi_zero(&p("max(x1, x2)"), 1).unwrap());
        assert!(!class_e_phi_zero(&p("max(x1 + x2, 3*x2)"), 1).unwrap());
        assert!(class_e_phi_zero(&p("max(x1 + x2, -2)"), 1).unwrap());
    }

    #[test]
    fn convergence_profiles_decrease() {
        let radii: Vec<Rational> = (1..=8).map(crate::rational::pow2).collect();
        let prof = capacity_convergence_profile(&parse("x2", Some(2)).unwrap(), 1, &radii, &int(4)).unwrap();
        // Affine case: error = max|x2| / s = M / s.
        for (s, err) in &prof {
            assert_eq!(*err, int(4) / s);
        }
        let prof = capacity_convergence_profile(&p("max(x1, x2)"), 1, &radii, &int(4)).unwrap();
        assert!(prof.windows(2).all(|w| w[1].1 <= w[0].1));
        assert!(prof.last().unwrap().1 < rat(1, 32));
    }

    #[test]
    fn slice_invariant_examples() {
        let inv = toric_slice_invariant(&p("max(2*x1, x2, -1)"), 1).unwrap();
        assert!(inv.holds);
        let lift = crate::measure::lift_to_subvariety(&p("max(2*x1, 3*x2)"), 4).unwrap();
        assert!(toric_slice_invariant(&lift.u, 2).unwrap().holds);
    }
}
