//! Tropical (max-plus) expressions in log-coordinates.
//!
//! `g(x) = max_t (c_t + <a_t, x>)` with `x_i = log|z_i| < 0` models the toric
//! plurisubharmonic function `u(z) = g(log|z_1|, ..., log|z_n|)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::geometry::polytope::vertex_indices;
use crate::geometry::NewtonDiagram;
use crate::rational::{LogCoord, Rational};
use crate::{Error, Result};

/// Non-negative rational slopes of `log|z_i|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentVector(Vec<Rational>);

impl ExponentVector {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if let Some(i) = entries.iter().position(Signed::is_negative) {
            return Err(Error::Invalid(format!(
                "exponent of x{} is negative ({})",
                i + 1,
                entries[i]
            )));
        }
        Ok(ExponentVector(entries))
    }

    pub fn zero(n: usize) -> Self {
        ExponentVector(vec![Rational::zero(); n])
    }

    pub fn unit(n: usize, i: usize, scale: Rational) -> Self {
        let mut v = vec![Rational::zero(); n];
        v[i] = scale;
        ExponentVector(v)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn sum_over(&self, range: std::ops::Range<usize>) -> Rational {
        self.0[range].iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TropicalTerm {
    pub exponent: ExponentVector,
    pub constant: Rational,
}

impl TropicalTerm {
    pub fn new(exponent: ExponentVector, constant: Rational) -> Self {
        TropicalTerm { exponent, constant }
    }

    pub fn eval(&self, x: &[LogCoord]) -> LogCoord {
        let mut acc = self.constant.clone();
        for (a, xi) in self.exponent.entries().iter().zip(x) {
            if a.is_zero() {
                continue;
            }
            match xi {
                LogCoord::NegInf => return LogCoord::NegInf,
                LogCoord::Finite(v) => acc += a * v,
            }
        }
        LogCoord::Finite(acc)
    }

    pub fn eval_finite(&self, x: &[Rational]) -> Rational {
        &self.constant
            + self
                .exponent
                .entries()
                .iter()
                .zip(x)
                .map(|(a, v)| a * v)
                .sum::<Rational>()
    }

    fn product(&self, other: &TropicalTerm, weight: &Rational) -> TropicalTerm {
        TropicalTerm {
            exponent: ExponentVector(
                self.exponent
                    .0
                    .iter()
                    .zip(&other.exponent.0)
                    .map(|(a, b)| a + b * weight)
                    .collect(),
            ),
            constant: &self.constant + &other.constant * weight,
        }
    }
}

/// Annotates a variable as `log|(z - b)/(1 - b z)|` instead of `log|z|`.
/// The substitution keeps unit Riesz mass, so it never changes masses;
/// only the reported atom locations are re-centred.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MobiusTag {
    pub variable: usize,
    pub center: Rational,
}

impl MobiusTag {
    pub fn new(variable: usize, center: Rational) -> Result<Self> {
        if !(center.is_positive() && center < Rational::one()) {
            return Err(Error::Invalid(format!("Möbius center {center} is not in (0,1)")));
        }
        Ok(MobiusTag { variable, center })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalExpr {
    n: usize,
    terms: Vec<TropicalTerm>,
    tags: Vec<MobiusTag>,
}

/// Outcome of fixing some coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SliceResult {
    Expr(TropicalExpr),
    /// Every term was killed: the slice is identically `-inf`.
    NegInfinity,
}

impl TropicalExpr {
    /// Builds an expression, merging terms with equal exponents (keeping the
    /// largest constant). No pruning beyond that; see [`canonicalize`].
    pub fn new(n: usize, terms: Vec<TropicalTerm>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("expression needs at least one variable".into()));
        }
        if terms.is_empty() {
            return Err(Error::Empty("expression has no terms"));
        }
        if let Some(t) = terms.iter().find(|t| t.exponent.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: t.exponent.len(),
            });
        }
        let mut best: BTreeMap<ExponentVector, Rational> = BTreeMap::new();
        for t in terms {
            best.entry(t.exponent)
                .and_modify(|c| {
                    if t.constant > *c {
                        *c = t.constant.clone();
                    }
                })
                .or_insert(t.constant);
        }
        let terms = best
            .into_iter()
            .map(|(exponent, constant)| TropicalTerm { exponent, constant })
            .collect();
        Ok(TropicalExpr {
            n,
            terms,
            tags: Vec::new(),
        })
    }

    /// `scale * x_{i+1}` (zero-based `i`).
    pub fn variable(n: usize, i: usize, scale: Rational) -> Result<Self> {
        if i >= n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: i + 1,
            });
        }
        if scale.is_negative() {
            return Err(Error::Invalid("negative slope".into()));
        }
        Self::new(n, vec![TropicalTerm::new(ExponentVector::unit(n, i, scale), Rational::zero())])
    }

    pub fn constant(n: usize, c: Rational) -> Result<Self> {
        Self::new(n, vec![TropicalTerm::new(ExponentVector::zero(n), c)])
    }

    /// `max_i (a_i x_i)`.
    pub fn max_of_monomials(a: &[Rational]) -> Result<Self> {
        let n = a.len();
        let terms = a
            .iter()
            .enumerate()
            .map(|(i, ai)| Ok(TropicalTerm::new(ExponentVector::new(unit_vec(n, i, ai))?, Rational::zero())))
            .collect::<Result<Vec<_>>>()?;
        Ok(canonicalize(&Self::new(n, terms)?))
    }

    pub fn with_tag(mut self, tag: MobiusTag) -> Result<Self> {
        if tag.variable >= self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: tag.variable + 1,
            });
        }
        merge_tags(&mut self.tags, std::slice::from_ref(&tag))?;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[TropicalTerm] {
        &self.terms
    }

    pub fn tags(&self) -> &[MobiusTag] {
        &self.tags
    }

    pub fn tag_for(&self, variable: usize) -> Option<&MobiusTag> {
        self.tags.iter().find(|t| t.variable == variable)
    }

    pub fn exponents(&self) -> Vec<Vec<Rational>> {
        self.terms.iter().map(|t| t.exponent.0.clone()).collect()
    }

    pub fn newton_diagram(&self) -> NewtonDiagram {
        NewtonDiagram::new(self.exponents())
    }

    pub fn max_constant(&self) -> Rational {
        self.terms
            .iter()
            .map(|t| t.constant.clone())
            .max()
            .expect("non-empty")
    }

    pub fn eval(&self, x: &[LogCoord]) -> Result<LogCoord> {
        eval(self, x)
    }

    /// Evaluation at a finite point (no domain check).
    pub fn eval_finite(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|t| t.eval_finite(x))
            .max()
            .expect("non-empty")
    }

    /// Indices of the terms attaining the maximum at a finite point.
    pub fn maximizers(&self, x: &[Rational]) -> Vec<usize> {
        let values: Vec<Rational> = self.terms.iter().map(|t| t.eval_finite(x)).collect();
        let top = values.iter().max().expect("non-empty");
        (0..values.len()).filter(|&i| values[i] == *top).collect()
    }

    pub fn scale(&self, weight: &Rational) -> Result<Self> {
        make_sum(std::slice::from_ref(self), std::slice::from_ref(weight))
    }

    /// Re-embeds into `total` variables, variable `i` becoming `offset + i`.
    pub fn embed(&self, total: usize, offset: usize) -> Result<Self> {
        if offset + self.n > total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: offset + self.n,
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut a = vec![Rational::zero(); total];
                for (i, x) in t.exponent.0.iter().enumerate() {
                    a[offset + i] = x.clone();
                }
                TropicalTerm::new(ExponentVector(a), t.constant.clone())
            })
            .collect();
        let mut out = Self::new(total, terms)?;
        out.tags = self
            .tags
            .iter()
            .map(|t| MobiusTag {
                variable: t.variable + offset,
                center: t.center.clone(),
            })
            .collect();
        Ok(out)
    }

    pub fn is_canonical(&self) -> bool {
        canonicalize(self).terms == self.terms
    }
}

fn unit_vec(n: usize, i: usize, scale: &Rational) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = scale.clone();
    v
}

fn merge_tags(into: &mut Vec<MobiusTag>, extra: &[MobiusTag]) -> Result<()> {
    for tag in extra {
        match into.iter().find(|t| t.variable == tag.variable) {
            Some(existing) if existing.center != tag.center => {
                return Err(Error::Invalid(format!(
                    "conflicting Möbius centers for x{}",
                    tag.variable + 1
                )))
            }
            Some(_) => {}
            None => into.push(tag.clone()),
        }
    }
    into.sort();
    Ok(())
}

fn check_same_n(exprs: &[TropicalExpr]) -> Result<usize> {
    let Some(first) = exprs.first() else {
        return Err(Error::Empty("no expressions"));
    };
    if let Some(e) = exprs.iter().find(|e| e.n != first.n) {
        return Err(Error::DimensionMismatch {
            expected: first.n,
            found: e.n,
        });
    }
    Ok(first.n)
}

/// Pointwise maximum.
pub fn make_max(exprs: &[TropicalExpr]) -> Result<TropicalExpr> {
    let n = check_same_n(exprs)?;
    let terms = exprs.iter().flat_map(|e| e.terms.iter().cloned()).collect();
    let mut out = TropicalExpr::new(n, terms)?;
    for e in exprs {
        merge_tags(&mut out.tags, &e.tags)?;
    }
    Ok(canonicalize(&out))
}

/// Weighted sum `Σ w_i e_i`, expanded into a single max and pruned after
/// every pairwise product.
pub fn make_sum(exprs: &[TropicalExpr], weights: &[Rational]) -> Result<TropicalExpr> {
    let n = check_same_n(exprs)?;
    if weights.len() != exprs.len() {
        return Err(Error::Invalid(format!(
            "{} expressions but {} weights",
            exprs.len(),
            weights.len()
        )));
    }
    if weights.iter().any(Signed::is_negative) {
        return Err(Error::Invalid("negative weight".into()));
    }
    let mut acc = TropicalExpr::constant(n, Rational::zero())?;
    for (e, w) in exprs.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        merge_tags(&mut acc.tags, &e.tags)?;
        let terms = acc
            .terms
            .iter()
            .flat_map(|s| e.terms.iter().map(move |t| s.product(t, w)))
            .collect();
        let tags = std::mem::take(&mut acc.tags);
        acc = canonicalize(&TropicalExpr::new(n, terms)?);
        acc.tags = tags;
    }
    Ok(acc)
}

/// Removes every term that is not strictly maximal somewhere in the open
/// negative orthant.
///
/// Term `t` is never strictly maximal on `x < 0` exactly when its lifted
/// point `(a_t, c_t)` lies in `conv{(a_s, c_s) : s != t} + cone(e_1, ..., e_n,
/// -e_c)` (a transposition theorem for the strict system), i.e. when it is
/// not a vertex of that polyhedron built from all the terms.
pub fn canonicalize(expr: &TropicalExpr) -> TropicalExpr {
    let merged = TropicalExpr::new(expr.n, expr.terms.clone()).expect("valid input");
    if merged.terms.len() == 1 {
        return TropicalExpr {
            tags: expr.tags.clone(),
            ..merged
        };
    }
    let n = expr.n;
    let lifted: Vec<Vec<Rational>> = merged
        .terms
        .iter()
        .map(|t| {
            let mut p = t.exponent.0.clone();
            p.push(t.constant.clone());
            p
        })
        .collect();
    let rays: Vec<Vec<Rational>> = (0..=n)
        .map(|i| {
            let mut e = vec![Rational::zero(); n + 1];
            e[i] = if i == n { -Rational::one() } else { Rational::one() };
            e
        })
        .collect();
    let keep = vertex_indices(&lifted, &rays);
    TropicalExpr {
        n,
        terms: keep.into_iter().map(|i| merged.terms[i].clone()).collect(),
        tags: expr.tags.clone(),
    }
}

pub fn eval(expr: &TropicalExpr, x: &[LogCoord]) -> Result<LogCoord> {
    if x.len() != expr.n {
        return Err(Error::DimensionMismatch {
            expected: expr.n,
            found: x.len(),
        });
    }
    if let Some(i) = x
        .iter()
        .position(|c| c.finite().is_some_and(Signed::is_positive))
    {
        return Err(Error::PositiveCoordinate { index: i + 1 });
    }
    Ok(expr
        .terms
        .iter()
        .map(|t| t.eval(x))
        .max()
        .expect("non-empty"))
}

/// `lim_{s -> inf} g(s x) / s`: constants dropped, duplicates merged.
pub fn recession(expr: &TropicalExpr) -> TropicalExpr {
    let terms = expr
        .terms
        .iter()
        .map(|t| TropicalTerm::new(t.exponent.clone(), Rational::zero()))
        .collect();
    let mut out = TropicalExpr::new(expr.n, terms).expect("valid input");
    out.tags = expr.tags.clone();
    out
}

/// Fixes the given (zero-based) coordinates. Terms killed by a `-inf`
/// coordinate with positive slope are dropped; the others absorb their
/// fixed part into the constant. Remaining variables keep their order.
pub fn substitute_slice(expr: &TropicalExpr, fixed: &BTreeMap<usize, LogCoord>) -> Result<SliceResult> {
    for (&i, c) in fixed {
        if i >= expr.n {
            return Err(Error::DimensionMismatch {
                expected: expr.n,
                found: i + 1,
            });
        }
        if c.finite().is_some_and(Signed::is_positive) {
            return Err(Error::PositiveCoordinate { index: i + 1 });
        }
    }
    let free: Vec<usize> = (0..expr.n).filter(|i| !fixed.contains_key(i)).collect();
    let mut terms = Vec::new();
    'terms: for t in &expr.terms {
        let mut c = t.constant.clone();
        for (&i, v) in fixed {
            let a = &t.exponent.0[i];
            if a.is_zero() {
                continue;
            }
            match v {
                LogCoord::NegInf => continue 'terms,
                LogCoord::Finite(x) => c += a * x,
            }
        }
        let a = free.iter().map(|&i| t.exponent.0[i].clone()).collect();
        terms.push(TropicalTerm::new(ExponentVector(a), c));
    }
    if terms.is_empty() {
        return Ok(SliceResult::NegInfinity);
    }
    if free.is_empty() {
        return Err(Error::Invalid(
            "every coordinate fixed; use eval for a point value".into(),
        ));
    }
    let mut out = TropicalExpr::new(free.len(), terms)?;
    out.tags = expr
        .tags
        .iter()
        .filter_map(|tag| {
            free.iter().position(|&i| i == tag.variable).map(|k| MobiusTag {
                variable: k,
                center: tag.center.clone(),
            })
        })
        .collect();
    Ok(SliceResult::Expr(canonicalize(&out)))
}

impl fmt::Display for TropicalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::dsl::to_dsl(self))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    #[serde(with = "crate::rational::serde_rat_vec")]
    a: Vec<Rational>,
    #[serde(with = "crate::rational::serde_rat")]
    c: Rational,
}

#[derive(Serialize, Deserialize)]
struct TagJson {
    var: usize,
    #[serde(with = "crate::rational::serde_rat")]
    center: Rational,
}

#[derive(Serialize, Deserialize)]
struct ExprJson {
    n: usize,
    terms: Vec<TermJson>,
    #[serde(default)]
    tags: Vec<TagJson>,
}

impl Serialize for TropicalExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExprJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    a: t.exponent.0.clone(),
                    c: t.constant.clone(),
                })
                .collect(),
            tags: self
                .tags
                .iter()
                .map(|t| TagJson {
                    var: t.variable + 1,
                    center: t.center.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TropicalExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = ExprJson::deserialize(d)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|t| Ok(TropicalTerm::new(ExponentVector::new(t.a)?, t.c)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        let mut expr = TropicalExpr::new(raw.n, terms).map_err(D::Error::custom)?;
        for tag in raw.tags {
            if tag.var == 0 {
                return Err(D::Error::custom("tag variables are 1-based"));
            }
            let tag = MobiusTag::new(tag.var - 1, tag.center).map_err(D::Error::custom)?;
            expr = expr.with_tag(tag).map_err(D::Error::custom)?;
        }
        Ok(expr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::rational::{int, rat};

    fn p(s: &str) -> TropicalExpr {
        parse(s, None).unwrap()
    }

    fn exps(e: &TropicalExpr) -> Vec<Vec<Rational>> {
        e.exponents()
    }

    fn fin(v: &[i64]) -> Vec<LogCoord> {
        v.iter().map(|&x| LogCoord::Finite(int(x))).collect()
    }

    #[test]
    fn max_of_two_variables_keeps_both() {
        let e = make_max(&[p("x1 + 0*x2"), p("x2")]).unwrap();
        assert_eq!(exps(&e), vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
    }

    #[test]
    fn shifted_copy_is_dominated() {
        let e = make_max(&[p("x1"), p("x1 + -1")]).unwrap();
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.terms()[0].constant, int(0));
    }

    #[test]
    fn tie_locus_terms_are_both_exposed() {
        let e = make_max(&[p("2*x1 + 0*x2"), p("x1 + x2")]).unwrap();
        assert_eq!(e.terms().len(), 2);
        // Each term strictly wins at one of the probe points.
        let a = [int(-1), int(-2)];
        let b = [int(-2), int(-1)];
        assert_eq!(e.maximizers(&a).len(), 1);
        assert_eq!(e.maximizers(&b).len(), 1);
        assert_ne!(e.maximizers(&a), e.maximizers(&b));
    }

    #[test]
    fn sum_expands_and_prunes_dominated_product() {
        let u = p("max(x1, x2)");
        let v = p("max(2*x1, x2)");
        let s = make_sum(&[u, v], &[int(1), int(1)]).unwrap();
        // (2,1) = (1,1) + (1,0) with equal constant never wins on x < 0.
        assert_eq!(
            exps(&s),
            vec![vec![int(0), int(2)], vec![int(1), int(1)], vec![int(3), int(0)]]
        );
    }

    #[test]
    fn zero_weight_annihilates() {
        let u = p("max(x1, x2, -1)");
        let s = make_sum(&[u.clone(), p("max(2*x1, x2)")], &[int(1), int(0)]).unwrap();
        assert_eq!(s, u);
    }

    #[test]
    fn singleton_sum_is_one_term() {
        let s = make_sum(&[p("x1 + 0*x2"), p("x2")], &[int(1), int(1)]).unwrap();
        assert_eq!(exps(&s), vec![vec![int(1), int(1)]]);
    }

    #[test]
    fn sum_errors() {
        assert!(matches!(make_sum(&[], &[]), Err(Error::Empty(_))));
        assert!(matches!(
            make_sum(&[p("x1"), p("x2")], &[int(1), int(1)]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(make_sum(&[p("x1")], &[int(-1)]).is_err());
    }

    #[test]
    fn canonicalize_examples() {
        let e = canonicalize(&p("max(x1, x1 + -5)"));
        assert_eq!(e.terms().len(), 1);
        let e = canonicalize(&p("max(x1, x2, 1/2*x1 + 1/2*x2)"));
        assert_eq!(exps(&e), vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        let e = canonicalize(&p("max(2*x1, x2, x1 + x2 + 1)"));
        assert_eq!(e.terms().len(), 3);
        let probe = [rat(-1, 4), rat(-1, 4)];
        assert_eq!(e.eval_finite(&probe), rat(1, 2));
    }

    #[test]
    fn term_exposed_only_outside_the_orthant_is_removed() {
        // 2*x1 beats x1 only when x1 > 0.
        let e = canonicalize(&p("max(x1, 2*x1 + 0*x2, x2)"));
        assert_eq!(exps(&e), vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
    }

    #[test]
    fn eval_examples() {
        let e = p("max(x1, x2)");
        assert_eq!(
            e.eval(&[LogCoord::NegInf, LogCoord::Finite(int(-3))]).unwrap(),
            LogCoord::Finite(int(-3))
        );
        assert_eq!(e.eval(&[LogCoord::NegInf, LogCoord::NegInf]).unwrap(), LogCoord::NegInf);
        assert!(matches!(e.eval(&fin(&[1, -1])), Err(Error::PositiveCoordinate { index: 1 })));
        // Zero slope ignores a -inf coordinate.
        let c = p("max(x2, -7) + 0*x1");
        assert_eq!(
            c.eval(&[LogCoord::NegInf, LogCoord::NegInf]).unwrap(),
            LogCoord::Finite(int(-7))
        );
    }

    #[test]
    fn recession_examples() {
        let r = recession(&p("max(x1 + -7, 2*x2 + 3)"));
        assert_eq!(r, p("max(x1, 2*x2)"));
        let r = recession(&p("-5"));
        assert_eq!(r.terms(), &[TropicalTerm::new(ExponentVector::zero(1), int(0))]);
    }

    #[test]
    fn slice_examples() {
        let e = p("max(x1 + x2, 3*x2)");
        let mut fixed = BTreeMap::new();
        fixed.insert(0, LogCoord::Finite(int(-2)));
        let SliceResult::Expr(s) = substitute_slice(&e, &fixed).unwrap() else {
            panic!("expected an expression");
        };
        assert_eq!(s, p("max(x1 + -2, 3*x1)"));

        let mut fixed = BTreeMap::new();
        fixed.insert(0, LogCoord::NegInf);
        let SliceResult::Expr(s) = substitute_slice(&p("max(x1, x2)"), &fixed).unwrap() else {
            panic!("expected an expression");
        };
        assert_eq!(s, p("x1"));
        assert_eq!(
            substitute_slice(&p("x1 + x2"), &fixed).unwrap(),
            SliceResult::NegInfinity
        );
    }

    #[test]
    fn json_round_trip_with_tags() {
        let e = p("max(1/2*x1, 3*x2, -4)")
            .with_tag(MobiusTag::new(0, rat(1, 2)).unwrap())
            .unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert!(s.contains("\"center\":\"1/2\""));
        assert!(s.contains("\"var\":1"));
        let back: TropicalExpr = serde_json::from_str(&s).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn conflicting_tags_are_rejected() {
        let a = p("x1").with_tag(MobiusTag::new(0, rat(1, 2)).unwrap()).unwrap();
        let b = p("x1").with_tag(MobiusTag::new(0, rat(1, 4)).unwrap()).unwrap();
        assert!(make_max(&[a, b]).is_err());
        assert!(MobiusTag::new(0, int(1)).is_err());
    }
}
