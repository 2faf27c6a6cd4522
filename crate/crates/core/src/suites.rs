//! Named verification suites, shared by the `check` command and the
//! acceptance run. Each suite regenerates its inputs from the seed, so two
//! runs with the same options report the same cases.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::corpus::{self, case_rng};
use crate::expr::{make_max, make_sum, substitute_slice, SliceResult, TropicalExpr};
use crate::geometry::{convex_hull, minkowski_sum, regular_subdivision};
use crate::measure::{
    example1_alternating_rows, example1_mass_interval, example1_partial_sum, example2_lower_bound, example2_term,
    harmonic, interior_atoms, lift_to_subvariety, mixed_origin_mass, origin_mass, product_mass_identity,
};
use crate::oracle::{grid_real_ma, mc_origin_mass, mc_volume, LogBox, OracleReport};
use crate::rational::{cmp_root_sum, factorial, int, rat, to_f64, LogCoord, Rational};
use crate::slice::{
    capacity_convergence_profile, class_e_phi_zero, e_set, e_set_union, phi_constancy_check, slice_lelong_profile,
    toric_slice_invariant, ESet, PhiFunction,
};
use crate::{Error, Result};

pub const DEFAULT_SEED: u64 = 7;

const TAG_ANCHOR: u64 = 1;
const TAG_PRODUCT: u64 = 5;
const TAG_LIFT: u64 = 6;
const TAG_SLICE: u64 = 7;
const TAG_TORIC: u64 = 9;
const TAG_POLYTOPE: u64 = 11;
const TAG_SUBDIVISION: u64 = 12;
const TAG_BOUNDS: u64 = 13;

/// Suite names with one-line descriptions.
pub const SUITES: &[(&str, &str)] = &[
    ("anchor", "origin mass of max(a_i x_i) equals the product of the a_i"),
    ("example1", "partial sums of the alternating series stay inside the mass interval"),
    ("infinity", "slices of the partial sums at x1 = -inf and x2 = -inf are identically -inf"),
    ("example2", "interior masses of the divergent family are harmonic numbers"),
    ("product", "mass of max(u1, u2) in disjoint variables is the product measure"),
    ("lift", "max(phi, x_{k+1}, ..., x_n) carries the pushforward of (dd^c phi)^k"),
    ("phi", "the slice limit of phi is constant and zero exactly with a z''-free term"),
    ("eset", "the sets E(u, t, 0) lie in coordinate hyperplanes unless phi is non-zero"),
    ("toric", "no atom sits on a torus fibre of the slice {z'' = 0}"),
    ("oracle", "Monte-Carlo and grid estimates agree with the exact masses"),
    ("geometry", "Brunn-Minkowski and subdivision volume partition on random polytopes"),
    ("bounds", "superadditivity, Brunn-Minkowski upper bound and polarization of origin masses"),
];

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Number of random cases (pairs, expressions, polytopes).
    pub cases: Option<usize>,
    pub samples: Option<u64>,
    pub grid: Option<usize>,
    pub k: Option<u32>,
    pub truncate: Option<usize>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: DEFAULT_SEED,
            cases: None,
            samples: None,
            grid: None,
            k: None,
            truncate: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, message: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(message());
        }
    }

    /// Runs `f` on `0..count` in parallel; failures keep case order.
    fn run_cases<F>(&mut self, count: usize, f: F)
    where
        F: Fn(u64) -> Vec<std::result::Result<(), String>> + Sync,
    {
        let outcomes: Vec<Vec<std::result::Result<(), String>>> =
            (0..count as u64).into_par_iter().map(&f).collect();
        for (i, checks) in outcomes.into_iter().enumerate() {
            for c in checks {
                self.check(c.is_ok(), || format!("case {i}: {}", c.unwrap_err()));
            }
        }
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} checks, {} failed)",
            self.name,
            if self.passed() { "pass" } else { "FAIL" },
            self.cases,
            self.failures.len()
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.name,
            "passed": self.passed(),
            "checks": self.cases,
            "failures": self.failures,
            "notes": self.notes,
        })
    }
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn lift_err<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    Ok(match name {
        "anchor" => anchor(opts),
        "example1" => example1(opts),
        "infinity" => infinity(opts),
        "example2" => example2(opts),
        "product" => product(opts),
        "lift" => lift(opts),
        "phi" => phi(opts),
        "eset" => eset(opts),
        "toric" => toric(opts),
        "oracle" => oracle(opts),
        "geometry" => geometry(opts),
        "bounds" => bounds(opts),
        other => {
            let names: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
            return Err(Error::Invalid(format!(
                "unknown suite '{other}'; available: {}",
                names.join(", ")
            )));
        }
    })
}

// Inputs, shared with the oracle suite.

pub fn anchor_inputs(seed: u64, count: usize) -> Vec<Vec<Rational>> {
    (0..count as u64)
        .map(|i| corpus::positive_vector(&mut case_rng(seed, TAG_ANCHOR, i), 2 + (i % 3) as usize))
        .collect()
}

pub fn product_inputs(seed: u64, count: usize) -> Vec<(TropicalExpr, TropicalExpr)> {
    (0..count as u64)
        .map(|i| {
            let mut rng = case_rng(seed, TAG_PRODUCT, i);
            let u1 = corpus::convenient_homogeneous(&mut rng, 2);
            let u2 = corpus::convenient_homogeneous(&mut rng, 2);
            (u1, u2)
        })
        .collect()
}

pub fn lift_inputs(seed: u64, count: usize) -> Vec<(TropicalExpr, usize)> {
    (0..count as u64)
        .map(|i| {
            let phi = corpus::convenient_homogeneous(&mut case_rng(seed, TAG_LIFT, i), 2);
            (phi, 3 + (i % 2) as usize)
        })
        .collect()
}

pub fn slice_inputs(seed: u64, count: usize) -> Vec<TropicalExpr> {
    (0..count as u64)
        .map(|i| corpus::canonical_expr(&mut case_rng(seed, TAG_SLICE, i), 3))
        .collect()
}

pub fn two_row_variant() -> Vec<Vec<Rational>> {
    vec![vec![int(1), rat(1, 16)], vec![rat(1, 16), int(1)]]
}

// Suites.

fn anchor(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("anchor");
    let inputs = anchor_inputs(opts.seed, opts.cases.unwrap_or(50));
    r.run_cases(inputs.len(), |i| {
        let a = &inputs[i as usize];
        let check = || {
            let e = lift_err(TropicalExpr::max_of_monomials(a))?;
            let expected: Rational = a.iter().product();
            let m = origin_mass(&e);
            ensure(m.exact() == Some(&expected), || {
                format!("slopes {a:?}: origin mass {m:?}, expected {expected}")
            })
        };
        vec![check()]
    });
    r
}

fn example1(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("example1");
    let j_max = opts.truncate.unwrap_or(10);
    for j in 1..=j_max {
        match example1_mass_interval(&example1_alternating_rows(j)) {
            Ok(iv) => {
                r.check(iv.inside, || {
                    format!(
                        "J = {j}: mass {} outside [{}, {:.6}]",
                        iv.mass,
                        iv.lower,
                        iv.upper()
                    )
                });
                r.notes.push(format!(
                    "J = {j}: mass {} in [{}, {:.9}]",
                    iv.mass,
                    iv.lower,
                    iv.upper()
                ));
            }
            Err(e) => r.check(false, || format!("J = {j}: {e}")),
        }
    }
    // Two rows (a, b), (c, d): mass ab + cd + 2 min(ad, bc) in closed form.
    let rows = two_row_variant();
    match example1_mass_interval(&rows) {
        Ok(iv) => {
            let (a, b, c, d) = (&rows[0][0], &rows[0][1], &rows[1][0], &rows[1][1]);
            let closed = a * b + c * d + int(2) * (a * d).min(b * c);
            r.check(iv.mass == closed, || {
                format!("two-row variant: mass {} but closed form gives {closed}", iv.mass)
            });
            r.check(iv.inside, || format!("two-row variant: mass {} outside interval", iv.mass));
            r.notes.push(format!(
                "two-row variant (1, 1/16), (1/16, 1): exact mass {} in [{}, {}]; the value 11/32 with interval [5/16, 9/16] is not reproduced",
                iv.mass, iv.lower, iv.upper_hi
            ));
        }
        Err(e) => r.check(false, || format!("two-row variant: {e}")),
    }
    r
}

fn infinity(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("infinity");
    let j_max = opts.truncate.unwrap_or(10);
    for j in 1..=j_max {
        let rows = example1_alternating_rows(j);
        let e = match example1_partial_sum(&rows) {
            Ok(e) => e,
            Err(err) => {
                r.check(false, || format!("J = {j}: {err}"));
                continue;
            }
        };
        for var in 0..2 {
            let fixed = BTreeMap::from([(var, LogCoord::NegInf)]);
            match substitute_slice(&e, &fixed) {
                Ok(SliceResult::NegInfinity) => r.check(true, String::new),
                Ok(SliceResult::Expr(s)) => r.check(false, || {
                    format!(
                        "J = {j}: slice at x{} = -inf is {s} in the remaining variable, not identically -inf",
                        var + 1
                    )
                }),
                Err(err) => r.check(false, || format!("J = {j}: {err}")),
            }
        }
        if j == j_max {
            let s1: Rational = rows.iter().map(|row| row[1].clone()).sum();
            let s0: Rational = rows.iter().map(|row| row[0].clone()).sum();
            r.notes.push(format!(
                "J = {j}: the slices are {s1}*x2 and {s0}*x1; the slopes grow without bound in J, so only the infinite series is -inf there"
            ));
        }
    }
    r
}

fn example2(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("example2");
    let ks: Vec<u32> = opts.k.map_or_else(|| vec![1, 4, 100], |k| vec![k]);
    for &k in &ks {
        match example2_lower_bound(k, 2) {
            Ok(v) => {
                let h = harmonic(u64::from(k));
                r.check(v == h, || format!("k = {k}: lower bound {v} differs from H_k = {h}"));
                r.notes.push(format!("k = {k}: H_k ≈ {:.6}", to_f64(&v)));
                if k == 100 {
                    r.check(to_f64(&v) > 100f64.ln(), || "H_100 does not exceed ln 100".into());
                }
            }
            Err(e) => r.check(false, || format!("k = {k}: {e}")),
        }
    }
    let mut prev = Rational::zero();
    for k in 1..=20 {
        match example2_lower_bound(k, 2) {
            Ok(v) => {
                r.check(v > prev, || format!("lower bound not increasing at k = {k}"));
                prev = v;
            }
            Err(e) => r.check(false, || format!("k = {k}: {e}")),
        }
    }
    let half = rat(1, 2);
    for e in 0..=12u32 {
        let k = 1u64 << e;
        let gap = harmonic(2 * k) - harmonic(k);
        r.check(gap >= half, || format!("H_{} - H_{k} = {gap} < 1/2", 2 * k));
    }
    r
}

fn product(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("product");
    let inputs = product_inputs(opts.seed, opts.cases.unwrap_or(50));
    r.run_cases(inputs.len(), |i| {
        let (u1, u2) = &inputs[i as usize];
        let check = || {
            let id = lift_err(product_mass_identity(u1, u2))?;
            ensure(id.violations.is_empty(), || format!("hypothesis: {:?}", id.violations))?;
            ensure(id.equal, || format!("u1 = {u1}, u2 = {u2}: measures differ"))
        };
        vec![check()]
    });
    let fixed = (|| -> Result<(bool, Rational)> {
        let u1 = TropicalExpr::max_of_monomials(&[int(2), int(3)])?;
        let u2 = TropicalExpr::max_of_monomials(&[int(4), int(5)])?;
        let id = product_mass_identity(&u1, &u2)?;
        Ok((id.equal && id.violations.is_empty(), id.lhs.origin_mass()))
    })();
    match fixed {
        Ok((equal, mass)) => {
            r.check(equal && mass == int(120), || format!("max(2x1,3x2) x max(4x3,5x4): mass {mass}, equal {equal}"));
        }
        Err(e) => r.check(false, || e.to_string()),
    }
    r
}

fn lift(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("lift");
    let inputs = lift_inputs(opts.seed, opts.cases.unwrap_or(25));
    r.run_cases(inputs.len(), |i| {
        let (phi, n) = &inputs[i as usize];
        let res = lift_err(lift_to_subvariety(phi, *n));
        let first = res.as_ref().map_err(Clone::clone).and_then(|l| {
            ensure(l.check, || format!("phi = {phi}, n = {n}: lifted measure differs from the pushforward"))
        });
        let second = res.and_then(|l| {
            let inv = lift_err(toric_slice_invariant(&l.u, 2))?;
            ensure(inv.holds, || format!("lift of {phi}: slice invariant fails"))
        });
        vec![first, second]
    });
    r
}

fn slice_grid(k: usize) -> Vec<Vec<Rational>> {
    let values = [rat(-1, 3), int(-1), rat(-5, 2)];
    let mut out: Vec<Vec<Rational>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    out
}

fn phi_checks(e: &TropicalExpr, k: usize) -> std::result::Result<(), String> {
    let grid = slice_grid(k);
    let c = lift_err(phi_constancy_check(e, k, &grid))?;
    ensure(c.holds, || format!("{e}, k = {k}: limit not constant: {:?}", c.points))?;
    let profile = lift_err(slice_lelong_profile(e, k))?;
    ensure(c.limit == -profile.generic.clone(), || {
        format!("{e}, k = {k}: limit {} but generic slice value {}", c.limit, profile.generic)
    })?;
    let class_e = lift_err(class_e_phi_zero(e, k))?;
    ensure(
        class_e == profile.generic.is_zero() && class_e == c.limit.is_zero(),
        || format!("{e}, k = {k}: zero-block criterion {class_e} disagrees with limit {}", c.limit),
    )?;
    // φ is non-decreasing as r decreases, i.e. as s grows.
    let phi = lift_err(PhiFunction::new(e, k))?;
    for x in &grid {
        let values: Vec<Rational> = (0..=10).map(|p| phi.value(x, &crate::rational::pow2(p))).collect();
        ensure(values.windows(2).all(|w| w[0] <= w[1]), || {
            format!("{e}, k = {k}: phi not monotone at {x:?}")
        })?;
    }
    // Sup-norm error on [-4, -1/4]^n decreases to zero past stabilization.
    let ladder: Vec<Rational> = (1..=16).map(crate::rational::pow2).collect();
    let prof = lift_err(capacity_convergence_profile(e, k, &ladder, &int(4)))?;
    ensure(prof[9..].windows(2).all(|w| w[1].1 <= w[0].1), || {
        format!("{e}, k = {k}: convergence errors not decreasing for s >= 1024")
    })?;
    ensure(prof.last().expect("non-empty").1 <= rat(1, 256), || {
        format!("{e}, k = {k}: error at s = 65536 is {}", prof.last().expect("non-empty").1)
    })
}

fn phi(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("phi");
    let inputs = slice_inputs(opts.seed, opts.cases.unwrap_or(100));
    r.run_cases(inputs.len(), |i| {
        let e = &inputs[i as usize];
        (1..=2).map(|k| phi_checks(e, k)).collect()
    });
    let zero = inputs
        .iter()
        .filter(|e| class_e_phi_zero(e, 1).unwrap_or(false))
        .count();
    r.notes.push(format!("{zero} of {} expressions have phi = 0 for k = 1", inputs.len()));
    r
}

fn eset_checks(e: &TropicalExpr, k: usize) -> std::result::Result<(), String> {
    let union = lift_err(e_set_union(e, k))?;
    let class_e = lift_err(class_e_phi_zero(e, k))?;
    ensure((union == ESet::All) == !class_e, || {
        format!("{e}, k = {k}: E-set {union:?} inconsistent with phi = 0 being {class_e}")
    })?;
    let ESet::Strata(strata) = &union else {
        return Ok(());
    };
    ensure(strata.iter().all(|s| !s.is_empty() && s.iter().all(|&i| i < k)), || {
        format!("{e}, k = {k}: malformed strata {strata:?}")
    })?;
    for t in [rat(1, 2), int(1), int(2)] {
        let part = lift_err(e_set(e, k, &t))?;
        let ESet::Strata(ps) = part else {
            return Err(format!("{e}, k = {k}: E(u, {t}, 0) is everything but phi = 0"));
        };
        // Each {z_S = 0} must lie in some {z_T = 0} of the union, i.e. T ⊆ S.
        ensure(
            ps.iter().all(|s| strata.iter().any(|t| t.iter().all(|i| s.contains(i)))),
            || format!("{e}, k = {k}: E(u, {t}, 0) = {ps:?} not inside the union {strata:?}"),
        )?;
    }
    Ok(())
}

fn eset(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("eset");
    let inputs = slice_inputs(opts.seed, opts.cases.unwrap_or(100));
    r.run_cases(inputs.len(), |i| {
        let e = &inputs[i as usize];
        (1..=2).map(|k| eset_checks(e, k)).collect()
    });
    r
}

fn toric(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("toric");
    let count = opts.cases.unwrap_or(200);
    let inputs: Vec<TropicalExpr> = (0..count as u64)
        .map(|i| corpus::canonical_expr(&mut case_rng(opts.seed, TAG_TORIC, i), 3))
        .collect();
    let unresolved = std::sync::atomic::AtomicUsize::new(0);
    r.run_cases(inputs.len(), |i| {
        let e = &inputs[i as usize];
        (1..=2)
            .map(|k| {
                let inv = lift_err(toric_slice_invariant(e, k))?;
                if inv.slice_stratum_unresolved {
                    unresolved.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                }
                ensure(inv.holds, || format!("{e}, k = {k}: atoms on the slice: {:?}", inv.offending))
            })
            .collect()
    });
    r.notes.push(format!(
        "{} of {} (expression, k) pairs leave the stratum {{z'' = 0}} unresolved",
        unresolved.into_inner(),
        2 * inputs.len()
    ));
    r
}

/// Every exact mass of the anchor, example1, example2, product and lift
/// suites against Monte-Carlo, plus the grid check of one interior atom.
pub fn oracle_reports(opts: &SuiteOptions) -> Result<Vec<(String, OracleReport)>> {
    let samples = opts.samples.unwrap_or(1_000_000);
    let grid = opts.grid.unwrap_or(512);
    let mut jobs: Vec<(String, TropicalExpr)> = Vec::new();
    for (i, a) in anchor_inputs(opts.seed, 50).iter().enumerate() {
        jobs.push((format!("anchor {i}"), TropicalExpr::max_of_monomials(a)?));
    }
    for j in 1..=opts.truncate.unwrap_or(10) {
        jobs.push((format!("example1 J = {j}"), example1_partial_sum(&example1_alternating_rows(j))?));
    }
    jobs.push(("example1 two-row".into(), example1_partial_sum(&two_row_variant())?));
    let mut pairs = product_inputs(opts.seed, 50);
    pairs.push((
        TropicalExpr::max_of_monomials(&[int(2), int(3)])?,
        TropicalExpr::max_of_monomials(&[int(4), int(5)])?,
    ));
    for (i, (u1, u2)) in pairs.iter().enumerate() {
        jobs.push((format!("product {i}"), make_max(&[u1.embed(4, 0)?, u2.embed(4, 2)?])?));
    }
    for (i, (phi, n)) in lift_inputs(opts.seed, 25).iter().enumerate() {
        jobs.push((format!("lift {i}"), lift_to_subvariety(phi, *n)?.u));
    }

    let seed_for = |idx: usize| opts.seed.wrapping_mul(1_000_003).wrapping_add(idx as u64);
    let mut out = Vec::new();
    for (idx, (label, e)) in jobs.iter().enumerate() {
        out.push((label.clone(), mc_origin_mass(e, samples, seed_for(idx))?));
    }
    let k_max = opts.k.unwrap_or(100);
    for j in 1..=k_max {
        let term = example2_term(j, 2)?;
        let atoms = interior_atoms(&term);
        let [atom] = atoms.as_slice() else {
            return Err(Error::Invalid(format!("example2 term {j} has {} interior atoms", atoms.len())));
        };
        let hull = convex_hull(&term.exponents())?;
        let report = mc_volume(&hull, samples, seed_for(jobs.len() + j as usize))?.scaled(&factorial(2));
        if report.exact != atom.mass {
            return Err(Error::Invalid(format!("example2 term {j}: cell mass differs from atom mass")));
        }
        out.push((format!("example2 term {j}"), report));
    }
    let e = crate::dsl::parse("max(x1, x2, -1)", None)?;
    out.push((
        "grid max(x1, x2, -1)".into(),
        grid_real_ma(&e, &LogBox::cube(2, int(-2), rat(-1, 2)), grid)?,
    ));
    Ok(out)
}

fn oracle(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("oracle");
    match oracle_reports(opts) {
        Ok(reports) => {
            let worst = reports
                .iter()
                .filter(|(_, rep)| rep.std_error > 0.0)
                .map(|(_, rep)| (rep.estimate - to_f64(&rep.exact)).abs() / rep.std_error)
                .fold(0.0, f64::max);
            for (label, rep) in &reports {
                r.check(rep.pass, || {
                    format!(
                        "{label}: exact {} estimate {:.6} std error {:.2e}",
                        rep.exact, rep.estimate, rep.std_error
                    )
                });
            }
            r.notes.push(format!("{} reports; largest deviation {worst:.2} standard errors", reports.len()));
        }
        Err(e) => r.check(false, || e.to_string()),
    }
    r
}

fn geometry(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("geometry");
    let count = opts.cases.unwrap_or(100);
    let seed = opts.seed;
    r.run_cases(count, |i| {
        let n = 2 + (i % 2) as usize;
        let mut rng = case_rng(seed, TAG_POLYTOPE, i);
        let p = corpus::polytope(&mut rng, n);
        let q = corpus::polytope(&mut rng, n);
        let bm = (|| {
            let s = lift_err(minkowski_sum(&p, &q))?;
            let (a, b, c) = (p.volume(), q.volume(), s.volume());
            match cmp_root_sum(&c, &a, &b, n as u32) {
                Some(Ordering::Less) => Err(format!("Brunn-Minkowski fails: vol {c} vs {a}, {b}")),
                None => Err(format!("Brunn-Minkowski undecided: vol {c} vs {a}, {b}")),
                Some(_) => Ok(()),
            }
        })();
        let hv = ensure(p.vertices().iter().all(|v| p.contains(v)), || "H-representation misses a vertex".into());
        let lifted = corpus::lifted_points(&mut case_rng(seed, TAG_SUBDIVISION, i), n);
        let sub = regular_subdivision(&lifted);
        let total: Rational = sub.full_dimensional_cells().map(|c| c.polytope.volume()).sum();
        let pts: Vec<Vec<Rational>> = lifted.iter().map(|(a, _)| a.clone()).collect();
        let hull = convex_hull(&pts).map(|h| h.volume());
        let part = ensure(hull.as_ref().is_ok_and(|h| *h == total), || {
            format!("cells sum to {total}, hull volume {hull:?}")
        });
        vec![bm, hv, part]
    });
    r
}

fn bounds(opts: &SuiteOptions) -> SuiteReport {
    let mut r = SuiteReport::new("bounds");
    let count = opts.cases.unwrap_or(50);
    let seed = opts.seed;
    r.run_cases(count, |i| {
        let n = 2 + (i % 2) as usize;
        let mut rng = case_rng(seed, TAG_BOUNDS, i);
        let u = corpus::convenient_homogeneous(&mut rng, n);
        let v = corpus::convenient_homogeneous(&mut rng, n);
        let check = || -> std::result::Result<(), String> {
            let mass = |e: &TropicalExpr| {
                origin_mass(e)
                    .exact()
                    .cloned()
                    .ok_or_else(|| format!("{e} is not convenient"))
            };
            let sum = lift_err(make_sum(&[u.clone(), v.clone()], &[int(1), int(1)]))?;
            let (a, b, c) = (mass(&u)?, mass(&v)?, mass(&sum)?);
            ensure(c >= &a + &b, || format!("{u} + {v}: {c} < {a} + {b}"))?;
            ensure(cmp_root_sum(&c, &a, &b, n as u32) != Some(Ordering::Greater), || {
                format!("{u} + {v}: mass {c} above the Brunn-Minkowski bound from {a}, {b}")
            })?;
            if n == 2 {
                // m(λu + μv) = λ² m(u) + 2λμ mixed(u, v) + μ² m(v).
                let mixed = lift_err(mixed_origin_mass(&[u.clone(), v.clone()]))?;
                for (l, m) in [(int(1), int(1)), (int(2), int(1)), (rat(1, 2), int(3))] {
                    let s = lift_err(make_sum(&[u.clone(), v.clone()], &[l.clone(), m.clone()]))?;
                    let lhs = mass(&s)?;
                    let rhs = &l * &l * &a + int(2) * &l * &m * &mixed + &m * &m * &b;
                    ensure(lhs == rhs, || format!("polarization at ({l}, {m}): {lhs} vs {rhs}"))?;
                }
            }
            Ok(())
        };
        vec![check()]
    });
    // Bi-monomial mixed masses against min(ad, bc); deviations are recorded, not asserted.
    let mut deviations = 0;
    for i in 0..20u64 {
        let mut rng = case_rng(seed, TAG_BOUNDS + 100, i);
        let (a, b, c, d) = (
            corpus::positive_rational(&mut rng),
            corpus::positive_rational(&mut rng),
            corpus::positive_rational(&mut rng),
            corpus::positive_rational(&mut rng),
        );
        let u = TropicalExpr::max_of_monomials(&[a.clone(), b.clone()]).expect("positive");
        let v = TropicalExpr::max_of_monomials(&[c.clone(), d.clone()]).expect("positive");
        let expected = (&a * &d).min(&b * &c);
        match mixed_origin_mass(&[u, v]) {
            Ok(m) if m == expected => {}
            Ok(m) => {
                deviations += 1;
                r.notes.push(format!("mixed mass of ({a}, {b}), ({c}, {d}) is {m}, min(ad, bc) = {expected}"));
            }
            Err(e) => r.check(false, || e.to_string()),
        }
    }
    r.notes.push(format!("bi-monomial mixed masses: {deviations} of 20 deviate from min(ad, bc)"));
    r
}

/// Every atom has positive mass and the total is finite; used by tests.
pub fn masses_positive(e: &TropicalExpr) -> bool {
    crate::measure::total_measure(e)
        .atoms
        .iter()
        .all(|a| a.mass.is_positive())
}
