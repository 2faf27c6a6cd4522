//! Acceptance run: one PASS/FAIL line per criterion at default sizes.
//! Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use tropma_core::suites::{run_suite, SuiteOptions};

const CRITERIA: &[(u32, &str, &str)] = &[
    (1, "anchor", "origin mass of max(a_i x_i) = prod a_i, exact, 50 vectors"),
    (2, "example1", "alternating partial sums inside the mass interval, J = 1..10, exact"),
    (3, "infinity", "slices at x1 = -inf and x2 = -inf identically -inf, J = 1..10"),
    (4, "example2", "lower bound equals H_k for k = 1, 4, 100 and H_2k - H_k >= 1/2, exact"),
    (5, "product", "product measure identity, 50 pairs plus max(2x1,3x2) x max(4x3,5x4) = 120, exact"),
    (6, "lift", "lift to {z'' = 0} is the pushforward, 25 cases, exact"),
    (7, "phi", "phi limit constant, zero-block criterion, convergence, 100 expressions x k = 1, 2"),
    (8, "eset", "E(u, t, 0) pluripolar iff phi = 0, 100 expressions x k = 1, 2"),
    (9, "toric", "no atoms on torus fibres of the slice, 200 expressions x k = 1, 2"),
    (10, "oracle", "Monte-Carlo within 3 sigma (10^6 samples), grid within 1% at 512"),
    (11, "geometry", "Brunn-Minkowski exact on 100 pairs, subdivision partition, H/V round trip"),
];

fn main() -> ExitCode {
    let opts = SuiteOptions::default();
    let mut failed = 0;
    for &(id, suite, text) in CRITERIA {
        let start = Instant::now();
        let report = match run_suite(suite, &opts) {
            Ok(r) => r,
            Err(e) => {
                println!("FAIL criterion {id:>2} [{suite}] {text}: {e}");
                failed += 1;
                continue;
            }
        };
        let secs = start.elapsed().as_secs_f64();
        let status = if report.passed() { "PASS" } else { "FAIL" };
        println!(
            "{status} criterion {id:>2} [{suite}] {text} ({} checks, {} failed, {secs:.1}s)",
            report.cases,
            report.failures.len()
        );
        for f in report.failures.iter().take(5) {
            println!("     failure: {f}");
        }
        if report.failures.len() > 5 {
            println!("     ... {} more", report.failures.len() - 5);
        }
        for n in report.notes.iter().filter(|n| !n.starts_with("J = ") || !report.passed()) {
            println!("     note: {n}");
        }
        if !report.passed() {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
