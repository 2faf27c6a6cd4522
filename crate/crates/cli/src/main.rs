//! `tropma`: Monge-Ampère masses of tropical plurisubharmonic functions.
//!
//! Exit status: 0 on success, 1 when a check suite fails, 2 on usage or
//! input errors.

mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use tropma_core::measure::{
    example1_alternating_rows, example1_mass_interval, example2_lower_bound, mass_report, total_measure, OriginMass,
};
use tropma_core::oracle::{grid_real_ma, mc_origin_mass, LogBox};
use tropma_core::rational::{parse_rational, to_f64};
use tropma_core::slice::{
    class_e_phi_zero, e_set, e_set_union, lelong_at_origin, slice_lelong_profile, ESet, PhiFunction,
};
use tropma_core::suites::{run_suite, SuiteOptions, SuiteReport, DEFAULT_SEED, SUITES};
use tropma_core::{Error, Rational, TropicalExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "tropma", version, about = "Monge-Ampère masses of tropical psh functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Read the expression from a file (JSON or DSL).
    #[arg(long, global = true)]
    file: Option<PathBuf>,

    #[arg(long, global = true, env = "TROPMA_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Monte-Carlo sample count.
    #[arg(long, global = true)]
    samples: Option<u64>,

    /// Number of random cases in a check suite.
    #[arg(long, global = true)]
    pairs: Option<usize>,

    /// Grid resolution per axis for the real Monge-Ampère estimate.
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Slice dimension, or the index of the divergent family.
    #[arg(long, global = true)]
    k: Option<u32>,

    /// Number of variables.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Number of series terms kept.
    #[arg(long, global = true)]
    truncate: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mass at the origin, in the interior and on coordinate strata.
    Mass { expr: Option<String> },
    /// Every atom of the Monge-Ampère measure.
    Measure { expr: Option<String> },
    /// Lelong number at the origin and, with --k, slice Lelong numbers.
    Lelong { expr: Option<String> },
    /// Limit of the slice function phi for the split (z', z'') with |z'| = k.
    Phi { expr: Option<String> },
    /// Points z' where the slice Lelong number is at least t (all t > 0 by default).
    Eset {
        expr: Option<String>,
        #[arg(long)]
        t: Option<String>,
    },
    /// Run a verification suite; `list` prints the names, `all` runs every suite.
    Check { suite: String },
    /// Mass interval of the alternating two-variable series.
    Example1,
    /// Exact interior mass of the first k terms of the divergent family.
    Example2,
    /// Monte-Carlo estimate of the origin mass, and with --grid a grid estimate.
    Oracle {
        expr: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "-2")]
        lo: String,
        #[arg(long, allow_hyphen_values = true, default_value = "-1/2")]
        hi: String,
    },
}

enum Output {
    Json(Value),
    Text(String),
    Csv(String),
}

struct Outcome {
    output: Output,
    failed: bool,
}

impl From<Output> for Outcome {
    fn from(output: Output) -> Self {
        Outcome { output, failed: false }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let text = match outcome.output {
                Output::Json(v) => serde_json::to_string_pretty(&v).expect("serializable"),
                Output::Text(s) | Output::Csv(s) => s,
            };
            // A closed pipe (e.g. `| head`) is not an error.
            let _ = std::io::stdout().lock().write_all(ensure_newline(text).as_bytes());
            if outcome.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn ensure_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn expr_arg(cli: &Cli, inline: &Option<String>) -> Result<TropicalExpr, Error> {
    input::read_expr(inline.as_deref(), cli.file.as_deref(), cli.n)
}

fn k_arg(cli: &Cli, e: &TropicalExpr) -> Result<usize, Error> {
    let k = cli.k.ok_or_else(|| Error::Invalid("--k is required".into()))? as usize;
    if k == 0 || k >= e.n() {
        return Err(Error::Invalid(format!("--k must lie in 1..{}", e.n())));
    }
    Ok(k)
}

fn no_csv(cli: &Cli, what: &str) -> Result<(), Error> {
    if cli.format == Format::Csv {
        return Err(Error::Invalid(format!("csv output is not available for {what}")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Mass { expr } => {
            no_csv(cli, "mass")?;
            let report = mass_report(&expr_arg(cli, expr)?);
            Ok(match cli.format {
                Format::Text => Output::Text(match &report.origin {
                    OriginMass::Exact(m) => m.to_string(),
                    OriginMass::NotConvenient { lower_bound, .. } => {
                        format!(">= {lower_bound} (Newton diagram not convenient)")
                    }
                }),
                _ => Output::Json(report.to_json()),
            }
            .into())
        }
        Command::Measure { expr } => {
            let m = total_measure(&expr_arg(cli, expr)?);
            Ok(match cli.format {
                Format::Json => Output::Json(m.to_json()),
                Format::Csv => Output::Csv(m.to_csv()),
                Format::Text => {
                    let mut lines: Vec<String> = m
                        .atoms
                        .iter()
                        .map(|a| {
                            let x: Vec<String> = a.location.iter().map(ToString::to_string).collect();
                            format!("({}) {}", x.join(", "), a.mass)
                        })
                        .collect();
                    for s in &m.unresolved_strata {
                        let s: Vec<String> = s.iter().map(|i| format!("x{}", i + 1)).collect();
                        lines.push(format!("unresolved: {} = -inf", s.join(", ")));
                    }
                    Output::Text(lines.join("\n"))
                }
            }
            .into())
        }
        Command::Lelong { expr } => {
            no_csv(cli, "lelong")?;
            let e = expr_arg(cli, expr)?;
            let nu = lelong_at_origin(&e);
            let profile = match cli.k {
                Some(_) => Some(slice_lelong_profile(&e, k_arg(cli, &e)?)?),
                None => None,
            };
            Ok(match cli.format {
                Format::Text => {
                    let mut s = format!("origin {nu}");
                    if let Some(p) = &profile {
                        s += &format!("\ngeneric slice {}", p.generic);
                        for (set, v) in &p.strata {
                            let set: Vec<String> = set.iter().map(|i| format!("z{}", i + 1)).collect();
                            s += &format!("\n{} = 0: {v}", set.join(", "));
                        }
                    }
                    Output::Text(s)
                }
                _ => Output::Json(json!({
                    "origin": nu.to_string(),
                    "slice": profile.map(|p| p.to_json()),
                })),
            }
            .into())
        }
        Command::Phi { expr } => {
            no_csv(cli, "phi")?;
            let e = expr_arg(cli, expr)?;
            let k = k_arg(cli, &e)?;
            let limit = PhiFunction::new(&e, k)?.limit_value();
            let zero = class_e_phi_zero(&e, k)?;
            Ok(match cli.format {
                Format::Text => Output::Text(limit.to_string()),
                _ => Output::Json(json!({
                    "k": k,
                    "limit": limit.to_string(),
                    "zero_block": zero,
                })),
            }
            .into())
        }
        Command::Eset { expr, t } => {
            no_csv(cli, "eset")?;
            let e = expr_arg(cli, expr)?;
            let k = k_arg(cli, &e)?;
            let set = match t {
                Some(t) => {
                    let t = parse_rational(t)?;
                    if t <= Rational::zero() {
                        return Err(Error::Invalid("--t must be positive".into()));
                    }
                    e_set(&e, k, &t)?
                }
                None => e_set_union(&e, k)?,
            };
            Ok(match cli.format {
                Format::Text => Output::Text(match &set {
                    ESet::All => "all".to_string(),
                    ESet::Strata(v) if v.is_empty() => "empty".to_string(),
                    ESet::Strata(v) => v
                        .iter()
                        .map(|s| {
                            let s: Vec<String> = s.iter().map(|i| format!("z{} = 0", i + 1)).collect();
                            s.join(", ")
                        })
                        .collect::<Vec<_>>()
                        .join("\n"),
                }),
                _ => {
                    let mut v = set.to_json();
                    v["pluripolar"] = json!(set.is_pluripolar());
                    Output::Json(v)
                }
            }
            .into())
        }
        Command::Check { suite } => check(cli, suite),
        Command::Example1 => {
            no_csv(cli, "example1")?;
            let j = cli.truncate.unwrap_or(10);
            if j == 0 {
                return Err(Error::Invalid("--truncate must be at least 1".into()));
            }
            let iv = example1_mass_interval(&example1_alternating_rows(j))?;
            Ok(match cli.format {
                Format::Text => Output::Text(format!(
                    "J = {j}: mass {} in [{}, {:.9}] ({})",
                    iv.mass,
                    iv.lower,
                    iv.upper(),
                    if iv.inside { "inside" } else { "outside" }
                )),
                _ => {
                    let mut v = iv.to_json();
                    v["J"] = json!(j);
                    Output::Json(v)
                }
            }
            .into())
        }
        Command::Example2 => {
            no_csv(cli, "example2")?;
            let k = cli.k.unwrap_or(100);
            if k == 0 {
                return Err(Error::Invalid("--k must be at least 1".into()));
            }
            let n = cli.n.unwrap_or(2);
            let m = example2_lower_bound(k, n)?;
            Ok(match cli.format {
                Format::Text => Output::Text(format!("H_{k} = {m} ≈ {:.6}", to_f64(&m))),
                _ => Output::Json(json!({
                    "k": k,
                    "n": n,
                    "mass": m.to_string(),
                    "decimal": to_f64(&m),
                })),
            }
            .into())
        }
        Command::Oracle { expr, lo, hi } => {
            no_csv(cli, "oracle")?;
            let e = expr_arg(cli, expr)?;
            let samples = cli.samples.unwrap_or(1_000_000);
            let mc = mc_origin_mass(&e, samples, cli.seed)?;
            let grid = match cli.grid {
                Some(r) => {
                    let region = LogBox::cube(e.n(), parse_rational(lo)?, parse_rational(hi)?);
                    Some(grid_real_ma(&e, &region, r)?)
                }
                None => None,
            };
            let failed = !mc.pass || grid.as_ref().is_some_and(|g| !g.pass);
            let output = match cli.format {
                Format::Text => {
                    let mut s = format!(
                        "origin: exact {} estimate {:.6} ± {:.2e} {}",
                        mc.exact,
                        mc.estimate,
                        mc.std_error,
                        verdict(mc.pass)
                    );
                    if let Some(g) = &grid {
                        s += &format!("\ninterior: exact {} estimate {:.6} {}", g.exact, g.estimate, verdict(g.pass));
                    }
                    Output::Text(s)
                }
                _ => Output::Json(json!({
                    "origin": mc.to_json(),
                    "interior": grid.map(|g| g.to_json()),
                })),
            };
            Ok(Outcome { output, failed })
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn check(cli: &Cli, suite: &str) -> Result<Outcome, Error> {
    no_csv(cli, "check")?;
    if suite == "list" {
        return Ok(match cli.format {
            Format::Text => Output::Text(
                SUITES
                    .iter()
                    .map(|(name, about)| format!("{name:<10} {about}"))
                    .collect::<Vec<_>>()
                    .join("\n"),
            ),
            _ => Output::Json(json!(SUITES
                .iter()
                .map(|(name, about)| json!({ "suite": name, "description": about }))
                .collect::<Vec<_>>())),
        }
        .into());
    }
    let opts = SuiteOptions {
        seed: cli.seed,
        cases: cli.pairs,
        samples: cli.samples,
        grid: cli.grid,
        k: cli.k,
        truncate: cli.truncate,
    };
    let names: Vec<&str> = if suite == "all" {
        SUITES.iter().map(|(n, _)| *n).collect()
    } else {
        vec![suite]
    };
    let reports = names
        .iter()
        .map(|name| run_suite(name, &opts))
        .collect::<Result<Vec<SuiteReport>, Error>>()?;
    let failed = reports.iter().any(|r| !r.passed());
    for r in reports.iter().filter(|r| !r.passed()) {
        for f in &r.failures {
            eprintln!("{}: {f}", r.name);
        }
    }
    let output = match cli.format {
        Format::Text => Output::Text(reports.iter().map(SuiteReport::summary).collect::<Vec<_>>().join("\n")),
        _ if reports.len() == 1 => Output::Json(reports[0].to_json()),
        _ => Output::Json(json!(reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>())),
    };
    Ok(Outcome { output, failed })
}
