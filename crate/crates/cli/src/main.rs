//! `matchdens`: command-line front end. Every subcommand prints a run
//! report (`--format json`) or a flattened key/value table.
//!
//! Exit status: 0 on success (for `verify-all`, only if every check
//! passed), 1 on a computational error or failed check, 2 on a usage error.

use std::fmt::Write as _;
use std::io::{IsTerminal, Write as _};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use matchdens::density::{
    approximate_matching_density, approximate_zero_density, preset, preset_names, w_density, zero_density, Convention, PrimeWindow,
};
use matchdens::dirichletden::{compare_characters, DEFAULT_S_VALUES};
use matchdens::ellstat::{chebotarev_histogram, parse_curve_list, Curve, HistogramOptions};
use matchdens::gl2fp::{class_type_fractions, Gl2Fp};
use matchdens::groupcore::{character_table_small, inner_product, named, zero_fraction, CycValue, CycValueDoc, GroupDoc};
use matchdens::rational::{parse_rational, to_f64, RationalDoc};
use matchdens::sieveshift::{almost_prime_scan, find_shift, QuadPoly, ShiftDoc};
use matchdens::verify::{self, VerifyOptions};

#[derive(Parser, Serialize)]
#[command(name = "matchdens", version, about = "Exact and empirical matching densities of Galois representations")]
struct Cli {
    /// Output format; defaults to `table` on a terminal and `json` otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for parallel loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 20_240_601)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ModeArg {
    Zero,
    Matching,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum ConventionArg {
    /// Base density is `w = prod (p-1)/p`.
    Nonzero,
    /// Base density is `1 - w`.
    Zero,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Nonzero => Convention::NonzeroProportion,
            ConventionArg::Zero => Convention::ZeroProportion,
        }
    }
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Exact nonzero and zero densities of the Steinberg product over consecutive primes.
    Density(DensityArgs),
    /// Plan a prime window (and twist) whose density is within eps of a target.
    Approx(ApproxArgs),
    /// Class-type fractions and the Steinberg character of GL2(F_p).
    Gl2(Gl2Args),
    /// Densities realised by fixed group constructions.
    Fiber(FiberArgs),
    /// Character table of a small named group.
    Chartable(ChartableArgs),
    /// Shift a quadratic to avoid small prime factors, optionally scanning for almost primes.
    Shift(ShiftArgs),
    /// Frobenius class frequencies mod p for an elliptic curve.
    Ellstat(EllstatArgs),
    /// Exact and empirical matching density of two Dirichlet characters.
    Dirichlet(DirichletArgs),
    /// Run the reproduction checks.
    VerifyAll(VerifyArgs),
}

#[derive(Args, Serialize)]
struct DensityArgs {
    /// Comma-separated consecutive primes, e.g. `11,13`.
    #[arg(long, value_delimiter = ',', required = true)]
    primes: Vec<u64>,
}

#[derive(Args, Serialize)]
struct ApproxArgs {
    /// `p/q`, an integer or a decimal.
    #[arg(long)]
    target: String,
    #[arg(long)]
    eps: String,
    #[arg(long, value_enum, default_value = "matching")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "nonzero")]
    convention: ConventionArg,
}

#[derive(Args, Serialize)]
struct Gl2Args {
    #[arg(long)]
    p: u64,
    /// Include the Steinberg zero fraction and norm check.
    #[arg(long)]
    report: bool,
}

#[derive(Args, Serialize)]
struct FiberArgs {
    /// One of `tetrahedral-17-32`, `tetrahedral-direct`, `serre-k:<k>`, `steinberg:<p>`.
    #[arg(long)]
    preset: String,
}

#[derive(Args, Serialize)]
struct ChartableArgs {
    /// `trivial`, `cyclic:n`, `dihedral:n`, `dicyclic:n`, `q8`, `s3`, `d4`, `sl2f3`, `gl2fp:p`, `heisenberg:p`.
    #[arg(long)]
    group: String,
}

#[derive(Args, Serialize)]
struct ShiftArgs {
    /// Coefficients `a,b,c` of `a x^2 + b x + c`.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true, required = true)]
    poly: Vec<i64>,
    #[arg(long = "T", visible_alias = "t")]
    t: u64,
    /// Scan `F(n)` for `1 <= n <= SCAN` for primes and semiprimes.
    #[arg(long)]
    scan: Option<u64>,
}

#[derive(Args, Serialize)]
struct EllstatArgs {
    #[arg(long, allow_hyphen_values = true, required_unless_present = "curves")]
    a: Option<i64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "curves")]
    b: Option<i64>,
    #[arg(long)]
    conductor: Option<u64>,
    /// Text file with one curve `a b [N] [label]` per line.
    #[arg(long, conflicts_with_all = ["a", "b", "conductor"])]
    curves: Option<std::path::PathBuf>,
    #[arg(long)]
    p: u64,
    #[arg(long)]
    qmax: u64,
    /// Test repeated eigenvalue 1 for scalar Frobenius (seeded by `--seed`).
    #[arg(long)]
    resolve_scalars: bool,
}

#[derive(Args, Serialize)]
struct DirichletArgs {
    #[arg(long)]
    modulus: u64,
    /// Character index: mixed-radix digits are the exponents on the generators.
    #[arg(long)]
    chi: u64,
    #[arg(long)]
    chi2: u64,
    #[arg(long)]
    xmax: u64,
    /// Strictly decreasing values in (1, 2].
    #[arg(long, value_delimiter = ',')]
    s: Option<Vec<f64>>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    /// Run only these check ids (comma-separated), e.g. `1,2,4a`.
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
    #[arg(long, default_value_t = 100)]
    planner_targets: usize,
    #[arg(long, default_value_t = 200_000)]
    ell_qmax: u64,
    #[arg(long, default_value_t = 1_000_000)]
    dirichlet_xmax: u64,
    #[arg(long, default_value_t = 10_000)]
    scan_nmax: u64,
}

#[derive(Serialize)]
struct RunReport {
    command: Vec<String>,
    configuration: Value,
    result: Value,
    wall_time_seconds: f64,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Failure> {
    serde_json::to_value(v).map_err(Failure::from)
}

/// Runs one subcommand; the flag says whether it counts as a success.
fn dispatch(cli: &Cli) -> Result<(Value, bool), Failure> {
    let value = match &cli.command {
        Command::Density(a) => {
            let window = PrimeWindow::from_primes_unchecked_bound(a.primes.clone())?;
            json!({
                "primes": window.primes,
                "k": window.k,
                "w": RationalDoc::from(&w_density(&window)?),
                "zero": RationalDoc::from(&zero_density(&window)?),
            })
        }
        Command::Approx(a) => {
            let target = parse_rational(&a.target)?;
            let eps = parse_rational(&a.eps)?;
            let plan = match a.mode {
                ModeArg::Zero => approximate_zero_density(&target, &eps, a.convention.into())?,
                ModeArg::Matching => approximate_matching_density(&target, &eps, a.convention.into())?,
            };
            to_value(&plan)?
        }
        Command::Gl2(a) => {
            let fractions = class_type_fractions(a.p)?;
            let mut out = json!({
                "p": a.p,
                "class_type_fractions": fractions
                    .iter()
                    .map(|(k, v)| (k.name().to_string(), json!(RationalDoc::from(v))))
                    .collect::<serde_json::Map<_, _>>(),
            });
            if a.report {
                let g = Gl2Fp::shared(a.p)?;
                let st = g.steinberg_character()?;
                out["order"] = json!(g.group().order());
                out["steinberg_zero_fraction"] = to_value(&RationalDoc::from(&zero_fraction(&st)))?;
                out["steinberg_norm"] = to_value(&CycValueDoc::from(&inner_product(&st, &st)?))?;
                out["steinberg_norm_is_one"] = json!(inner_product(&st, &st)? == CycValue::one());
            }
            out
        }
        Command::Fiber(a) => {
            let p = preset(&a.preset)?;
            json!({
                "preset": p.name,
                "mode": p.mode,
                "value": RationalDoc::from(&p.value),
                "description": p.description,
                "known_presets": preset_names(),
            })
        }
        Command::Chartable(a) => {
            let g = named::by_name(&a.group)?;
            let table = character_table_small(&g)?;
            let characters: Vec<Vec<CycValueDoc>> = table
                .characters()
                .iter()
                .map(|chi| chi.values().iter().map(CycValueDoc::from).collect())
                .collect();
            json!({
                "group": GroupDoc::new(&g)?,
                "degrees": table.degrees(),
                "characters": characters,
            })
        }
        Command::Shift(a) => {
            let [fa, fb, fc] = <[i64; 3]>::try_from(a.poly.as_slice())
                .map_err(|_| Failure(format!("--poly needs three coefficients, got {}", a.poly.len())))?;
            let f = QuadPoly::new(fa, fb, fc)?;
            let spec = find_shift(&f, a.t)?;
            let mut out = to_value(&ShiftDoc::from(&spec))?;
            if let Some(n_max) = a.scan {
                let scan = almost_prime_scan(&spec.shifted, n_max)?;
                out["scan"] = to_value(&scan)?;
            }
            out
        }
        Command::Ellstat(a) => {
            let curves = match &a.curves {
                Some(path) => parse_curve_list(&std::fs::read_to_string(path)?)?,
                None => {
                    let c = Curve::new(a.a.expect("required"), a.b.expect("required"))?;
                    vec![match a.conductor {
                        Some(n) => c.with_conductor(n)?,
                        None => c,
                    }]
                }
            };
            let opts = HistogramOptions {
                resolve_scalars: a.resolve_scalars.then_some(cli.seed),
            };
            let reports = curves
                .iter()
                .map(|c| chebotarev_histogram(c, a.p, a.qmax, opts))
                .collect::<Result<Vec<_>, _>>()?;
            if reports.len() == 1 {
                to_value(&reports[0])?
            } else {
                to_value(&reports)?
            }
        }
        Command::Dirichlet(a) => {
            let s = a.s.clone().unwrap_or_else(|| DEFAULT_S_VALUES.to_vec());
            to_value(&compare_characters(a.modulus, a.chi, a.chi2, a.xmax, &s)?)?
        }
        Command::VerifyAll(a) => {
            let known = verify::check_ids();
            if let Some(bad) = a.only.iter().find(|id| !known.contains(&id.as_str())) {
                return Err(Failure(format!("unknown check `{bad}`; known: {}", known.join(", "))));
            }
            let opts = VerifyOptions {
                seed: cli.seed,
                planner_targets: a.planner_targets,
                ell_q_max: a.ell_qmax,
                dirichlet_x_max: a.dirichlet_xmax,
                scan_n_max: a.scan_nmax,
            };
            let outcomes = verify::run(&opts, &a.only);
            let all = outcomes.iter().all(|o| o.passed);
            return Ok((json!({ "all_passed": all, "checks": outcomes }), all));
        }
    };
    Ok((value, true))
}

/// Flattens nested JSON into `path = value` lines; `{"num","den"}` pairs
/// print as `num/den`.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) if m.len() == 2 && m.contains_key("num") && m.contains_key("den") => {
            let (n, d) = (m["num"].as_str().unwrap_or("?"), m["den"].as_str().unwrap_or("?"));
            let text = if d == "1" {
                n.to_string()
            } else if n.len() + d.len() > 60 {
                // exact value stays in the JSON output
                let approx = parse_rational(&format!("{n}/{d}")).map(|r| to_f64(&r)).unwrap_or(f64::NAN);
                format!("{approx:.12} ({}-digit numerator, {}-digit denominator)", n.len(), d.len())
            } else {
                format!("{n}/{d}")
            };
            out.push((prefix.to_string(), text));
        }
        Value::Object(m) if m.len() == 2 && m.contains_key("conductor") && m.contains_key("coeffs") => {
            out.push((prefix.to_string(), render_cyclotomic(m["conductor"].as_u64().unwrap_or(0), &m["coeffs"])));
        }
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let items: Vec<String> = xs.iter().map(scalar).collect();
            let text = if items.len() > 16 {
                format!("{}, ..., {} ({} items)", items[..8].join(", "), items[items.len() - 2..].join(", "), items.len())
            } else {
                items.join(", ")
            };
            out.push((prefix.to_string(), text));
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

/// `sum c_i z^i` with `z = exp(2 pi i / conductor)`.
fn render_cyclotomic(conductor: u64, coeffs: &Value) -> String {
    let mut rows = Vec::new();
    let terms: Vec<String> = coeffs
        .as_array()
        .into_iter()
        .flatten()
        .enumerate()
        .filter_map(|(i, c)| {
            rows.clear();
            flatten("", c, &mut rows);
            let c = rows.pop().map(|r| r.1).unwrap_or_default();
            match (c.as_str(), i) {
                ("0", _) => None,
                (_, 0) => Some(c),
                ("1", _) => Some(format!("z{conductor}^{i}")),
                _ => Some(format!("({c}) z{conductor}^{i}")),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_table(report: &RunReport) -> String {
    let mut out = String::new();
    if let Some(checks) = report.result.get("checks").and_then(Value::as_array) {
        for c in checks {
            let mark = if c["passed"].as_bool() == Some(true) { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{mark} {:>3}  {:<55} {:>7.2}s  {}",
                scalar(&c["id"]),
                scalar(&c["title"]),
                c["seconds"].as_f64().unwrap_or(0.0),
                scalar(&c["detail"])
            );
        }
    } else {
        let mut rows = Vec::new();
        flatten("", &report.result, &mut rows);
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
    }
    let _ = writeln!(out, "wall time: {:.3}s", report.wall_time_seconds);
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let format = cli.format.unwrap_or(if std::io::stdout().is_terminal() {
        Format::Table
    } else {
        Format::Json
    });
    let start = Instant::now();
    let (result, ok) = match dispatch(&cli) {
        Ok(r) => r,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let report = RunReport {
        command: std::env::args().collect(),
        configuration: serde_json::to_value(&cli).expect("configuration serializes"),
        result,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Table => render_table(&report),
    };
    // a closed pipe (e.g. `| head`) is not an error
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
