//! Command-line front end for `slit-core`: evaluate formulas, tabulate them,
//! run Monte Carlo experiments, verification suites and the dependence probe.
//!
//! Exit codes: 0 success, 1 numerical or suite failure, 2 bad arguments.

pub mod error;
pub mod format;
pub mod params;
pub mod registry;
pub mod suites;

use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use slit_core::hyperbolic::{conjecture_probe, estimate_functional_limit, probe_calibration, HorizonPolicy, ProbeSettings};
use slit_core::mc::{
    estimate_gauge, estimate_survival, sample_hit_places_exact, simulate_hits, Execution, MCConfig, MCEstimate,
};
use slit_core::{Convention, QuadSpec};

pub use error::CliError;
use format::{csv_row, sig, Metadata, DEFAULT_PRECISION};
use params::{parse_axis, parse_f64, parse_point, Params};
use registry::Formula;

/// Environment variable holding the worker count for Monte Carlo runs.
pub const WORKERS_ENV: &str = "SLITBM_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "slitbm", version, about = "Hitting laws of planar Brownian motion on a slit")]
struct Cli {
    /// Significant digits of printed values.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: usize,
    #[arg(long, global = true, value_enum, default_value_t = Output::Csv)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one formula: `eval h1 --x 1 --z -1`.
    Eval {
        target: String,
        /// Relative quadrature tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Tabulate a formula over grids: `table h1 --x 0.5:2:4 --z -1,-2`.
    Table {
        target: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// List the formulas known to `eval` and `table`.
    List,
    /// Monte Carlo experiments.
    Mc(McArgs),
    /// Run a verification suite; exits 0 iff every check passes.
    Verify {
        /// One of kernels, bessel, stable, green, killed, hyperbolic, mc-agreement, or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Replaces the default bound of the deterministic checks.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Dependence probe between `A_y(inf)` and the exit height, as a JSON report.
    Probe {
        #[arg(long, default_value_t = 2.0)]
        mu: f64,
        #[arg(long, default_value_t = 1.0)]
        y: f64,
        #[arg(long, default_value_t = 100_000)]
        paths: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        resamples: usize,
        /// Exit level as a fraction of `y`.
        #[arg(long, default_value_t = (-1.0f64).exp())]
        level_ratio: f64,
        /// Run the statistics on synthetic independent inputs instead.
        #[arg(long)]
        calibrate: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum McKind {
    /// Raw exit samples, one row per path.
    Hits,
    /// `P(tau > t)`.
    Survival,
    /// `E exp(-rate tau)`.
    Gauge,
    /// Exit places from the conformal sampler.
    Exact,
    /// Mean of the truncated `A_y(inf)`.
    Functional,
}

#[derive(Debug, clap::Args)]
struct McArgs {
    #[arg(value_enum)]
    kind: McKind,
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    start: String,
    #[arg(long, default_value_t = 100_000)]
    paths: u64,
    #[arg(long, default_value_t = 1e-4)]
    step: f64,
    #[arg(long, default_value_t = 50.0)]
    horizon: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Variance per unit time per coordinate: 2 for VAR2T, 1 for VAR1T.
    #[arg(long, default_value_t = 2.0)]
    sigma2: f64,
    #[arg(long, default_value_t = 0.0)]
    drift: f64,
    /// Time for `survival`.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Rate for `gauge`.
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
    /// Drift and start height for `functional`.
    #[arg(long, default_value_t = 2.0)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    y: f64,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return if code == 0 { 0 } else { 2 };
        }
    };
    if let Err(e) = configure_workers() {
        let _ = writeln!(err, "error: {e}");
        return e.exit_code();
    }
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn configure_workers() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("{WORKERS_ENV} must be a positive integer, got {raw:?}")))?;
    // the global pool can only be set once per process; later calls keep the first size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let digits = cli.precision;
    if digits == 0 || digits > 17 {
        return Err(CliError::Usage(format!("--precision must lie in 1..=17, got {digits}")));
    }
    match &cli.command {
        Command::Eval { target, tol, params } => {
            let (params, opts) = split_options(params, *tol, digits, cli.output)?;
            eval(target, &params, &opts, out, err)
        }
        Command::Table { target, tol, params } => {
            let (params, opts) = split_options(params, *tol, digits, cli.output)?;
            table(target, &params, &opts, out)
        }
        Command::List => {
            csv_row(out, &["name".into(), "function".into(), "params".into(), "convention".into()])?;
            for f in registry::FORMULAS {
                csv_row(out, &[f.name.into(), f.function.into(), f.params.join(" "), f.tag().into()])?;
            }
            Ok(0)
        }
        Command::Mc(args) => mc(args, digits, cli.output, out),
        Command::Verify { suite, tol, seed } => verify(suite, *tol, *seed, digits, cli.output, out),
        Command::Probe { mu, y, paths, seed, resamples, level_ratio, calibrate } => {
            let mut meta = Metadata::new("probe");
            meta.push("convention", Convention::Var2T.tag()).push("seed", seed.to_string());
            let body = if *calibrate {
                meta.push("calibration_n", paths.to_string()).push("resamples", resamples.to_string());
                let stats = probe_calibration(*paths as usize, *resamples, *seed)?;
                json!({ "meta": meta.to_json(), "calibration": stats, "inside_null": stats.inside_null() })
            } else {
                let settings = ProbeSettings { level_ratio: *level_ratio, resamples: *resamples, ..ProbeSettings::default() };
                meta.push("mu", mu.to_string())
                    .push("y", y.to_string())
                    .push("paths", paths.to_string())
                    .push("resamples", resamples.to_string())
                    .push("level_ratio", level_ratio.to_string())
                    .push("tail_eps", settings.policy.tail_eps.to_string())
                    .push("dt", settings.policy.dt.to_string());
                let report = conjecture_probe(*mu, *y, *paths, *seed, &settings, Execution::default())?;
                json!({ "meta": meta.to_json(), "report": report })
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
            Ok(0)
        }
    }
}

/// Output options for `eval` and `table`, which may also appear after the target.
#[derive(Clone, Copy)]
struct FormulaOptions {
    spec: QuadSpec,
    digits: usize,
    output: Output,
}

fn split_options(raw: &[String], tol: Option<f64>, digits: usize, output: Output) -> Result<(Params, FormulaOptions), CliError> {
    let mut params = Params::parse(raw)?;
    let tol = match params.take("tol") {
        Some(v) => Some(parse_f64("tol", &v)?),
        None => tol,
    };
    let digits = match params.take("precision") {
        Some(v) => v
            .parse()
            .ok()
            .filter(|d| (1..=17).contains(d))
            .ok_or_else(|| CliError::Usage(format!("--precision must lie in 1..=17, got {v:?}")))?,
        None => digits,
    };
    let output = match params.take("output") {
        Some(v) => Output::from_str(&v, true).map_err(|_| CliError::Usage(format!("--output must be csv or json, got {v:?}")))?,
        None => output,
    };
    Ok((params, FormulaOptions { spec: quad_spec(tol)?, digits, output }))
}

fn quad_spec(tol: Option<f64>) -> Result<QuadSpec, CliError> {
    let Some(tol) = tol else {
        return Ok(QuadSpec::default());
    };
    if !(tol > 0.0 && tol < 1.0) {
        return Err(CliError::Usage(format!("--tol must lie in (0, 1), got {tol}")));
    }
    let spec = QuadSpec::default().with_rel_tol(tol).with_abs_tol(tol * 1e-2);
    spec.validate()?;
    Ok(spec)
}

fn resolve(target: &str) -> Result<&'static Formula, CliError> {
    registry::lookup(target).ok_or_else(|| {
        CliError::Usage(format!("unknown formula {target:?}; known: {}", registry::names().join(", ")))
    })
}

/// Checks that exactly the formula's parameters were given, before anything is evaluated.
fn check_keys(f: &Formula, params: &Params) -> Result<(), CliError> {
    if let Some(extra) = params.keys().find(|k| !f.params.contains(k)) {
        return Err(CliError::Usage(format!("{} has no parameter {extra:?} (takes {})", f.name, f.params.join(", "))));
    }
    if let Some(missing) = f.params.iter().find(|p| params.get(p).is_none()) {
        return Err(CliError::Usage(format!("{} needs --{missing}", f.name)));
    }
    Ok(())
}

fn provenance(command: &str, f: &Formula, spec: &QuadSpec) -> Metadata {
    let mut meta = Metadata::new(command);
    meta.push("formula", format!("{} = {}({})", f.name, f.function, f.params.join(", ")))
        .push("convention", f.tag())
        .push("rel_tol", format!("{:e}", spec.rel_tol))
        .push("abs_tol", format!("{:e}", spec.abs_tol));
    meta
}

fn eval(
    target: &str,
    params: &Params,
    opts: &FormulaOptions,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, CliError> {
    let f = resolve(target)?;
    check_keys(f, params)?;
    let FormulaOptions { spec, digits, output } = *opts;
    let args = f
        .params
        .iter()
        .map(|p| parse_f64(p, params.get(p).unwrap_or_default()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut meta = provenance("eval", f, &spec);
    meta.push("params", f.params.iter().zip(&args).map(|(p, v)| format!("{p}={v}")).collect::<Vec<_>>().join(" "));
    let (value, code) = match (f.eval)(&args, &spec) {
        Ok(v) => (v, 0),
        Err(slit_core::Error::Tolerance { estimate, error_bound }) => {
            meta.push("warning", format!("tolerance not reached, error bound {error_bound:e}; best estimate shown"));
            let _ = writeln!(err, "warning: tolerance not reached for {}", f.name);
            (estimate, 1)
        }
        Err(e) => return Err(e.into()),
    };
    match output {
        Output::Csv => {
            meta.write(out)?;
            csv_row(out, &["value".into(), "convention".into()])?;
            csv_row(out, &[sig(value, digits), f.tag().into()])?;
        }
        Output::Json => {
            let body = json!({ "meta": meta.to_json(), "value": value, "convention": f.tag() });
            writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
        }
    }
    Ok(code)
}

fn table(target: &str, params: &Params, opts: &FormulaOptions, out: &mut dyn Write) -> Result<i32, CliError> {
    let f = resolve(target)?;
    check_keys(f, params)?;
    let FormulaOptions { spec, digits, output } = *opts;
    let axes = f
        .params
        .iter()
        .map(|p| parse_axis(p, params.get(p).unwrap_or_default()))
        .collect::<Result<Vec<_>, _>>()?;
    let rows: usize = axes.iter().map(Vec::len).product();
    if rows > 1_000_000 {
        return Err(CliError::Usage(format!("table would have {rows} rows; the limit is 1000000")));
    }
    let mut meta = provenance("table", f, &spec);
    for (p, raw) in f.params.iter().map(|p| (p, params.get(p).unwrap_or_default())) {
        meta.push(&format!("grid {p}"), raw);
    }
    let mut failures = 0usize;
    let mut records = Vec::with_capacity(rows);
    let mut index = vec![0usize; axes.len()];
    for _ in 0..rows {
        let point: Vec<f64> = index.iter().zip(&axes).map(|(i, a)| a[*i]).collect();
        let (value, status) = match (f.eval)(&point, &spec) {
            Ok(v) => (v, "ok".to_string()),
            Err(slit_core::Error::Tolerance { estimate, .. }) => {
                failures += 1;
                (estimate, "tolerance".to_string())
            }
            Err(e) => {
                failures += 1;
                (f64::NAN, error_kind(&e).to_string())
            }
        };
        records.push((point, value, status));
        // odometer over the grid, last parameter fastest
        for k in (0..index.len()).rev() {
            index[k] += 1;
            if index[k] < axes[k].len() {
                break;
            }
            index[k] = 0;
        }
    }
    match output {
        Output::Csv => {
            meta.write(out)?;
            let mut header: Vec<String> = f.params.iter().map(|p| p.to_string()).collect();
            header.extend(["value".into(), "convention".into(), "status".into()]);
            csv_row(out, &header)?;
            for (point, value, status) in &records {
                let mut row: Vec<String> = point.iter().map(|v| sig(*v, digits)).collect();
                row.extend([sig(*value, digits), f.tag().into(), status.clone()]);
                csv_row(out, &row)?;
            }
        }
        Output::Json => {
            let rows: Vec<_> = records
                .iter()
                .map(|(point, value, status)| {
                    let mut obj = serde_json::Map::new();
                    for (p, v) in f.params.iter().zip(point) {
                        obj.insert(p.to_string(), json!(v));
                    }
                    obj.insert("value".into(), if value.is_finite() { json!(value) } else { json!(null) });
                    obj.insert("convention".into(), json!(f.tag()));
                    obj.insert("status".into(), json!(status));
                    serde_json::Value::Object(obj)
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "meta": meta.to_json(), "rows": rows }))?)?;
        }
    }
    Ok(if failures == 0 { 0 } else { 1 })
}

fn error_kind(e: &slit_core::Error) -> &'static str {
    match e {
        slit_core::Error::Domain(_) => "domain",
        slit_core::Error::Tolerance { .. } => "tolerance",
        slit_core::Error::Divergence(_) => "divergence",
        slit_core::Error::Range(_) => "range",
        slit_core::Error::Singular(_) => "singular",
        slit_core::Error::Consistency(_) => "consistency",
    }
}

fn mc_tag(sigma2: f64) -> &'static str {
    if sigma2 == 1.0 { Convention::Var1T.tag() } else { Convention::Var2T.tag() }
}

fn mc(args: &McArgs, digits: usize, output: Output, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.sigma2 != 1.0 && args.sigma2 != 2.0 {
        return Err(CliError::Usage(format!("--sigma2 must be 1 or 2, got {}", args.sigma2)));
    }
    let start = parse_point("start", &args.start)?;
    let cfg = MCConfig {
        paths: args.paths,
        step: args.step,
        horizon: args.horizon,
        seed: args.seed,
        sigma2: args.sigma2,
        drift_mu: args.drift,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let exec = Execution::default();
    let kind = McKind::to_possible_value(&args.kind).map(|v| v.get_name().to_string()).unwrap_or_default();
    let mut meta = Metadata::new(&format!("mc {kind}"));
    meta.push("convention", mc_tag(args.sigma2))
        .push("seed", args.seed.to_string())
        .push("start", start.to_string())
        .push("paths", args.paths.to_string())
        .push("step", format!("{:e}", args.step))
        .push("horizon", format!("{:e}", args.horizon))
        .push("sigma2", args.sigma2.to_string())
        .push("drift_mu", args.drift.to_string());
    let estimate = |meta: &mut Metadata, quantity: &str, est: MCEstimate, tag: &str, out: &mut dyn Write| {
        write_estimate(meta, quantity, &est, tag, digits, output, out)
    };
    match args.kind {
        McKind::Hits => {
            let recs = simulate_hits(&cfg, start, exec)?;
            match output {
                Output::Csv => {
                    meta.write(out)?;
                    csv_row(out, &["path_id".into(), "hit_time".into(), "hit_place".into(), "censored".into()])?;
                    for r in &recs {
                        csv_row(
                            out,
                            &[r.path_id.to_string(), sig(r.hit_time, digits), sig(r.hit_place, digits), r.censored.to_string()],
                        )?;
                    }
                }
                Output::Json => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "meta": meta.to_json(), "hits": recs }))?)?;
                }
            }
        }
        McKind::Survival => {
            meta.push("t", args.t.to_string());
            let est = estimate_survival(&cfg, start, args.t, exec)?;
            estimate(&mut meta, "survival", est, mc_tag(args.sigma2), out)?;
        }
        McKind::Gauge => {
            meta.push("rate", args.rate.to_string());
            let est = estimate_gauge(&cfg, start, args.rate, exec)?;
            estimate(&mut meta, "gauge", est, mc_tag(args.sigma2), out)?;
        }
        McKind::Exact => {
            let places = sample_hit_places_exact(start, args.paths, args.seed, exec)?;
            match output {
                Output::Csv => {
                    meta.write(out)?;
                    csv_row(out, &["draw".into(), "hit_place".into()])?;
                    for (i, z) in places.iter().enumerate() {
                        csv_row(out, &[i.to_string(), sig(*z, digits)])?;
                    }
                }
                Output::Json => {
                    writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "meta": meta.to_json(), "places": places }))?)?;
                }
            }
        }
        McKind::Functional => {
            let policy = HorizonPolicy::default();
            meta.push("mu", args.mu.to_string())
                .push("y", args.y.to_string())
                .push("truncation", policy.horizon(args.mu)?.to_string())
                .push("dt", policy.dt.to_string());
            let est = estimate_functional_limit(args.mu, args.y, &policy, args.paths, args.seed, exec)?;
            estimate(&mut meta, "functional_mean", est, Convention::Var2T.tag(), out)?;
        }
    }
    Ok(0)
}

fn write_estimate(
    meta: &mut Metadata,
    quantity: &str,
    est: &MCEstimate,
    tag: &str,
    digits: usize,
    output: Output,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    match output {
        Output::Csv => {
            meta.write(out)?;
            csv_row(
                out,
                &["quantity", "value", "std_error", "n", "ci_low", "ci_high", "convention"].map(String::from),
            )?;
            csv_row(
                out,
                &[
                    quantity.to_string(),
                    sig(est.value, digits),
                    sig(est.std_error, digits),
                    est.n.to_string(),
                    sig(est.ci95.0, digits),
                    sig(est.ci95.1, digits),
                    tag.to_string(),
                ],
            )?;
        }
        Output::Json => {
            let body = json!({ "meta": meta.to_json(), "quantity": quantity, "estimate": est, "convention": tag });
            writeln!(out, "{}", serde_json::to_string_pretty(&body)?)?;
        }
    }
    Ok(())
}

fn verify(
    suite: &str,
    tol: Option<f64>,
    seed: u64,
    digits: usize,
    output: Output,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    if let Some(t) = tol {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be finite and >= 0, got {t}")));
        }
    }
    let names: Vec<&str> = if suite == "all" { suites::SUITES.to_vec() } else { vec![suite] };
    if let Some(bad) = names.iter().find(|n| !suites::SUITES.contains(n)) {
        return Err(CliError::Usage(format!("unknown suite {bad:?}; known: {}, all", suites::SUITES.join(", "))));
    }
    let mut meta = Metadata::new(&format!("verify {suite}"));
    meta.push("seed", seed.to_string())
        .push("tol", tol.map_or("suite defaults".to_string(), |t| format!("{t:e}")));
    let mut rows = Vec::new();
    for name in names {
        for check in suites::run_suite(name, tol, seed).unwrap_or_default() {
            rows.push((name, check));
        }
    }
    let failed = rows.iter().filter(|(_, c)| !c.passed()).count();
    meta.push("result", format!("{} of {} checks passed", rows.len() - failed, rows.len()));
    match output {
        Output::Csv => {
            meta.write(out)?;
            csv_row(
                out,
                &["suite", "check", "value", "reference", "bound", "convention", "status"].map(String::from),
            )?;
            for (suite, c) in &rows {
                let bound = if c.expect_match { sig(c.bound, 3) } else { format!(">{}", sig(c.bound, 3)) };
                csv_row(
                    out,
                    &[
                        suite.to_string(),
                        c.name.clone(),
                        sig(c.value, digits),
                        sig(c.reference, digits),
                        bound,
                        c.convention.to_string(),
                        if c.passed() { "PASS" } else { "FAIL" }.to_string(),
                    ],
                )?;
            }
        }
        Output::Json => {
            let checks: Vec<_> = rows
                .iter()
                .map(|(suite, c)| {
                    json!({
                        "suite": suite, "check": c.name, "value": c.value, "reference": c.reference,
                        "bound": c.bound, "expect_match": c.expect_match, "convention": c.convention,
                        "passed": c.passed(),
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "meta": meta.to_json(), "checks": checks }))?)?;
        }
    }
    Ok(if failed == 0 { 0 } else { 1 })
}
