//! `heatjet`: exact heat invariants, KdV polynomials, identity checks,
//! fixture generation and the sphere spectral oracle.
//!
//! Exit codes: 0 success, 1 bad input, 2 internal consistency failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use heatjet::combinatorics::{
    comb1_lhs, comb1_rhs, integer, multinomial_check, parse_rational, vandermonde_half_lhs,
    vandermonde_half_rhs, HalfInteger, MultiIndex,
};
use heatjet::fixtures::{constant_curvature_metric, random_normal_2jet};
use heatjet::heat::{
    a_n_binomial_form_with_order, a_n_multiindex_form_with_order, sufficient_order,
};
use heatjet::kdv::{g_n_expanded, g_n_operator};
use heatjet::metric_file::{parse_metric, write_metric};
use heatjet::oracle::default_sphere_fit;
use heatjet::{Form, HeatInvariantResult, MetricJet};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::json;

const EXIT_INPUT: u8 = 1;
const EXIT_MISMATCH: u8 = 2;

#[derive(Parser)]
#[command(
    name = "heatjet",
    version,
    about = "Exact heat-kernel invariants and KdV polynomials"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized heat invariant a_n of a metric jet.
    Compute(ComputeArgs),
    /// The n-th KdV polynomial G_n[U].
    Kdv(KdvArgs),
    /// Exhaustive check of a summation identity over a finite range.
    Verify(VerifyArgs),
    /// Write a test metric as a metric file.
    #[command(subcommand)]
    Fixture(FixtureCommand),
    /// Floating-point cross-checks against known spectra.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    metric: PathBuf,
    #[arg(long, value_enum, default_value_t = FormChoice::Both)]
    form: FormChoice,
    /// Jet truncation order; defaults to 8n.
    #[arg(long)]
    order: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormChoice {
    Multiindex,
    Binomial,
    Both,
}

#[derive(Args)]
struct KdvArgs {
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = Method::Operator)]
    method: Method,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Operator,
    Expanded,
    Both,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    identity: Identity,
    /// Largest dimension (comb1 default 4, multinomial default 3).
    #[arg(long)]
    d_max: Option<usize>,
    /// Largest |beta| for comb1.
    #[arg(long, default_value_t = 4)]
    beta_max: u32,
    /// Largest u (comb1 default 6, vandermonde default 8).
    #[arg(long)]
    u_max: Option<u32>,
    /// Largest z and w for vandermonde, an integer or half-integer.
    #[arg(long, default_value = "9/2")]
    zw_max: String,
    /// Largest k - n for multinomial.
    #[arg(long, default_value_t = 4)]
    m_max: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    Comb1,
    Vandermonde,
    Multinomial,
}

#[derive(Subcommand)]
enum FixtureCommand {
    /// Model space of constant sectional curvature.
    ConstantCurvature {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        curvature: String,
        #[arg(long)]
        order: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Euclidean metric.
    Flat {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        order: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Seeded random normal-coordinate 2-jet.
    #[command(name = "random-2jet")]
    Random2jet {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        order: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Fit the heat trace of the unit 2-sphere and compare with the engine.
    SphereTrace {
        #[arg(long, default_value_t = 2)]
        n_max: usize,
    },
}

/// Failure tolerances for fitted sphere coefficients a_0, a_1, a_2.
const SPHERE_TOLERANCES: [f64; 3] = [1e-6, 1e-4, 1e-3];

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_INPUT);
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("HEATJET_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| anyhow!("HEATJET_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring thread pool")
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Compute(args) => compute(&args, cli.json),
        Command::Kdv(args) => kdv(&args, cli.json),
        Command::Verify(args) => verify(&args, cli.json),
        Command::Fixture(cmd) => fixture(cmd),
        Command::Oracle(OracleCommand::SphereTrace { n_max }) => sphere_trace(n_max, cli.json),
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_MISMATCH)
    }
}

/// `(4*pi)^(-d/2)` written out, with the exponent reduced.
fn prefactor(dim: usize) -> String {
    if dim.is_multiple_of(2) {
        format!("(4*pi)^(-{})", dim / 2)
    } else {
        format!("(4*pi)^(-{dim}/2)")
    }
}

fn read_metric(path: &Path) -> Result<MetricJet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_metric(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn compute(args: &ComputeArgs, as_json: bool) -> Result<ExitCode> {
    let g = read_metric(&args.metric)?;
    let forms: &[Form] = match args.form {
        FormChoice::Multiindex => &[Form::MultiIndex],
        FormChoice::Binomial => &[Form::Binomial],
        FormChoice::Both => &[Form::MultiIndex, Form::Binomial],
    };
    let results = forms
        .iter()
        .map(|form| match form {
            Form::MultiIndex => a_n_multiindex_form_with_order(&g, args.n, args.order),
            Form::Binomial => a_n_binomial_form_with_order(&g, args.n, args.order),
        })
        .collect::<heatjet::Result<Vec<HeatInvariantResult>>>()
        .with_context(|| {
            format!(
                "computing a_{} (default order {})",
                args.n,
                sufficient_order(args.n)
            )
        })?;
    let agree = results
        .windows(2)
        .all(|w| w[0].normalized_value == w[1].normalized_value);
    let verdict = if agree { "MATCH" } else { "MISMATCH" };
    if as_json {
        let rows: Vec<_> = results
            .iter()
            .map(|r| {
                json!({
                    "form": r.form,
                    "value": r.normalized_value.to_string(),
                    "truncation_order": r.truncation_order,
                })
            })
            .collect();
        let mut out = json!({
            "n": args.n,
            "dimension": g.dim(),
            "prefactor": prefactor(g.dim()),
            "results": rows,
        });
        if results.len() > 1 {
            out["match"] = json!(agree);
        }
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!(
            "a_{} = {} * value, d = {}",
            args.n,
            prefactor(g.dim()),
            g.dim()
        );
        for r in &results {
            println!(
                "{}: {} (truncation order {})",
                r.form, r.normalized_value, r.truncation_order
            );
        }
        let mut summary: Vec<String> = results
            .iter()
            .map(|r| r.normalized_value.to_string())
            .collect();
        if results.len() > 1 {
            summary.push(verdict.to_string());
        }
        println!("{}", summary.join(", "));
    }
    Ok(status(agree))
}

fn kdv(args: &KdvArgs, as_json: bool) -> Result<ExitCode> {
    if args.n == 0 {
        bail!("--n must be at least 1");
    }
    let operator = match args.method {
        Method::Operator | Method::Both => Some(g_n_operator(args.n)?),
        Method::Expanded => None,
    };
    let expanded = match args.method {
        Method::Expanded | Method::Both => Some(g_n_expanded(args.n)?),
        Method::Operator => None,
    };
    let agree = match (&operator, &expanded) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let n = args.n;
    if as_json {
        let mut out = json!({ "n": n });
        if let Some(p) = &operator {
            out["operator"] = json!(p.to_string());
        }
        if let Some(p) = &expanded {
            out["expanded"] = json!(p.to_string());
        }
        if let Some(m) = agree {
            out["match"] = json!(m);
        }
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        match (&operator, &expanded, agree) {
            (Some(p), None, _) | (None, Some(p), _) | (Some(p), Some(_), Some(true)) => {
                println!("G_{n} = {p}");
            }
            (Some(a), Some(b), _) => {
                println!("operator: G_{n} = {a}");
                println!("expanded: G_{n} = {b}");
            }
            (None, None, _) => unreachable!("at least one method runs"),
        }
        match agree {
            Some(true) => println!("MATCH"),
            Some(false) => println!("MISMATCH"),
            None => {}
        }
    }
    Ok(status(agree.unwrap_or(true)))
}

/// Outcome of one exhaustive identity check.
struct Tally {
    checked: usize,
    failures: Vec<String>,
}

impl Tally {
    fn from_cases<T: Sync>(
        cases: &[T],
        check: impl Fn(&T) -> Option<String> + Sync + Send,
    ) -> Self {
        let failures = cases.par_iter().filter_map(check).collect();
        Tally {
            checked: cases.len(),
            failures,
        }
    }
}

fn verify(args: &VerifyArgs, as_json: bool) -> Result<ExitCode> {
    let (name, tally) = match args.identity {
        Identity::Comb1 => {
            let d_max = args.d_max.unwrap_or(4);
            let u_max = args.u_max.unwrap_or(6);
            if d_max == 0 {
                bail!("--d-max must be at least 1");
            }
            let mut cases = Vec::new();
            for d in 1..=d_max {
                for v in 0..=args.beta_max {
                    for beta in MultiIndex::enumerate(d, v) {
                        for u in 0..=u_max {
                            cases.push((beta.clone(), u));
                        }
                    }
                }
            }
            let tally = Tally::from_cases(&cases, |(beta, u)| {
                let lhs = comb1_lhs(beta, *u);
                let rhs = comb1_rhs(beta.modulus(), *u, beta.dim());
                (lhs != rhs).then(|| format!("beta={beta} u={u}: {lhs} != {rhs}"))
            });
            ("comb1", tally)
        }
        Identity::Vandermonde => {
            let u_max = args.u_max.unwrap_or(8);
            let zw_max = parse_rational(&args.zw_max)
                .ok()
                .map(|r| r * integer(2))
                .filter(|t| t.is_integer())
                .and_then(|t| t.to_integer().to_i64())
                .filter(|t| *t >= 0)
                .ok_or_else(|| {
                    anyhow!(
                        "--zw-max must be a nonnegative integer or half-integer, got {:?}",
                        args.zw_max
                    )
                })?;
            let mut cases = Vec::new();
            for z in 0..=zw_max {
                for w in 0..=zw_max {
                    for u in 0..=u_max as u64 {
                        cases.push((HalfInteger::from_twice(z), HalfInteger::from_twice(w), u));
                    }
                }
            }
            let tally = Tally::from_cases(&cases, |(z, w, u)| {
                let lhs = vandermonde_half_lhs(z, w, *u);
                let rhs = vandermonde_half_rhs(z, w, *u);
                (lhs != rhs).then(|| format!("z={z} w={w} u={u}: {lhs} != {rhs}"))
            });
            ("vandermonde", tally)
        }
        Identity::Multinomial => {
            let d_max = args.d_max.unwrap_or(3);
            if d_max == 0 {
                bail!("--d-max must be at least 1");
            }
            let cases: Vec<(u32, usize)> = (0..=args.m_max)
                .flat_map(|m| (1..=d_max).map(move |d| (m, d)))
                .collect();
            let tally = Tally::from_cases(&cases, |&(m, d)| {
                (!multinomial_check(m, d)).then(|| format!("k-n={m} d={d}"))
            });
            ("multinomial", tally)
        }
    };
    if as_json {
        let out = json!({
            "identity": name,
            "checked": tally.checked,
            "failures": tally.failures,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        for f in &tally.failures {
            println!("FAIL {f}");
        }
        println!(
            "{name}: {} cases checked, {} failures",
            tally.checked,
            tally.failures.len()
        );
    }
    Ok(status(tally.failures.is_empty()))
}

fn fixture(cmd: FixtureCommand) -> Result<ExitCode> {
    let (g, output) = match cmd {
        FixtureCommand::ConstantCurvature {
            d,
            curvature,
            order,
            output,
        } => {
            let k = parse_rational(&curvature).map_err(|_| {
                anyhow!("--curvature must be \"p\" or \"p/q\" in lowest terms, got {curvature:?}")
            })?;
            (constant_curvature_metric(d, &k, order)?, output)
        }
        FixtureCommand::Flat { d, order, output } => {
            if d == 0 {
                bail!("--d must be at least 1");
            }
            (MetricJet::flat(d, order).with_normal_form()?, output)
        }
        FixtureCommand::Random2jet {
            d,
            seed,
            order,
            output,
        } => (random_normal_2jet(d, seed, order)?, output),
    };
    let text = write_metric(&g);
    match output {
        Some(path) => {
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn sphere_trace(n_max: usize, as_json: bool) -> Result<ExitCode> {
    let fit = default_sphere_fit(n_max)?;
    let g = constant_curvature_metric(2, &integer(1), sufficient_order(n_max as u32).max(2))?;
    let mut rows = Vec::new();
    let mut ok = true;
    for (n, fitted) in fit.coefficients.iter().enumerate() {
        let exact = a_n_binomial_form_with_order(&g, n as u32, None)?.normalized_value;
        let engine = exact.to_f64().unwrap_or(f64::NAN);
        let error = (fitted - engine).abs();
        let tolerance = SPHERE_TOLERANCES.get(n).copied();
        let within = tolerance.is_none_or(|t| error <= t);
        ok &= within;
        rows.push((n, exact, *fitted, error, tolerance, within));
    }
    if as_json {
        let out: Vec<_> = rows
            .iter()
            .map(|(n, exact, fitted, error, tolerance, within)| {
                json!({
                    "n": n,
                    "engine": exact.to_string(),
                    "fitted": fitted,
                    "abs_error": error,
                    "tolerance": tolerance,
                    "within_tolerance": within,
                })
            })
            .collect();
        let out = json!({ "condition": fit.condition, "coefficients": out });
        println!("{}", serde_json::to_string_pretty(&out)?);
    } else {
        println!("unit S^2 heat trace fit, condition {:.3e}", fit.condition);
        println!("n  engine  fitted  abs_error");
        for (n, exact, fitted, error, tolerance, within) in &rows {
            let mark = match tolerance {
                Some(t) if *within => format!("  (<= {t:e})"),
                Some(t) => format!("  EXCEEDS {t:e}"),
                None => String::new(),
            };
            println!("{n}  {exact}  {fitted:.12}  {error:.3e}{mark}");
        }
    }
    Ok(status(ok))
}
