//! Command-line front end: `eval`, `constant` and `verify`.

pub mod format;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lerch::{phi_auto, LerchPoint};
use crate::numeric::{Approx, Ctx, Cx, Limits};
use crate::quad::registry::{filter_cases, identity_registry, injected_failure_case, verify_all, VerifyRecord};
use crate::special::functions::{beta_dirichlet, digamma_series, zeta, zeta_star};
use crate::special::oracle::{oracle, CONSTANT_KEYS};
use crate::special::products::{product_spec, product_target, product_trajectory};
use format::{decimal, parse_complex, short};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "lerchkit", version, about = "Lerch transcendent, related constants and identity checks")]
pub struct Cli {
    /// Decimal digits to compute and print.
    #[arg(long, global = true, default_value_t = 30, value_parser = clap::value_parser!(u32).range(1..))]
    pub digits: u32,

    /// Working precision in bits; overrides the value derived from --digits.
    #[arg(long, global = true, env = "LERCHKIT_PRECISION_BITS")]
    pub precision_bits: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Cap on series terms.
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,

    /// Cap on quadrature refinement levels.
    #[arg(long, global = true)]
    pub max_levels: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Φ(z, s, u).
    Eval {
        /// `a`, `bi` or `a+bi`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Compute a named constant by oracle, series or infinite product.
    Constant {
        /// One of the oracle keys, or `limit` for a product's own limit.
        name: String,
        /// `oracle`, `series` or `product:<id>`.
        #[arg(long, default_value = "oracle")]
        method: String,
        /// Largest partial product or series length.
        #[arg(long = "N", default_value_t = 64)]
        n: u64,
    },
    /// Check the integral identities.
    Verify {
        /// Glob on case ids, or `tag:<name>`.
        #[arg(long, default_value = "*")]
        filter: String,
        /// Worker threads.
        #[arg(long, env = "LERCHKIT_JOBS")]
        jobs: Option<usize>,
        /// Report wall-clock seconds per case (output is then not reproducible).
        #[arg(long)]
        timing: bool,
        #[arg(long, hide = true)]
        inject_failure: bool,
    },
}

impl Cli {
    pub fn precision(&self) -> u32 {
        self.precision_bits
            .unwrap_or_else(|| (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32)
    }

    fn ctx(&self) -> Ctx {
        let mut limits = Limits::default();
        if let Some(t) = self.max_terms {
            limits.max_terms = t;
        }
        if let Some(l) = self.max_levels {
            limits.max_levels = l;
        }
        Ctx::new(self.precision()).with_limits(limits)
    }
}

/// Exit status for an error: 2 for bad input, 1 for a computation that
/// did not finish.
fn status(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Pole(_) | Error::UnknownKey(_) | Error::Parse(_) => 2,
        _ => 1,
    }
}

/// Run with the given arguments, writing to `out`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let res = match &cli.command {
        Command::Eval { z, s, u } => cmd_eval(&cli, z, s, u, out),
        Command::Constant { name, method, n } => cmd_constant(&cli, name, method, *n, out),
        Command::Verify {
            filter,
            jobs,
            timing,
            inject_failure,
        } => cmd_verify(&cli, filter, *jobs, *timing, *inject_failure, out),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            status(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Parse(format!("write failed: {e}"))
}

#[derive(Serialize)]
struct ValueJson {
    re: String,
    im: String,
    err: String,
}

fn value_json(a: &Approx, digits: usize) -> ValueJson {
    ValueJson {
        re: decimal(a.re(), digits),
        im: decimal(a.im(), digits),
        err: short(a.err_f64()),
    }
}

fn value_text(a: &Approx, digits: usize) -> String {
    if a.im().is_zero() {
        decimal(a.re(), digits)
    } else {
        format!("{} + {} i", decimal(a.re(), digits), decimal(a.im(), digits))
    }
}

fn emit_json(out: &mut dyn Write, v: &impl Serialize) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(out, "{s}").map_err(io)
}

#[derive(Serialize)]
struct EvalJson<'a> {
    schema_version: &'a str,
    z: &'a str,
    s: &'a str,
    u: &'a str,
    value: ValueJson,
    method: &'a str,
    terms: usize,
    precision_bits: u32,
}

fn cmd_eval(cli: &Cli, z: &str, s: &str, u: &str, out: &mut dyn Write) -> Result<i32> {
    let ctx = cli.ctx();
    let p = ctx.prec;
    let zc = parse_complex(z, p)?;
    let sc = parse_complex(s, p)?;
    let uc = parse_complex(u, p)?;
    if !uc.im.is_zero() {
        return Err(Error::Domain("u must be real".into()));
    }
    let pt = LerchPoint::from_parts(zc, sc, uc.re)?;
    let v = phi_auto(&pt, &ctx)?;
    let digits = cli.digits as usize;
    match cli.format {
        Format::Text => {
            writeln!(out, "value  {}", value_text(&v, digits)).map_err(io)?;
            writeln!(out, "err    {}", short(v.err_f64())).map_err(io)?;
            writeln!(out, "method {}", v.method.tag()).map_err(io)?;
            writeln!(out, "terms  {}", v.terms_used).map_err(io)?;
        }
        Format::Json => emit_json(
            out,
            &EvalJson {
                schema_version: SCHEMA_VERSION,
                z,
                s,
                u,
                value: value_json(&v, digits),
                method: v.method.tag(),
                terms: v.terms_used,
                precision_bits: p,
            },
        )?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct Row {
    n: u64,
    value: String,
    abs_err: String,
}

#[derive(Serialize)]
struct ConstantJson<'a> {
    schema_version: &'a str,
    name: &'a str,
    method: &'a str,
    target: String,
    rows: Vec<Row>,
}

/// `8, 16, 32, …` up to `n`, ending at `n`.
fn checkpoints(n: u64) -> Vec<u64> {
    let mut v: Vec<u64> = std::iter::successors(Some(8u64), |k| Some(k * 2)).take_while(|&k| k < n).collect();
    v.push(n.max(1));
    v
}

/// A constant through one of the library's convergent series.
fn series_value(name: &str, n: u64, ctx: &Ctx) -> Result<Approx> {
    let p = ctx.prec;
    let re = |x: f64| Cx::real(p, x);
    match name {
        "gamma" => {
            let psi = digamma_series(&Float::with_val(p, 1), ctx, n as usize)?;
            Ok(psi.times(&re(-1.0)))
        }
        "ln2" => zeta_star(&re(1.0), ctx),
        "apery" => zeta(&re(3.0), ctx),
        "catalan" => beta_dirichlet(&re(2.0), ctx),
        "pi" => Ok(beta_dirichlet(&re(1.0), ctx)?.times(&re(4.0))),
        _ => Err(Error::UnknownKey(format!("series:{name}"))),
    }
}

fn cmd_constant(cli: &Cli, name: &str, method: &str, n: u64, out: &mut dyn Write) -> Result<i32> {
    let ctx = cli.ctx();
    let p = ctx.prec;
    let digits = cli.digits as usize;
    let target;
    let mut rows = Vec::new();
    if method == "oracle" {
        target = oracle(name, p)?;
    } else if method == "series" {
        target = oracle(name, p)?;
        let pts = if name == "gamma" { checkpoints(n) } else { vec![n] };
        for k in pts {
            let v = series_value(name, k, &ctx)?;
            rows.push((k, v.re().clone()));
        }
    } else if let Some(id) = method.strip_prefix("product:") {
        let spec = product_spec(id)?;
        let as_limit = name == "limit";
        if !as_limit && spec.constant != Some(name) {
            let known = spec.constant.unwrap_or("limit");
            return Err(Error::UnknownKey(format!("product {id} yields `{known}`, not `{name}`")));
        }
        target = if as_limit {
            product_target(&spec, p)?
        } else {
            oracle(name, p)?
        };
        for pp in product_trajectory(&spec, &checkpoints(n), &ctx)? {
            let v = pp.value.re().clone();
            let v = match (&spec.to_constant, as_limit) {
                (Some(f), false) => f(&v),
                _ => v,
            };
            rows.push((pp.n, v));
        }
    } else {
        return Err(Error::UnknownKey(format!("method {method}")));
    }
    let rows: Vec<Row> = rows
        .into_iter()
        .map(|(k, v)| {
            let d = Float::with_val(p, &v - &target).abs();
            Row {
                n: k,
                value: decimal(&v, digits),
                abs_err: short(d.to_f64()),
            }
        })
        .collect();
    match cli.format {
        Format::Text => {
            writeln!(out, "{name} = {}", decimal(&target, digits)).map_err(io)?;
            for r in &rows {
                writeln!(out, "{:>8}  {}  {}", r.n, r.value, r.abs_err).map_err(io)?;
            }
        }
        Format::Json => emit_json(
            out,
            &ConstantJson {
                schema_version: SCHEMA_VERSION,
                name,
                method,
                target: decimal(&target, digits),
                rows,
            },
        )?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct CaseJson {
    id: String,
    lhs: Option<ValueJson>,
    rhs: Option<ValueJson>,
    abs_err: Option<String>,
    tol: String,
    pass: bool,
    seconds: Option<String>,
    route: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

#[derive(Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
    seconds: Option<String>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    schema_version: &'a str,
    cases: Vec<CaseJson>,
    summary: Summary,
}

fn case_json(r: &VerifyRecord, digits: usize, timing: bool) -> CaseJson {
    CaseJson {
        id: r.id.clone(),
        lhs: r.lhs.as_ref().map(|a| value_json(a, digits)),
        rhs: r.rhs.as_ref().map(|a| value_json(a, digits)),
        abs_err: r.abs_err.map(short),
        tol: short(r.tol),
        pass: r.pass,
        seconds: timing.then(|| format!("{:.3}", r.seconds)),
        route: r.route.to_string(),
        reason: r.reason.clone(),
    }
}

fn cmd_verify(cli: &Cli, filter: &str, jobs: Option<usize>, timing: bool, inject: bool, out: &mut dyn Write) -> Result<i32> {
    let mut cases = filter_cases(identity_registry(), filter).map_err(|e| Error::Parse(format!("filter `{filter}`: {e}")))?;
    if inject {
        cases.push(injected_failure_case());
    }
    let start = std::time::Instant::now();
    let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let records = verify_all(&cases, cli.precision(), jobs.max(1));
    let seconds = start.elapsed().as_secs_f64();
    let passed = records.iter().filter(|r| r.pass).count();
    let failed = records.len() - passed;
    let digits = cli.digits as usize;
    match cli.format {
        Format::Text => {
            for r in &records {
                let verdict = if r.pass { "PASS" } else { "FAIL" };
                let err = r.abs_err.map_or_else(|| "-".to_string(), short);
                write!(out, "{verdict} {:<44} {:<13} abs_err={err} tol={}", r.id, r.route, short(r.tol)).map_err(io)?;
                if timing {
                    write!(out, " {:.3}s", r.seconds).map_err(io)?;
                }
                if let Some(why) = &r.reason {
                    write!(out, "  ({why})").map_err(io)?;
                }
                writeln!(out).map_err(io)?;
            }
            write!(out, "total {} passed {passed} failed {failed}", records.len()).map_err(io)?;
            if timing {
                write!(out, " seconds {seconds:.3}").map_err(io)?;
            }
            writeln!(out).map_err(io)?;
        }
        Format::Json => emit_json(
            out,
            &ReportJson {
                schema_version: SCHEMA_VERSION,
                cases: records.iter().map(|r| case_json(r, digits, timing)).collect(),
                summary: Summary {
                    total: records.len(),
                    passed,
                    failed,
                    seconds: timing.then(|| format!("{seconds:.3}")),
                },
            },
        )?,
    }
    Ok(i32::from(failed > 0))
}

/// Keys accepted by `constant --method oracle`.
pub fn constant_names() -> &'static [&'static str] {
    &CONSTANT_KEYS
}
