//! Command-line front end for the `tanint` engine.
//!
//! [`run`] executes a parsed [`Cli`] and writes to the given streams, which
//! keeps every command testable without spawning a process.

pub mod render;

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use tanint::engine::Engine;
use tanint::oracle::{self, eval_numeric};
use tanint::sequences::{CoeffQuery, CoeffTarget, Normalization, OeisClient, Parity};
use tanint::series::{j_series, l_integral};
use tanint::{NumericContext, Real, Recurrence, SequenceError, SymValue};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NETWORK: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
    Latex,
}

#[derive(Debug, Parser)]
#[command(name = "tanint", version, about = "Exact values of ∫₀^{π/4} x^p tanⁿx dx and related integrals")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Decimal working precision for numerical commands.
    #[arg(long, global = true, default_value_t = 30)]
    pub digits: u32,
    /// Suppress the version banner on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RecurrenceArg {
    Corrected,
    PlusSign,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact value of I_n^(p).
    Compute {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
    },
    /// All I_n^(p) with n ≤ n-max, p ≤ p-max, ordered by p then n.
    Table {
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        p_max: u32,
    },
    /// Numerical value of I_n^(p) to --digits significant digits.
    Eval {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
    },
    /// Enclosure of ∫₀^{π/4} tanⁿx/(1−x) dx of width below eps.
    Jn {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        eps: f64,
    },
    /// Exact value of ∫₀¹ arctanⁿx dx.
    Ln {
        #[arg(long)]
        n: u32,
    },
    /// Check exact values against direct quadrature.
    Verify {
        #[arg(long)]
        n_max: u32,
        #[arg(long)]
        p_max: u32,
        /// Absolute tolerance; defaults to 10^(10 − digits).
        #[arg(long)]
        tol: Option<String>,
        /// Step recurrence to check (plus-sign is the known-wrong variant).
        #[arg(long, value_enum, default_value_t = RecurrenceArg::Corrected, hide = true)]
        recurrence: RecurrenceArg,
    },
    /// Look up an integer sequence in the OEIS.
    Oeis(OeisArgs),
}

#[derive(Debug, Args)]
pub struct OeisArgs {
    /// Explicit comma-separated terms; otherwise the sequence is extracted
    /// from exact values with the options below.
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["atom", "n_max"])]
    pub terms: Option<String>,
    /// Coefficient to extract: an atom name (`ln2`, `pi^1`, `catalan`, ...)
    /// or `rational`.
    #[arg(long, default_value = "ln2")]
    pub atom: String,
    #[arg(long, default_value_t = 1)]
    pub p: u32,
    #[arg(long, default_value = "all")]
    pub parity: String,
    #[arg(long)]
    pub n_max: Option<u32>,
    /// `raw`, `abs`, `numerators`, `denominators`, `scaled_lcm` or `abs+<mode>`.
    #[arg(long, default_value = "abs+numerators")]
    pub normalize: String,
    /// Serve only from the cache and shipped fixtures.
    #[arg(long)]
    pub offline: bool,
}

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn other(message: impl ToString) -> Self {
        Failure { code: EXIT_FAILURE, message: message.to_string() }
    }
}

type CmdResult = Result<i32, Failure>;

fn context(digits: u32) -> Result<NumericContext, Failure> {
    NumericContext::new(digits).map_err(|e| Failure::usage(e.to_string()))
}

fn io(e: std::io::Error) -> Failure {
    Failure::other(e)
}

/// Run `cli`, writing results to `out` and the banner and diagnostics to
/// `err`. Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if !cli.quiet {
        let _ = writeln!(err, "tanint {}", env!("CARGO_PKG_VERSION"));
    }
    let result = match &cli.command {
        Command::Compute { n, p } => cmd_compute(cli, *n, *p, out),
        Command::Table { n_max, p_max } => cmd_table(cli, *n_max, *p_max, out),
        Command::Eval { n, p } => cmd_eval(cli, *n, *p, out),
        Command::Jn { n, eps } => cmd_jn(cli, *n, *eps, out),
        Command::Ln { n } => cmd_ln(cli, *n, out),
        Command::Verify { n_max, p_max, tol, recurrence } => {
            cmd_verify(cli, *n_max, *p_max, tol.as_deref(), *recurrence, out)
        }
        Command::Oeis(args) => cmd_oeis(cli, args, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn write_value(format: Format, n: u32, p: u32, v: &SymValue, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        Format::Text => writeln!(out, "{}", render::text(v)),
        Format::Latex => writeln!(out, "{}", render::latex(v)),
        Format::Json => writeln!(out, "{}", v.to_json()),
        Format::Csv => writeln!(out, "{}", render::CSV_HEADER)
            .and_then(|_| render::csv_rows(n, p, v).iter().try_for_each(|row| writeln!(out, "{row}"))),
    }
    .map_err(io)
}

fn cmd_compute(cli: &Cli, n: u32, p: u32, out: &mut dyn Write) -> CmdResult {
    let v = Engine::new().compute(n, p);
    write_value(cli.format, n, p, &v, out)?;
    Ok(EXIT_OK)
}

fn cmd_table(cli: &Cli, n_max: u32, p_max: u32, out: &mut dyn Write) -> CmdResult {
    let rows = Engine::new().table(n_max, p_max);
    match cli.format {
        Format::Text => {
            for (id, v) in &rows {
                writeln!(out, "{id} = {}", render::text(v)).map_err(io)?;
            }
        }
        Format::Latex => {
            writeln!(out, r"\begin{{align*}}").map_err(io)?;
            for (id, v) in &rows {
                writeln!(out, r"I_{{{}}}^{{({})}} &= {} \\", id.n, id.p, render::latex(v)).map_err(io)?;
            }
            writeln!(out, r"\end{{align*}}").map_err(io)?;
        }
        Format::Csv => {
            writeln!(out, "{}", render::CSV_HEADER).map_err(io)?;
            for (id, v) in &rows {
                for row in render::csv_rows(id.n, id.p, v) {
                    writeln!(out, "{row}").map_err(io)?;
                }
            }
        }
        Format::Json => {
            let arr: Vec<Value> = rows
                .iter()
                .map(|(id, v)| {
                    let value: Value = serde_json::from_str(&v.to_json()).expect("engine JSON is valid");
                    json!({ "n": id.n, "p": id.p, "value": value })
                })
                .collect();
            writeln!(out, "{}", Value::Array(arr)).map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_eval(cli: &Cli, n: u32, p: u32, out: &mut dyn Write) -> CmdResult {
    let ctx = context(cli.digits)?;
    let v = Engine::new().compute(n, p);
    let x = eval_numeric(&v, &ctx).map_err(Failure::other)?.to_sig_string(cli.digits);
    match cli.format {
        Format::Text | Format::Latex => writeln!(out, "{x}"),
        Format::Csv => writeln!(out, "n,p,value\n{n},{p},{x}"),
        Format::Json => writeln!(out, "{}", json!({ "n": n, "p": p, "digits": cli.digits, "value": x })),
    }
    .map_err(io)?;
    Ok(EXIT_OK)
}

/// Decimal strings for `[lo, hi]` rounded outward, so the printed interval
/// still contains the computed one.
fn outward(lo: &Real, hi: &Real, frac: u32) -> (String, String) {
    let pad = Real::pow10_neg(frac, lo.bits());
    ((lo - &pad).to_fixed_string(frac), (hi + &pad).to_fixed_string(frac))
}

fn cmd_jn(cli: &Cli, n: u32, eps: f64, out: &mut dyn Write) -> CmdResult {
    let ctx = context(cli.digits)?;
    let enc = j_series(&Engine::new(), n, eps, &ctx).map_err(|e| match e {
        tanint::SeriesError::NonPositiveEps(_) | tanint::SeriesError::InsufficientDigits { .. } => {
            Failure::usage(e.to_string())
        }
        other => Failure::other(other),
    })?;
    let (lo, hi) = outward(&enc.lo, &enc.hi, cli.digits);
    match cli.format {
        Format::Text => writeln!(out, "[{lo}, {hi}]\nterms_used = {}", enc.terms_used),
        Format::Latex => writeln!(out, r"\left[{lo},\ {hi}\right]"),
        Format::Csv => writeln!(out, "n,eps,lo,hi,terms_used\n{n},{eps:e},{lo},{hi},{}", enc.terms_used),
        Format::Json => {
            writeln!(out, "{}", json!({ "n": n, "eps": eps, "lo": lo, "hi": hi, "terms_used": enc.terms_used }))
        }
    }
    .map_err(io)?;
    Ok(EXIT_OK)
}

fn cmd_ln(cli: &Cli, n: u32, out: &mut dyn Write) -> CmdResult {
    let v = l_integral(&Engine::new(), n);
    write_value(cli.format, n, 0, &v, out)?;
    Ok(EXIT_OK)
}

fn sci(x: &Real) -> String {
    format!("{:.3e}", x.to_f64())
}

fn cmd_verify(
    cli: &Cli,
    n_max: u32,
    p_max: u32,
    tol: Option<&str>,
    recurrence: RecurrenceArg,
    out: &mut dyn Write,
) -> CmdResult {
    let ctx = context(cli.digits)?;
    let tol = match tol {
        Some(s) => {
            Real::parse_decimal(s, ctx.bits()).ok_or_else(|| Failure::usage(format!("invalid tolerance `{s}`")))?
        }
        None => ctx.pow10_neg(cli.digits.saturating_sub(10)),
    };
    let engine = Engine::with_recurrence(match recurrence {
        RecurrenceArg::Corrected => Recurrence::Corrected,
        RecurrenceArg::PlusSign => Recurrence::PlusSign,
    });
    let reports = oracle::verify(&engine, n_max, p_max, &ctx, &tol).map_err(|e| match e {
        tanint::OracleError::ToleranceTooTight { .. } => Failure::usage(e.to_string()),
        other => Failure::other(other),
    })?;
    let passed = reports.iter().filter(|r| r.pass).count();
    let verdict = |pass: bool| if pass { "pass" } else { "FAIL" };
    match cli.format {
        Format::Text | Format::Latex => {
            for r in &reports {
                writeln!(out, "{:<12} {}  |diff| = {}", r.id.to_string(), verdict(r.pass), sci(&r.abs_diff))
                    .map_err(io)?;
            }
            writeln!(out, "{passed}/{} passed", reports.len()).map_err(io)?;
        }
        Format::Csv => {
            writeln!(out, "n,p,abs_diff,pass").map_err(io)?;
            for r in &reports {
                writeln!(out, "{},{},{},{}", r.id.n, r.id.p, sci(&r.abs_diff), r.pass).map_err(io)?;
            }
        }
        Format::Json => {
            let arr: Vec<Value> = reports
                .iter()
                .map(|r| {
                    json!({
                        "n": r.id.n,
                        "p": r.id.p,
                        "exact": r.exact_numeric.to_sig_string(cli.digits),
                        "quadrature": r.quadrature.to_sig_string(cli.digits),
                        "abs_diff": sci(&r.abs_diff),
                        "pass": r.pass,
                    })
                })
                .collect();
            writeln!(out, "{}", json!({ "passed": passed, "total": reports.len(), "reports": arr })).map_err(io)?;
        }
    }
    Ok(if passed == reports.len() { EXIT_OK } else { EXIT_FAILURE })
}

fn parse_terms(s: &str) -> Result<Vec<BigInt>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| Failure::usage(format!("invalid term `{t}`"))))
        .collect()
}

fn query_terms(args: &OeisArgs) -> Result<Vec<BigInt>, Failure> {
    if let Some(t) = &args.terms {
        return parse_terms(t);
    }
    let n_max = args.n_max.ok_or_else(|| Failure::usage("either --terms or --n-max is required"))?;
    let target: CoeffTarget = args.atom.parse().map_err(|e: tanint::ParseError| Failure::usage(e.to_string()))?;
    let parity: Parity = args.parity.parse().map_err(|e: tanint::ParseError| Failure::usage(e.to_string()))?;
    let normalize: Normalization =
        args.normalize.parse().map_err(|e: tanint::ParseError| Failure::usage(e.to_string()))?;
    let q = CoeffQuery { target, p: args.p, parity, n_max, normalize };
    q.terms(&Engine::new()).map_err(|e| Failure::usage(e.to_string()))
}

fn cmd_oeis(cli: &Cli, args: &OeisArgs, out: &mut dyn Write) -> CmdResult {
    let terms = query_terms(args)?;
    let result = OeisClient::from_env().lookup(&terms, args.offline).map_err(|e| match e {
        SequenceError::Network { .. } | SequenceError::OfflineMiss(_) => {
            Failure { code: EXIT_NETWORK, message: e.to_string() }
        }
        SequenceError::QueryLength(_) | SequenceError::Empty => Failure::usage(e.to_string()),
        other => Failure::other(other),
    })?;
    let query = tanint::sequences::oeis::query_string(&result.query_terms);
    let source = if result.from_cache { "cache" } else { "network" };
    match cli.format {
        Format::Text | Format::Latex => {
            writeln!(out, "query: {query}\nsource: {source}").map_err(io)?;
            if result.matches.is_empty() {
                writeln!(out, "no matches").map_err(io)?;
            }
            for m in &result.matches {
                writeln!(out, "{}  {}", m.sequence_id, m.name).map_err(io)?;
            }
        }
        Format::Csv => {
            writeln!(out, "id,name").map_err(io)?;
            for m in &result.matches {
                writeln!(out, "{},{}", m.sequence_id, render::csv_field(&m.name)).map_err(io)?;
            }
        }
        Format::Json => {
            let matches: Vec<Value> =
                result.matches.iter().map(|m| json!({ "id": m.sequence_id, "name": m.name })).collect();
            writeln!(out, "{}", json!({ "query": query, "from_cache": result.from_cache, "matches": matches }))
                .map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}
