//! Command-line front end: evaluate one side of a series, verify an
//! identity at a point, sweep random parameter clouds, or run the classical
//! Lambert identity suite.
//!
//! Exit codes: 0 all-PASS / successful eval, 1 any FAIL, 2 usage error,
//! 3 nothing checkable (SKIPPED only), 4 I/O failure.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::evaluators::{EvalConfig, EvalResult, SeriesParams};
use crate::registry::{default_pairs, lookup, RegisteredPair};
use crate::scalar::{format_complex, parse_complex, Scalar};
use crate::verify::{
    check_classical, check_identity, default_report_tol, sweep_random, DomainMode, IdentityReport,
    Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SKIPPED: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "lambertheta", version, about = "Generalized Lambert series evaluator")]
struct CliArgs {
    #[command(subcommand)]
    command: CliCommand,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Evaluator relative tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    rel_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Lhs,
    Rhs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Strict,
    Advisory,
}

impl From<Mode> for DomainMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => DomainMode::Strict,
            Mode::Advisory => DomainMode::Advisory,
        }
    }
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// x (comma-separated list for multivariate).
    #[arg(long)]
    x: Option<String>,
    /// y (comma-separated list for multivariate).
    #[arg(long)]
    y: Option<String>,
    #[arg(long)]
    z: Option<String>,
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    s: Option<String>,
    /// lambda (comma-separated list for multivariate).
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    mu: Option<String>,
}

#[derive(Debug, Subcommand)]
enum CliCommand {
    /// Evaluate one side of a series at a parameter point.
    Eval {
        #[arg(long)]
        family: String,
        /// Registered pair name (geom-minus, exp, lucas-s1-t1, table:<path>, ...).
        #[arg(long, visible_alias = "spec")]
        pair: String,
        #[arg(long, value_enum, default_value_t = Side::Lhs)]
        side: Side,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Verify LHS = RHS at a parameter point.
    Verify {
        #[arg(long)]
        family: String,
        #[arg(long, visible_alias = "spec")]
        pair: String,
        /// Report tolerance on the relative gap (default 100x rel_tol).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Strict)]
        mode: Mode,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Verify a family over seeded random in-domain parameter clouds.
    Sweep {
        #[arg(long)]
        family: String,
        /// Comma-separated pair names; defaults to the built-in eight.
        #[arg(long)]
        pairs: Option<String>,
        #[arg(long, default_value_t = 50)]
        draws: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Mode::Strict)]
        mode: Mode,
    },
    /// Run the classical Lambert series identity suite.
    Classical {
        /// Identity number 1..=5; all five when omitted.
        #[arg(long)]
        id: Option<u8>,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

/// Parsed, validated run configuration.
#[derive(Debug)]
pub struct RunConfig {
    pub action: Action,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub cfg: EvalConfig,
}

#[derive(Debug)]
pub enum Action {
    Eval {
        pair: RegisteredPair,
        params: SeriesParams,
        side: Side,
    },
    Verify {
        pair: RegisteredPair,
        params: SeriesParams,
        tol: f64,
        mode: DomainMode,
    },
    Sweep {
        family: String,
        pairs: Vec<RegisteredPair>,
        draws: usize,
        seed: u64,
        tol: f64,
        mode: DomainMode,
    },
    Classical {
        ids: Vec<u8>,
        q: f64,
        tol: f64,
    },
}

fn require(value: &Option<String>, name: &str, family: &str) -> Result<Scalar> {
    let s = value
        .as_ref()
        .ok_or_else(|| Error::Parse(format!("missing --{name} for family {family}")))?;
    parse_complex(s)
}

fn require_list(value: &Option<String>, name: &str, family: &str) -> Result<Vec<Scalar>> {
    let s = value
        .as_ref()
        .ok_or_else(|| Error::Parse(format!("missing --{name} for family {family}")))?;
    s.split(',').map(|part| parse_complex(part.trim())).collect()
}

fn build_params(family: &str, args: &ParamArgs) -> Result<SeriesParams> {
    let p = match family {
        "lambert" => SeriesParams::Lambert {
            x: require(&args.x, "x", family)?,
            y: require(&args.y, "y", family)?,
            z: require(&args.z, "z", family)?,
            lambda: require(&args.lambda, "lambda", family)?,
        },
        "mehler" => SeriesParams::Mehler {
            x: require(&args.x, "x", family)?,
            y: require(&args.y, "y", family)?,
            z: require(&args.z, "z", family)?,
            w: require(&args.w, "w", family)?,
            t: require(&args.t, "t", family)?,
            lambda: require(&args.lambda, "lambda", family)?,
        },
        "rogers" => SeriesParams::Rogers {
            x: require(&args.x, "x", family)?,
            y: require(&args.y, "y", family)?,
            t: require(&args.t, "t", family)?,
            s: require(&args.s, "s", family)?,
            lambda: require(&args.lambda, "lambda", family)?,
        },
        "doublesum" => SeriesParams::DoubleSum {
            x: require(&args.x, "x", family)?,
            y: require(&args.y, "y", family)?,
            z: require(&args.z, "z", family)?,
            t: require(&args.t, "t", family)?,
            lambda: require(&args.lambda, "lambda", family)?,
            mu: require(&args.mu, "mu", family)?,
        },
        "multivariate" => SeriesParams::Multivariate {
            x: require_list(&args.x, "x", family)?,
            y: require_list(&args.y, "y", family)?,
            lambda: require_list(&args.lambda, "lambda", family)?,
            z: require(&args.z, "z", family)?,
        },
        other => {
            return Err(Error::Parse(format!(
                "unknown family '{other}' (expected lambert, mehler, rogers, doublesum, multivariate)"
            )))
        }
    };
    // Contraction moduli are hard invariants, not theorem hypotheses.
    for (name, v) in p.entries() {
        if name.starts_with("lambda") || name == "mu" {
            if v.norm() >= 1.0 {
                return Err(Error::Parse(format!("|{name}| must be < 1, got {}", v.norm())));
            }
        }
    }
    Ok(p)
}

fn eval_config(rel_tol: f64) -> Result<EvalConfig> {
    if !(rel_tol > 0.0) {
        return Err(Error::Parse("rel_tol must be > 0".into()));
    }
    let mut cfg = EvalConfig {
        rel_tol,
        ..EvalConfig::default()
    };
    if let Ok(v) = std::env::var("LAMBERTHETA_MAX_TERMS") {
        cfg.max_terms = v
            .parse()
            .map_err(|_| Error::Parse(format!("LAMBERTHETA_MAX_TERMS: bad value '{v}'")))?;
    }
    Ok(cfg)
}

fn check_tol(tol: f64) -> Result<f64> {
    if tol > 0.0 {
        Ok(tol)
    } else {
        Err(Error::Parse("tol must be > 0".into()))
    }
}

/// Parses argv into a validated [`RunConfig`].
pub fn parse_args<I, T>(argv: I) -> std::result::Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = CliArgs::try_parse_from(argv)?;
    to_run_config(cli).map_err(|e| {
        clap::Error::raw(clap::error::ErrorKind::InvalidValue, format!("{e}\n"))
    })
}

fn to_run_config(cli: CliArgs) -> Result<RunConfig> {
    let cfg = eval_config(cli.rel_tol)?;
    let action = match cli.command {
        CliCommand::Eval {
            family,
            pair,
            side,
            params,
        } => Action::Eval {
            pair: lookup(&pair)?,
            params: build_params(&family, &params)?,
            side,
        },
        CliCommand::Verify {
            family,
            pair,
            tol,
            mode,
            params,
        } => Action::Verify {
            pair: lookup(&pair)?,
            params: build_params(&family, &params)?,
            tol: check_tol(tol.unwrap_or(default_report_tol(&cfg)))?,
            mode: mode.into(),
        },
        CliCommand::Sweep {
            family,
            pairs,
            draws,
            seed,
            tol,
            mode,
        } => {
            let pairs = match pairs {
                Some(list) => list
                    .split(',')
                    .map(|name| lookup(name.trim()))
                    .collect::<Result<Vec<_>>>()?,
                None => default_pairs(),
            };
            Action::Sweep {
                family,
                pairs,
                draws,
                seed,
                tol: check_tol(tol.unwrap_or(default_report_tol(&cfg)))?,
                mode: mode.into(),
            }
        }
        CliCommand::Classical { id, q, tol } => {
            let ids = match id {
                Some(i) if (1..=5).contains(&i) => vec![i],
                Some(i) => return Err(Error::Parse(format!("--id {i} not in 1..=5"))),
                None => vec![1, 2, 3, 4, 5],
            };
            Action::Classical {
                ids,
                q,
                tol: check_tol(tol)?,
            }
        }
    };
    Ok(RunConfig {
        action,
        format: cli.format,
        output: cli.output,
        cfg,
    })
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_float(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.16e}"),
        None => String::new(),
    }
}

fn csv_side(r: &Option<EvalResult>) -> String {
    match r {
        Some(r) => format!(
            "{:.16e},{:.16e},{},{:.16e}",
            r.value.re, r.value.im, r.terms_used, r.tail_estimate
        ),
        None => ",,,".to_string(),
    }
}

fn render_reports(reports: &[IdentityReport], format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => {
            let mut out: Vec<String> = reports.iter().map(|r| r.text_line()).collect();
            let (pass, fail, skip) = tally(reports);
            out.push(format!("summary: {pass} PASS, {fail} FAIL, {skip} SKIPPED"));
            out.join("\n") + "\n"
        }
        OutputFormat::Json => serde_json::to_string_pretty(reports).unwrap() + "\n",
        OutputFormat::Csv => {
            let mut out = vec![
                "family,spec,form,params,lhs_re,lhs_im,lhs_terms,lhs_tail,\
                 rhs_re,rhs_im,rhs_terms,rhs_tail,abs_gap,rel_gap,verdict,flags"
                    .to_string(),
            ];
            for r in reports {
                let params = r
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={}", format_complex(Scalar::new(v[0], v[1]))))
                    .collect::<Vec<_>>()
                    .join(";");
                let verdict = match &r.verdict {
                    Verdict::Skipped(reason) => format!("SKIPPED: {reason}"),
                    other => other.label().to_string(),
                };
                out.push(format!(
                    "{},{},{},{},{},{},{},{},{},{}",
                    csv_field(&r.family),
                    csv_field(&r.spec),
                    csv_field(&r.form),
                    csv_field(&params),
                    csv_side(&r.lhs),
                    csv_side(&r.rhs),
                    csv_float(r.abs_gap),
                    csv_float(r.rel_gap),
                    csv_field(&verdict),
                    csv_field(&r.flags.join(";")),
                ));
            }
            out.join("\n") + "\n"
        }
    }
}

fn tally(reports: &[IdentityReport]) -> (usize, usize, usize) {
    let mut counts = (0usize, 0usize, 0usize);
    for r in reports {
        match r.verdict {
            Verdict::Pass => counts.0 += 1,
            Verdict::Fail => counts.1 += 1,
            Verdict::Skipped(_) => counts.2 += 1,
        }
    }
    counts
}

fn reports_exit_code(reports: &[IdentityReport]) -> i32 {
    let (pass, fail, _skip) = tally(reports);
    if fail > 0 {
        EXIT_FAIL
    } else if pass == 0 {
        EXIT_SKIPPED
    } else {
        EXIT_OK
    }
}

fn emit(text: &str, output: &Option<PathBuf>) -> i32 {
    match output {
        Some(path) => match fs::write(path, text) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_IO
            }
        },
        None => {
            print!("{text}");
            EXIT_OK
        }
    }
}

/// Executes a validated configuration and returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    let outcome: Result<(String, i32)> = match &config.action {
        Action::Eval { pair, params, side } => {
            run_eval(pair, params, *side, &config.cfg, config.format)
        }
        Action::Verify {
            pair,
            params,
            tol,
            mode,
        } => check_identity(&pair.spec, &pair.form, params, *tol, &config.cfg, *mode).map(|r| {
            let code = reports_exit_code(std::slice::from_ref(&r));
            (render_reports(&[r], config.format), code)
        }),
        Action::Sweep {
            family,
            pairs,
            draws,
            seed,
            tol,
            mode,
        } => sweep_random(family, pairs, *draws, *seed, *tol, &config.cfg, *mode).map(|reports| {
            let code = reports_exit_code(&reports);
            (render_reports(&reports, config.format), code)
        }),
        Action::Classical { ids, q, tol } => ids
            .iter()
            .map(|id| check_classical(*id, *q, *tol))
            .collect::<Result<Vec<_>>>()
            .map(|reports| {
                let code = reports_exit_code(&reports);
                (render_reports(&reports, config.format), code)
            }),
    };
    match outcome {
        Ok((text, code)) => {
            let io_code = emit(&text, &config.output);
            if io_code != EXIT_OK {
                io_code
            } else {
                code
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}

fn run_eval(
    pair: &RegisteredPair,
    params: &SeriesParams,
    side: Side,
    cfg: &EvalConfig,
    format: OutputFormat,
) -> Result<(String, i32)> {
    use crate::evaluators::*;
    let result = match (params, side) {
        (SeriesParams::Lambert { .. }, Side::Lhs) => eval_lambert_lhs(&pair.spec, params, cfg),
        (SeriesParams::Lambert { .. }, Side::Rhs) => eval_lambert_rhs(&pair.form, params, cfg),
        (SeriesParams::Mehler { .. }, Side::Lhs) => eval_mehler_lhs(&pair.spec, params, cfg),
        (SeriesParams::Mehler { .. }, Side::Rhs) => eval_mehler_rhs(&pair.form, params, cfg),
        (SeriesParams::Rogers { .. }, Side::Lhs) => {
            eval_rogers_lhs(&pair.spec, &pair.spec, params, cfg)
        }
        (SeriesParams::Rogers { .. }, Side::Rhs) => {
            eval_rogers_rhs(&pair.form, &pair.form, params, cfg)
        }
        (SeriesParams::DoubleSum { .. }, Side::Lhs) => eval_doublesum_lhs(&pair.spec, params, cfg),
        (SeriesParams::DoubleSum { .. }, Side::Rhs) => eval_doublesum_rhs(&pair.form, params, cfg),
        (SeriesParams::Multivariate { .. }, Side::Lhs) => {
            eval_multivariate_lhs(&pair.spec, params, cfg)
        }
        (SeriesParams::Multivariate { .. }, Side::Rhs) => {
            eval_multivariate_rhs(&pair.form, params, cfg)
        }
    }?;
    let text = match format {
        OutputFormat::Text => format!(
            "{} {} {:?} value={} terms={} tail={:.3e}\n",
            params.family_name(),
            pair.name,
            side,
            format_complex(result.value),
            result.terms_used,
            result.tail_estimate
        ),
        OutputFormat::Json => serde_json::to_string_pretty(&result).unwrap() + "\n",
        OutputFormat::Csv => format!(
            "family,pair,side,value_re,value_im,terms,tail\n{},{},{:?},{}\n",
            params.family_name(),
            pair.name,
            side,
            csv_side(&Some(result))
        ),
    };
    Ok((text, EXIT_OK))
}

/// Full argv-to-exit-code entry point used by the binary.
pub fn main_from_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(config) => run(&config),
        Err(e) => {
            // clap renders its own help/usage text; exit 2 for usage errors,
            // 0 for --help/--version.
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            code
        }
    }
}
