//! Command-line front end. Every command returns a [`CommandOutcome`] so the
//! binary only has to print and exit.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 finding
//! (a checked inequality failed as stated).

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use remezlab::audit::{reports_to_csv, AuditConfig, AuditOutcome, MemberParity};
use remezlab::extremal::{equality_witness, extremal_classical, extremal_even};
use remezlab::search::{maximize_ratio, SearchConfig, VIOLATION_TOLERANCE};
use remezlab::sublevel::{deficiency_with, line_sublevel_set};
use remezlab::{Backend, BoundKind, Parity, RemezError, TrigPoly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_FINDING: i32 = 3;

/// Slack on `deficiency ≤ s` for `check`.
const MEMBERSHIP_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CommandOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutcome {
    fn ok(stdout: String) -> Self {
        CommandOutcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        CommandOutcome {
            code,
            stdout: String::new(),
            stderr: message.into(),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &RemezError) -> i32 {
    match e {
        RemezError::Domain(_)
        | RemezError::NotEven { .. }
        | RemezError::ConstraintViolated { .. }
        | RemezError::InvalidConfig(_)
        | RemezError::Parse(_) => EXIT_INVALID,
        RemezError::Overflow
        | RemezError::ConstantOnLevel
        | RemezError::NoConvergence(_)
        | RemezError::DegenerateDraw
        | RemezError::WitnessFailure(_)
        | RemezError::NoFeasibleStart => EXIT_NUMERICAL,
    }
}

impl From<RemezError> for CommandOutcome {
    fn from(e: RemezError) -> Self {
        CommandOutcome::fail(exit_code(&e), format!("error: {e}\n"))
    }
}

type Outcome = std::result::Result<CommandOutcome, CommandOutcome>;

fn invalid(message: impl std::fmt::Display) -> CommandOutcome {
    CommandOutcome::fail(EXIT_INVALID, format!("error: {message}\n"))
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Even,
    Odd,
    All,
    Classical,
    #[value(name = "classical-exp")]
    ClassicalExp,
}

impl From<KindArg> for BoundKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Even => BoundKind::EvenPeriod,
            KindArg::Odd => BoundKind::OddPeriod,
            KindArg::All => BoundKind::AllPeriod,
            KindArg::Classical => BoundKind::ClassicalAlgebraic,
            KindArg::ClassicalExp => BoundKind::ClassicalExp,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BackendArg {
    Eigen,
    Sample,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Eigen => Backend::Eigen,
            BackendArg::Sample => Backend::Sample,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
    Any,
}

impl From<ParityArg> for MemberParity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => MemberParity::Even,
            ParityArg::Odd => MemberParity::Odd,
            ParityArg::Any => MemberParity::Any,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "remezlab", version, about = "Remez-type inequalities for trigonometric polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a bound.
    Bound {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        /// Print the natural logarithm of the bound instead.
        #[arg(long)]
        log: bool,
    },
    /// Build the even extremal and its equality witness.
    Extremal {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        /// Also write the polynomial JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Deficiency, sup norm and bound ratio of a polynomial file.
    Check {
        polyfile: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        /// Bound to compare against; defaults from the detected parity.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[arg(long, value_enum, default_value = "eigen")]
        backend: BackendArg,
    },
    /// Audit every claim over random members and sets.
    Audit {
        /// JSON audit configuration; missing fields take default values.
        #[arg(long, conflicts_with = "default")]
        config: Option<PathBuf>,
        /// Run the default configuration.
        #[arg(long)]
        default: bool,
        /// Override the configured master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the report rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Claim ids whose failures are expected; the run exits 0 when every
        /// failing claim is listed.
        #[arg(long, value_delimiter = ',')]
        expect_findings: Vec<String>,
    },
    /// Search for polynomials with the largest sup-to-bound ratio.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, value_enum, default_value = "even")]
        kind: KindArg,
        #[arg(long, value_enum, default_value = "even")]
        parity: ParityArg,
        /// Restrict to real-valued polynomials.
        #[arg(long)]
        real: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
        #[arg(long)]
        kappa: Option<f64>,
        /// Write the best polynomial JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the known extremal against a bound over a grid.
    Sweep {
        #[arg(long, value_enum, default_value = "even")]
        kind: KindArg,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, default_value_t = 0.5)]
        s_min: f64,
        #[arg(long, default_value_t = 5.5)]
        s_max: f64,
        #[arg(long, default_value_t = 0.5)]
        s_step: f64,
        #[arg(long, value_enum, default_value = "eigen")]
        backend: BackendArg,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CommandOutcome::ok(text)
            } else {
                CommandOutcome::fail(code, text)
            };
        }
    };
    let result = match cli.command {
        Command::Bound { kind, n, s, log } => cmd_bound(kind.into(), n, s, log),
        Command::Extremal { n, s, out } => cmd_extremal(n, s, out),
        Command::Check { polyfile, s, kind, backend } => cmd_check(&polyfile, s, kind.map(Into::into), backend.into()),
        Command::Audit { config, default, seed, csv, expect_findings } => {
            cmd_audit(config, default, seed, csv, &expect_findings)
        }
        Command::Search { n, s, kind, parity, real, seed, restarts, budget, kappa, out } => {
            let config = SearchConfig {
                n,
                s,
                parity: parity.into(),
                real,
                kind: kind.into(),
                restarts,
                budget,
                seed,
                kappa,
                ..SearchConfig::default()
            };
            cmd_search(&config, out)
        }
        Command::Sweep { kind, n_min, n_max, s_min, s_max, s_step, backend, csv } => {
            cmd_sweep(kind.into(), (n_min, n_max), (s_min, s_max, s_step), backend.into(), csv)
        }
    };
    result.unwrap_or_else(|e| e)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serialises");
    s.push('\n');
    s
}

fn write_file(path: &PathBuf, text: &str) -> std::result::Result<(), CommandOutcome> {
    fs::write(path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

pub fn cmd_bound(kind: BoundKind, n: usize, s: f64, log: bool) -> Outcome {
    let base = json!({ "kind": kind.name(), "n": n, "s": s });
    let mut v = base;
    if log {
        v["log_bound"] = json!(kind.log_bound(n, s)?);
    } else {
        match kind.bound(n, s) {
            Ok(b) => v["bound"] = json!(b),
            Err(RemezError::Overflow) => {
                return Err(CommandOutcome::fail(
                    EXIT_NUMERICAL,
                    "error: bound overflows f64; rerun with --log\n",
                ))
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(CommandOutcome::ok(pretty(&v)))
}

pub fn cmd_extremal(n: usize, s: f64, out: Option<PathBuf>) -> Outcome {
    // domain errors come from the construction, numerical ones from the witness
    extremal_even(n, s)?;
    let witness = equality_witness(n, s)?;
    if let Some(path) = out {
        write_file(&path, &witness.poly.to_json())?;
    }
    let v = serde_json::to_value(&witness).expect("witness serialises");
    Ok(CommandOutcome::ok(pretty(&v)))
}

fn default_kind(parity: Parity, s: f64) -> BoundKind {
    match parity {
        Parity::Even => BoundKind::EvenPeriod,
        Parity::Odd => BoundKind::OddPeriod,
        Parity::Neither if s < std::f64::consts::PI => BoundKind::AllPeriod,
        // no proven bound here; compare against the even one
        Parity::Neither => BoundKind::EvenPeriod,
    }
}

pub fn cmd_check(path: &PathBuf, s: f64, kind: Option<BoundKind>, backend: Backend) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let q = TrigPoly::from_json(&text)?;
    let parity = q.parity_of(remezlab::trigpoly::EVEN_TOLERANCE);
    let kind = kind.unwrap_or_else(|| default_kind(parity, s));
    if !kind.is_periodic() {
        return Err(invalid(format!("{} is not a bound on the period", kind.name())));
    }
    let n = q.degree();
    let log_bound = kind.log_bound(n, s)?;
    let deficiency = match deficiency_with(&q, backend) {
        Ok(d) => d,
        Err(RemezError::ConstantOnLevel) => 0.0,
        Err(e) => return Err(e.into()),
    };
    let member = deficiency <= s + MEMBERSHIP_TOLERANCE;
    let sup = q.sup_norm_with_density(10);
    let bound = kind.bound(n, s).ok();
    let ratio = match bound {
        Some(b) => sup / b,
        None => (sup.ln() - log_bound).exp(),
    };
    let proven = match kind {
        BoundKind::EvenPeriod => parity == Parity::Even,
        BoundKind::OddPeriod => parity == Parity::Odd,
        _ => true,
    };
    let finding = member && ratio > 1.0 + VIOLATION_TOLERANCE;
    let v = json!({
        "n": n,
        "s": s,
        "kind": kind.name(),
        "parity": format!("{parity:?}").to_lowercase(),
        "real": q.is_real_valued(1e-12),
        "backend": backend.name(),
        "deficiency": deficiency,
        "member": member,
        "sup": sup,
        "bound": bound,
        "log_bound": log_bound,
        "ratio": ratio,
        "bound_proven_for_parity": proven,
        "exceeds_bound": finding,
    });
    let mut outcome = CommandOutcome::ok(pretty(&v));
    if !member {
        outcome.stderr = format!("note: deficiency {deficiency} exceeds s = {s}; the bound does not apply\n");
    }
    if finding {
        outcome.code = EXIT_FINDING;
        outcome.stderr = format!("finding: sup/bound = {ratio} exceeds 1\n");
    }
    Ok(outcome)
}

pub fn cmd_audit(
    config: Option<PathBuf>,
    default: bool,
    seed: Option<u64>,
    csv: Option<PathBuf>,
    expect: &[String],
) -> Outcome {
    let mut cfg = match (config, default) {
        (Some(path), _) => {
            let text = fs::read_to_string(&path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<AuditConfig>(&text).map_err(|e| invalid(format!("bad audit config: {e}")))?
        }
        (None, true) => AuditConfig::default(),
        (None, false) => return Err(invalid("audit needs --config FILE or --default")),
    };
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let outcome = AuditOutcome::run(&cfg)?;
    if let Some(path) = csv {
        write_file(&path, &reports_to_csv(&outcome.reports)?)?;
    }
    let mut result = CommandOutcome::ok(outcome.to_json() + "\n");
    let findings = outcome.findings();
    let unexpected: Vec<&String> = findings.iter().filter(|f| !expect.contains(f)).collect();
    let mut notes = String::new();
    for c in &outcome.summary {
        notes.push_str(&format!("{}: {} rows, {} fail as stated\n", c.claim_id, c.total, c.violations));
    }
    if !unexpected.is_empty() {
        result.code = EXIT_FINDING;
        let list: Vec<&str> = unexpected.iter().map(|s| s.as_str()).collect();
        notes.push_str(&format!("findings: {}\n", list.join(", ")));
    }
    result.stderr = notes;
    Ok(result)
}

pub fn cmd_search(config: &SearchConfig, out: Option<PathBuf>) -> Outcome {
    let result = maximize_ratio(config)?;
    if let Some(path) = out {
        write_file(&path, &result.best_poly.to_json())?;
    }
    let mut outcome = CommandOutcome::ok(result.to_json() + "\n");
    if result.violated {
        outcome.code = EXIT_FINDING;
        outcome.stderr = format!(
            "finding: ratio {} exceeds 1 after re-verification; witness in best_poly\n",
            result.best_ratio
        );
    }
    Ok(outcome)
}

/// Grid values `lo, lo + step, …` up to `hi` (inclusive to rounding).
fn s_grid(lo: f64, hi: f64, step: f64) -> std::result::Result<Vec<f64>, CommandOutcome> {
    if !(step > 0.0 && lo <= hi && lo.is_finite() && hi.is_finite()) {
        return Err(invalid("s grid needs s_min <= s_max and s_step > 0"));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

/// One row per `(n, s)`: the known extremal for the kind against its bound.
///
/// Periodic kinds use the even extremal (at `2s` for the general bound, whose
/// proof reduces to that case); algebraic kinds use the classical extremal on
/// `[-1, 1]`, with deficiency `2 − m({|P| ≤ 1})`.
pub fn cmd_sweep(
    kind: BoundKind,
    (n_min, n_max): (usize, usize),
    (s_min, s_max, s_step): (f64, f64, f64),
    backend: Backend,
    csv: Option<PathBuf>,
) -> Outcome {
    if n_min == 0 || n_min > n_max {
        return Err(invalid("n grid needs 1 <= n_min <= n_max"));
    }
    let grid = s_grid(s_min, s_max, s_step)?;
    let mut text = String::from("n,s,kind,bound,sup,ratio,deficiency\n");
    for n in n_min..=n_max {
        for &s in &grid {
            let bound = kind.bound(n, s)?;
            let (sup, deficiency) = match kind {
                BoundKind::EvenPeriod | BoundKind::OddPeriod | BoundKind::AllPeriod => {
                    let at = if kind == BoundKind::AllPeriod { 2.0 * s } else { s };
                    let q = extremal_even(n, at)?;
                    (q.sup_norm_with_density(10), deficiency_with(&q, backend)?)
                }
                BoundKind::ClassicalAlgebraic | BoundKind::ClassicalExp => {
                    let at = s.min(1.999);
                    let p = extremal_classical(n, at)?;
                    let set = line_sublevel_set(&p, 1.0, -1.0, 1.0)?;
                    let sup = p.eval(1.0).norm().max(p.eval(-1.0).norm());
                    (sup, 2.0 - set.measure())
                }
            };
            text.push_str(&format!(
                "{n},{s},{},{bound},{sup},{},{deficiency}\n",
                kind.name(),
                sup / bound
            ));
        }
    }
    match csv {
        Some(path) => {
            write_file(&path, &text)?;
            Ok(CommandOutcome::ok(String::new()))
        }
        None => Ok(CommandOutcome::ok(text)),
    }
}

/// Applies `REMEZLAB_THREADS` (0 or unset = one worker per core).
pub fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var("REMEZLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| format!("REMEZLAB_THREADS must be a non-negative integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_both_ends() {
        let g = s_grid(0.5, 5.5, 0.5).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.5);
        assert_eq!(g[10], 5.5);
        assert!(s_grid(1.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn error_codes() {
        assert_eq!(exit_code(&RemezError::Domain("x".into())), EXIT_INVALID);
        assert_eq!(exit_code(&RemezError::Parse("x".into())), EXIT_INVALID);
        assert_eq!(exit_code(&RemezError::NoConvergence("x".into())), EXIT_NUMERICAL);
        assert_eq!(exit_code(&RemezError::WitnessFailure("x".into())), EXIT_NUMERICAL);
    }

    #[test]
    fn kind_defaults_follow_parity() {
        assert_eq!(default_kind(Parity::Even, 4.0), BoundKind::EvenPeriod);
        assert_eq!(default_kind(Parity::Odd, 1.0), BoundKind::OddPeriod);
        assert_eq!(default_kind(Parity::Neither, 1.0), BoundKind::AllPeriod);
        assert_eq!(default_kind(Parity::Neither, 4.0), BoundKind::EvenPeriod);
    }
}
