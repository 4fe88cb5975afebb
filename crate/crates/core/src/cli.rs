//! The `dlpcf` command line: `eval`, `check` and `soundness`.
//!
//! Each command has a library entry point returning a report, so the same
//! code backs the binary, the examples and the tests. Exit codes depend on
//! the report alone.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::checker::{check, CheckReport, Derivation, DerivationError, StructuralError};
use crate::index::{eval_index, Assignment, IndexTerm, EquationalProgram, EvalError, ProgramError, Verdict, DEFAULT_BOUND, DEFAULT_FUEL};
use crate::machine::{run_with, MachineError, RunOptions};
use crate::pcf::{self, pcf_check, pcf_typecheck, wh_eval, PcfType, ReduceError, Term, TypeError};
use crate::syntax::ParseError;
use crate::types::BasicType;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Program { path: PathBuf, source: ProgramError },
    #[error("{path}: {source}")]
    Derivation { path: PathBuf, source: DerivationError },
    #[error("structural error: {0}")]
    Structural(#[from] StructuralError),
    #[error("the program does not typecheck: {0}")]
    Type(#[from] TypeError),
    #[error("the program has type {0}, expected {1}")]
    NotNat(PcfType, PcfType),
    #[error("machine: {0}")]
    Machine(#[from] MachineError),
    #[error("reducer: {0}")]
    Reduce(#[from] ReduceError),
    #[error("the machine returned {machine} but the reducer returned {reducer}")]
    Disagreement { machine: u64, reducer: u64 },
    #[error("the derivation is not verified ({0}); soundness needs a verified derivation")]
    NotVerified(Verdict),
    #[error("cannot evaluate {term} at {at}: {source}")]
    Index { term: String, at: Assignment, source: EvalError },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 3 for malformed derivations, 2 for unknown outcomes, 4 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Structural(_) => 3,
            CliError::Derivation {
                source: DerivationError::Structural(_),
                ..
            } => 3,
            CliError::NotVerified(v) if v.is_refuted() => 1,
            CliError::NotVerified(_) => 2,
            CliError::Machine(MachineError::FuelExhausted { .. }) | CliError::Reduce(ReduceError::FuelExhausted(_)) => 2,
            _ => 4,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_program(path: &Path) -> Result<Term, CliError> {
    pcf::parse(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// The equational program at `path`, or the empty one.
pub fn load_eqs(path: Option<&Path>) -> Result<EquationalProgram, CliError> {
    match path {
        None => Ok(EquationalProgram::empty()),
        Some(p) => EquationalProgram::parse(&read(p)?).map_err(|source| CliError::Program {
            path: p.to_path_buf(),
            source,
        }),
    }
}

pub fn load_derivation(path: &Path, program: Option<&Term>) -> Result<Derivation, CliError> {
    Derivation::parse(&read(path)?, program).map_err(|source| match source {
        DerivationError::Structural(e) => CliError::Structural(e),
        source => CliError::Derivation {
            path: path.to_path_buf(),
            source,
        },
    })
}

/// Outcome of running one program, with the soundness checks when a
/// derivation was supplied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub program: PathBuf,
    pub args: Vec<u64>,
    pub value: u64,
    pub steps: u64,
    pub size: u64,
    pub derivation: Option<PathBuf>,
    pub weight_value: Option<u64>,
    /// `steps ≤ size · (⟦I⟧ + 1)`; present iff a derivation was supplied.
    pub bound_check: Option<bool>,
    /// `⟦J⟧ ≤ value ≤ ⟦K⟧`; present iff a derivation was supplied.
    pub interval_check: Option<bool>,
    pub interval: Option<(u64, u64)>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.bound_check.unwrap_or(true) && self.interval_check.unwrap_or(true)
    }
}

/// Runs `program` applied to `args` on the machine and the reducer. The
/// program must have type `Nat -> ... -> Nat` with one arrow per argument.
///
/// The machine checks the subterm-size invariant at every step. When `trace`
/// is given, one line per transition is written to it.
pub fn cmd_eval(program: &Path, args: &[u64], fuel: u64, trace: Option<&mut dyn Write>) -> Result<RunReport, CliError> {
    let f = load_program(program)?;
    let expected = args.iter().fold(PcfType::Nat, |ty, _| PcfType::arrow(PcfType::Nat, ty));
    if let Err(e) = pcf_check(&[], &f, &expected) {
        return Err(match pcf_typecheck(&[], &f) {
            Ok(ty) => CliError::NotNat(ty, expected),
            Err(_) => CliError::Type(e),
        });
    }
    let t = args.iter().fold(f, |t, &n| t.apply_nat(n));
    let run = run_with(
        &t,
        fuel,
        RunOptions {
            check_subterm_sizes: true,
            trace,
        },
    )?;
    let (reduced, _) = wh_eval(&t, fuel)?;
    if reduced != run.value {
        return Err(CliError::Disagreement {
            machine: run.value,
            reducer: reduced,
        });
    }
    Ok(RunReport {
        program: program.to_path_buf(),
        args: args.to_vec(),
        value: run.value,
        steps: run.steps,
        size: t.size(),
        derivation: None,
        weight_value: None,
        bound_check: None,
        interval_check: None,
        interval: None,
    })
}

/// Parses and checks a derivation. The subject comes from `program` if
/// given, otherwise from the file.
pub fn cmd_check(
    derivation: &Path,
    program: Option<&Path>,
    eqs: Option<&Path>,
    bound: u64,
    fuel: u64,
    precise: bool,
) -> Result<CheckReport, CliError> {
    let term = program.map(load_program).transpose()?;
    let d = load_derivation(derivation, term.as_ref())?;
    let e = load_eqs(eqs)?;
    Ok(check(&d, &e, bound, fuel, precise)?)
}

/// Exit status of `check`.
pub fn check_exit_code(report: &CheckReport) -> i32 {
    match report.overall {
        Verdict::Verified { .. } => 0,
        Verdict::Refuted { .. } => 1,
        Verdict::Unknown { .. } => 2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoundnessReport {
    pub derivation: PathBuf,
    pub check: Verdict,
    pub weight: String,
    pub rows: Vec<RunReport>,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(RunReport::passed)
    }
}

type Interval<'t> = (&'t IndexTerm, &'t IndexTerm);

/// The argument interval, if the root type is an arrow, and the result
/// interval.
fn result_interval(ty: &BasicType) -> Result<(Option<Interval<'_>>, Interval<'_>), CliError> {
    match ty {
        BasicType::Nat(j, k) => Ok((None, (j, k))),
        BasicType::Arrow(arg, cod) => match (&arg.body, &**cod) {
            (BasicType::Nat(lo, hi), BasicType::Nat(j, k)) => Ok((Some((lo, hi)), (j, k))),
            _ => Err(CliError::Usage(format!("the root type {ty} is neither Nat[J, K] nor Nat[..] -o Nat[J, K]"))),
        },
    }
}

/// Checks `steps ≤ |t n| · (⟦I[a:=n]⟧ + 1)` and `⟦J[a:=n]⟧ ≤ value ≤ ⟦K[a:=n]⟧`
/// for every `n` in `instances`, where `a` is the only index variable of
/// the root judgement.
///
/// With `require_verified` the derivation must first check as Verified at
/// `bound`; otherwise the check verdict is only recorded.
#[allow(clippy::too_many_arguments)]
pub fn cmd_soundness(
    derivation: &Path,
    program: Option<&Path>,
    eqs: Option<&Path>,
    instances: &[u64],
    bound: u64,
    fuel: u64,
    require_verified: bool,
) -> Result<SoundnessReport, CliError> {
    let term = program.map(load_program).transpose()?;
    let d = load_derivation(derivation, term.as_ref())?;
    let e = load_eqs(eqs)?;
    let report = check(&d, &e, bound, fuel, false)?;
    if require_verified && !report.overall.is_verified() {
        return Err(CliError::NotVerified(report.overall));
    }
    let var = match d.ctx.vars.as_slice() {
        [] => None,
        [a] => Some(a.clone()),
        more => {
            return Err(CliError::Usage(format!(
                "the root judgement has index variables {}; soundness needs at most one",
                more.join(", ")
            )))
        }
    };
    let (arg, (j, k)) = result_interval(&d.ty)?;
    let eval = |t: &IndexTerm, rho: &Assignment| {
        eval_index(t, rho, &e, fuel).map_err(|source| CliError::Index {
            term: t.to_string(),
            at: rho.clone(),
            source,
        })
    };
    let mut rows = Vec::new();
    for &n in instances {
        let mut rho = Assignment::new();
        if let Some(a) = &var {
            rho.insert(a, n);
        }
        let t = match arg {
            None => d.subject.clone(),
            Some((lo, hi)) => {
                let (lo, hi) = (eval(lo, &rho)?, eval(hi, &rho)?);
                if !(lo..=hi).contains(&n) {
                    return Err(CliError::Usage(format!("{n} is not in the argument interval [{lo}, {hi}]")));
                }
                d.subject.clone().apply_nat(n)
            }
        };
        let run = run_with(&t, fuel, RunOptions::checked())?;
        let w = eval(&d.weight, &rho)?;
        let (lo, hi) = (eval(j, &rho)?, eval(k, &rho)?);
        let size = t.size();
        let limit = size.checked_mul(w.saturating_add(1));
        rows.push(RunReport {
            program: program.map_or_else(|| derivation.to_path_buf(), Path::to_path_buf),
            args: if arg.is_some() { vec![n] } else { vec![] },
            value: run.value,
            steps: run.steps,
            size,
            derivation: Some(derivation.to_path_buf()),
            weight_value: Some(w),
            bound_check: Some(limit.is_none_or(|l| run.steps <= l)),
            interval_check: Some(lo <= run.value && run.value <= hi),
            interval: Some((lo, hi)),
        });
    }
    Ok(SoundnessReport {
        derivation: derivation.to_path_buf(),
        check: report.overall,
        weight: d.weight.to_string(),
        rows,
    })
}

// Rendering

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Tsv,
}

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "pass",
        Some(false) => "FAIL",
        None => "-",
    }
}

pub fn render_run(r: &RunReport, format: Format) -> String {
    match format {
        Format::Human => format!(
            "value {}\nsteps {}\nsize  {}\n",
            r.value, r.steps, r.size
        ),
        Format::Tsv => format!("value\t{}\nsteps\t{}\nsize\t{}\n", r.value, r.steps, r.size),
    }
}

pub fn render_soundness(r: &SoundnessReport, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Human => {
            let _ = writeln!(out, "derivation: {}", r.check);
            let _ = writeln!(out, "weight I = {}\n", r.weight);
            let _ = writeln!(out, "{:>4} {:>8} {:>8} {:>6} {:>6} {:>10}  bound  {:>12}  interval", "n", "value", "steps", "|t|", "⟦I⟧", "|t|(⟦I⟧+1)", "[J, K]");
            for row in &r.rows {
                let n = row.args.first().map_or("-".to_string(), u64::to_string);
                let w = row.weight_value.unwrap_or(0);
                let (lo, hi) = row.interval.unwrap_or((0, 0));
                let _ = writeln!(
                    out,
                    "{n:>4} {:>8} {:>8} {:>6} {w:>6} {:>10}  {:<5}  {:>12}  {}",
                    row.value,
                    row.steps,
                    row.size,
                    row.size.saturating_mul(w.saturating_add(1)),
                    yes_no(row.bound_check),
                    format!("[{lo}, {hi}]"),
                    yes_no(row.interval_check)
                );
            }
            let _ = writeln!(out, "\n{}", if r.passed() { "all rows pass" } else { "some rows FAIL" });
        }
        Format::Tsv => {
            let _ = writeln!(out, "n\tvalue\tsteps\tsize\tweight\tlimit\tbound\tlo\thi\tinterval");
            for row in &r.rows {
                let n = row.args.first().map_or("-".to_string(), u64::to_string);
                let w = row.weight_value.unwrap_or(0);
                let (lo, hi) = row.interval.unwrap_or((0, 0));
                let _ = writeln!(
                    out,
                    "{n}\t{}\t{}\t{}\t{w}\t{}\t{}\t{lo}\t{hi}\t{}",
                    row.value,
                    row.steps,
                    row.size,
                    row.size.saturating_mul(w.saturating_add(1)),
                    yes_no(row.bound_check),
                    yes_no(row.interval_check)
                );
            }
        }
    }
    out
}

// Argument parsing

#[derive(Debug, Parser)]
#[command(name = "dlpcf", version, about = "Linear dependent types for PCF")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a closed program on the Krivine machine and the reducer.
    Eval {
        program: PathBuf,
        /// Numerals the program is applied to, in order.
        #[arg(long = "arg")]
        args: Vec<u64>,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        /// Write one line per machine transition to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Check a derivation and print its obligations.
    Check {
        derivation: PathBuf,
        #[arg(long)]
        program: Option<PathBuf>,
        #[arg(long, env = "DLPCF_EQPROG")]
        eqs: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        #[arg(long)]
        precise: bool,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Compare measured cost and value with the bounds of a derivation.
    Soundness {
        derivation: PathBuf,
        #[arg(long)]
        program: Option<PathBuf>,
        #[arg(long, env = "DLPCF_EQPROG")]
        eqs: Option<PathBuf>,
        /// Instances of the index variable: `3`, `0,2,4` or `0..8`.
        #[arg(long = "n", default_value = "0..8")]
        instances: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        #[arg(long, default_value_t = DEFAULT_FUEL)]
        fuel: u64,
        /// Run even if the derivation does not check.
        #[arg(long)]
        skip_check: bool,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
}

/// Expands `3`, `0,2,4` and `0..8` (inclusive).
pub fn parse_instances(specs: &[String]) -> Result<Vec<u64>, CliError> {
    let mut out = Vec::new();
    for spec in specs {
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || CliError::Usage(format!("bad instance `{part}`"));
            if let Some((lo, hi)) = part.split_once("..") {
                let lo: u64 = lo.parse().map_err(|_| bad())?;
                let hi: u64 = hi.parse().map_err(|_| bad())?;
                out.extend(lo..=hi);
            } else {
                out.push(part.parse().map_err(|_| bad())?);
            }
        }
    }
    Ok(out)
}

/// Executes a parsed command line, writing the report to `out`. Returns the
/// process exit code.
pub fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_command(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn run_command(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let io = |source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    match cli.command {
        Command::Eval {
            program,
            args,
            fuel,
            trace,
            format,
        } => {
            let report = match trace {
                Some(path) => {
                    let mut file = fs::File::create(&path).map_err(|source| CliError::Io {
                        path: path.clone(),
                        source,
                    })?;
                    cmd_eval(&program, &args, fuel, Some(&mut file))?
                }
                None => cmd_eval(&program, &args, fuel, None)?,
            };
            out.write_all(render_run(&report, format).as_bytes()).map_err(io)?;
            Ok(0)
        }
        Command::Check {
            derivation,
            program,
            eqs,
            bound,
            fuel,
            precise,
            format,
        } => {
            let report = cmd_check(&derivation, program.as_deref(), eqs.as_deref(), bound, fuel, precise)?;
            let text = match format {
                Format::Human => report.to_table(),
                Format::Tsv => report.to_tsv(),
            };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(check_exit_code(&report))
        }
        Command::Soundness {
            derivation,
            program,
            eqs,
            instances,
            bound,
            fuel,
            skip_check,
            format,
        } => {
            let ns = parse_instances(&instances)?;
            let report = cmd_soundness(&derivation, program.as_deref(), eqs.as_deref(), &ns, bound, fuel, !skip_check)?;
            out.write_all(render_soundness(&report, format).as_bytes()).map_err(io)?;
            Ok(if report.passed() { 0 } else { 1 })
        }
    }
}
