//! Command-line front end: scenario files, presets, reports and sweeps.

pub mod presets;
pub mod report;
pub mod scenario;
pub mod sweep;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::betaflow::Verdict;
use crate::error::Error;
use crate::exec::Exec;
use presets::PresetName;
use report::{build_report, Report};
use scenario::{locate_key, Scenario, SchemaError};

#[derive(Debug, Parser)]
#[command(
    name = "delpezzo",
    version,
    about = "Exact K-instability certificates for weighted del Pezzo hypersurfaces"
)]
pub struct Cli {
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a preset or a scenario file.
    Report(ReportArgs),
    /// Print a preset as a scenario file.
    ExportPreset(PresetArgs),
    /// Tabulate a family over parameter ranges.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct PresetArgs {
    #[arg(long)]
    pub preset: String,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    /// Admit n = m for fam-11nm.
    #[arg(long)]
    pub allow_boundary: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, conflicts_with = "scenario")]
    pub preset: Option<String>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub allow_boundary: bool,
    #[arg(long, required_unless_present = "preset")]
    pub scenario: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
    /// Exit 3 unless the verdict is NotKSemistable.
    #[arg(long)]
    pub assert_unstable: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// fam-11nm, fam-3n4 or fam-6n9.
    pub family: String,
    /// Inclusive range `lo..hi`.
    #[arg(long)]
    pub n: String,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub allow_boundary: bool,
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Exit code for a library error: input problems are 2, anything the
/// engine cannot finish is 1.
fn code_for(e: &Error) -> i32 {
    match e {
        Error::IrrationalThreshold(_)
        | Error::DegenerateConfig(_)
        | Error::SingularMatrix { .. } => 1,
        _ => 2,
    }
}

fn preset_scenario(
    name: &str,
    n: Option<u64>,
    m: Option<u64>,
    boundary: bool,
) -> Result<Scenario, Error> {
    let p = name.parse::<PresetName>()?.with_params(n, m, boundary)?;
    Ok(p.scenario())
}

fn anchor(text: &str, e: &SchemaError) -> String {
    let key = match (&e.error, e.section) {
        (Error::InconsistentGram(_), "curves") => "gram",
        (_, s) => s,
    };
    match locate_key(text, key) {
        Some(line) => format!("line {line}"),
        None => "line 1".into(),
    }
}

fn emit(rep: &Report, json: bool, assert_unstable: bool) -> Outcome {
    let mut out = if json {
        rep.to_json() + "\n"
    } else {
        rep.render_text()
    };
    if json {
        out.push_str(&format!("verdict: {}\n", rep.verdict));
    }
    if assert_unstable && rep.verdict != Verdict::NotKSemistable {
        return Outcome {
            code: 3,
            stdout: out,
            stderr: format!("verdict is {}, not NotKSemistable\n", rep.verdict),
        };
    }
    Outcome::ok(out)
}

fn report(a: &ReportArgs, exec: Exec) -> Outcome {
    if let Some(name) = &a.preset {
        let sc = match preset_scenario(name, a.n, a.m, a.allow_boundary) {
            Ok(sc) => sc,
            Err(e) => return Outcome::fail(2, format!("error: {e}\n")),
        };
        return match build_report(&sc, exec) {
            Ok(rep) => emit(&rep, a.json, a.assert_unstable),
            Err(e) => Outcome::fail(code_for(&e.error), format!("error: preset {name}: {e}\n")),
        };
    }
    let path = a
        .scenario
        .as_ref()
        .expect("clap requires --scenario without --preset");
    let shown = path.display();
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::fail(2, format!("error: {shown}: {e}\n")),
    };
    let sc = match Scenario::from_json(&text) {
        Ok(sc) => sc,
        Err(e) => {
            let msg = e.to_string();
            let msg = msg
                .rsplit_once(" at line ")
                .map_or(msg.as_str(), |(m, _)| m);
            return Outcome::fail(
                2,
                format!("error: {shown}:{}:{}: {msg}\n", e.line(), e.column()),
            );
        }
    };
    match build_report(&sc, exec) {
        Ok(rep) => emit(&rep, a.json, a.assert_unstable),
        Err(e) => Outcome::fail(
            code_for(&e.error),
            format!("error: {shown}: {}: {e}\n", anchor(&text, &e)),
        ),
    }
}

fn export(a: &PresetArgs) -> Outcome {
    match preset_scenario(&a.preset, a.n, a.m, a.allow_boundary) {
        Ok(sc) => Outcome::ok(sc.to_json() + "\n"),
        Err(e) => Outcome::fail(2, format!("error: {e}\n")),
    }
}

fn run_sweep(a: &SweepArgs, exec: Exec) -> Outcome {
    let table = || -> Result<String, Error> {
        let family: PresetName = a.family.parse()?;
        let n = sweep::parse_range(&a.n)?;
        let m = a.m.as_deref().map(sweep::parse_range).transpose()?;
        let params = sweep::parameters(family, n, m, a.allow_boundary)?;
        let rows = sweep::sweep(&params, exec)?;
        Ok(if a.json {
            serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n"
        } else {
            sweep::to_csv(family, &rows)
        })
    };
    match table() {
        Ok(t) => Outcome::ok(t),
        Err(e) => Outcome::fail(code_for(&e), format!("error: {e}\n")),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome::fail(2, text)
            };
        }
    };
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    };
    match &cli.command {
        Command::Report(a) => report(a, exec),
        Command::ExportPreset(a) => export(a),
        Command::Sweep(a) => run_sweep(a, exec),
    }
}

/// Report for a preset, computed with the default execution policy.
pub fn run_preset(
    name: &str,
    n: Option<u64>,
    m: Option<u64>,
    allow_boundary: bool,
) -> Result<Report, Error> {
    let sc = preset_scenario(name, n, m, allow_boundary)?;
    build_report(&sc, Exec::default()).map_err(|e| e.error)
}
