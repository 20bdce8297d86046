//! `rtl`: run scenarios, sweep bounds, evaluate resource measures and run the self-test suites.
//!
//! Exit codes: 0 success, 1 a verification check or self-test suite failed, 2 unknown id,
//! malformed input or invalid arguments.

mod grid;
mod registry;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use rtl_core::bounds::{self, BoundError, BoundInput, BoundKind, BoundReport, BoundValue};
use rtl_core::qcore::{json, QError, State};
use rtl_core::resources::{HolderConstants, MeasureDescriptor, MeasureKind, ResourceError};
use rtl_core::scenarios::{ScenarioError, ScenarioReport, Sweep};
use rtl_core::selftest::{self, SelftestOptions};

use grid::{EpsGrid, Spacing};
use registry::Overrides;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    UnknownId(String),
    #[error("{0}")]
    Usage(String),
    #[error("malformed {what}: {detail}")]
    Malformed { what: String, detail: String },
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Resource(#[from] ResourceError),
    #[error(transparent)]
    State(#[from] QError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "rtl", version, about = "Resource cost versus irreversibility: scenarios, bounds and measures")]
struct Cli {
    /// Seed for every stochastic step.
    #[arg(long, global = true, env = "RTL_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct ScenarioArgs {
    /// Approximation error.
    #[arg(long)]
    eps: Option<f64>,
    /// Inverse temperature.
    #[arg(long)]
    beta: Option<f64>,
    /// Level splitting of the spin.
    #[arg(long = "hbar-omega")]
    hbar_omega: Option<f64>,
    /// Lower excited level (first level for coherence-erasure).
    #[arg(long)]
    e1: Option<f64>,
    /// Upper excited level (second level for coherence-erasure).
    #[arg(long)]
    e2: Option<f64>,
    /// Number of levels kept in the Fisher-information state.
    #[arg(long)]
    truncation: Option<usize>,
}

impl ScenarioArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            eps: self.eps,
            beta: self.beta,
            hbar_omega: self.hbar_omega,
            e1: self.e1,
            e2: self.e2,
            truncation: self.truncation,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a scenario and verify its checks.
    Scenario {
        id: String,
        #[command(flatten)]
        params: ScenarioArgs,
    },
    /// Evaluate one of a scenario's bounds over an error grid.
    Sweep {
        id: String,
        #[command(flatten)]
        params: ScenarioArgs,
        /// Bound to sweep; defaults to the scenario's first sweep.
        #[arg(long)]
        bound: Option<String>,
        #[arg(long, default_value_t = 1e-3)]
        from: f64,
        #[arg(long, default_value_t = 1e-1)]
        to: f64,
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Spacing::Log)]
        spacing: Spacing,
    },
    /// Evaluate a resource measure on a state.
    Measure {
        /// State file: {"dims": [..], "matrix": [[[re, im], ..], ..]}.
        #[arg(long)]
        state: PathBuf,
        /// Theory file: {"kind": "energy"|"athermality"|"coherence"|"qfi"|"magic", ..}.
        #[arg(long)]
        theory: PathBuf,
    },
    /// Evaluate a bound from named inputs.
    Bound {
        theorem: String,
        /// JSON object of named inputs.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Named input as name=value; repeatable and applied after --input.
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Run the seeded invariant suites.
    Selftest {
        /// Fraction of the full instance budget, in (0, 1].
        #[arg(long, default_value_t = 1.0)]
        budget: f64,
        /// Multiplies every tolerance; a negative value forces failures.
        #[arg(long = "tolerance-scale", default_value_t = 1.0, allow_hyphen_values = true)]
        tolerance_scale: f64,
    },
    /// List scenario and bound ids.
    List,
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Malformed { what: what.to_owned(), detail: e.to_string() })
}

fn bound_kind(id: &str) -> Result<BoundKind, CliError> {
    BoundKind::ALL.into_iter().find(|k| k.id() == id).ok_or_else(|| {
        let known: Vec<&str> = BoundKind::ALL.iter().map(|k| k.id()).collect();
        CliError::UnknownId(format!("unknown bound {id:?}; known: {}", known.join(", ")))
    })
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

fn scenario_csv(rep: &ScenarioReport) -> String {
    let mut out = String::from("check,value,relation,target,tolerance,pass\n");
    for c in &rep.checks {
        let rel = serde_json::to_value(c.relation).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default();
        out.push_str(&format!("{},{},{},{},{},{}\n", csv_escape(&c.name), c.value, rel, c.target, c.tolerance, c.pass));
    }
    out
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    scenario: &'a str,
    sweep: &'a Sweep,
}

#[derive(Serialize)]
struct MeasureOutput {
    kind: MeasureKind,
    value: f64,
    constants: HolderConstants,
}

fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = json::to_string(v);
    s.push('\n');
    s
}

/// Rendered output and whether every check passed.
type Outcome = (String, bool);

fn cmd_scenario(cli: &Cli, id: &str, params: &ScenarioArgs) -> Result<Outcome, CliError> {
    let rep = registry::run(id, &params.overrides(), cli.seed)?;
    let text = match cli.format {
        Format::Json => json_line(&rep),
        Format::Csv => scenario_csv(&rep),
    };
    Ok((text, rep.all_passed()))
}

fn cmd_sweep(cli: &Cli, id: &str, params: &ScenarioArgs, bound: Option<&str>, g: EpsGrid) -> Result<Outcome, CliError> {
    let points = g.points()?;
    let rep = registry::run(id, &params.overrides(), cli.seed)?;
    let base = match bound {
        Some(b) => {
            let kind = bound_kind(b)?;
            rep.find_sweep(kind).ok_or_else(|| CliError::Usage(format!("scenario {id} has no {b} sweep")))?
        }
        None => rep.sweeps.first().ok_or_else(|| CliError::Usage(format!("scenario {id} has no error sweep")))?,
    };
    let sweep = base.resample(&points)?;
    if let Some(row) = sweep.rows.iter().find(|r| r.bound == BoundValue::Divergent) {
        return Err(CliError::Usage(format!(
            "the {} bound of scenario {id} diverges at {} = {}; start the grid above zero",
            sweep.bound, sweep.parameter, row.epsilon
        )));
    }
    let text = match cli.format {
        Format::Json => json_line(&SweepOutput { scenario: &rep.id, sweep: &sweep }),
        Format::Csv => sweep.to_csv(),
    };
    Ok((text, rep.all_passed()))
}

fn cmd_measure(cli: &Cli, state: &PathBuf, theory: &PathBuf) -> Result<Outcome, CliError> {
    let rho: State = parse_json(&read_file(state)?, "state")?;
    let desc: MeasureDescriptor = parse_json(&read_file(theory)?, "theory")?;
    let m = desc.build()?;
    let value = m.measure(&rho)?;
    let out = MeasureOutput { kind: m.kind(), value, constants: *m.constants() };
    let text = match cli.format {
        Format::Json => json_line(&out),
        Format::Csv => {
            let c = &out.constants;
            let ap = c.a_prime.map(|x| x.to_string()).unwrap_or_default();
            format!("kind,value,K,a,b,a_prime,c_max\n{},{},{},{},{},{},{}\n", m.kind().name(), value, c.k, c.a, c.b, ap, c.c_max)
        }
    };
    Ok((text, true))
}

fn bound_csv(r: &BoundReport) -> String {
    let mut out = format!("name,value\ntheorem,{}\nbound,{}\n", r.theorem, r.value);
    for (k, v) in &r.intermediates {
        out.push_str(&format!("{k},{v}\n"));
    }
    if !r.flags.is_empty() {
        out.push_str(&format!("flags,{}\n", csv_escape(&r.flags.join(";"))));
    }
    out
}

fn cmd_bound(cli: &Cli, theorem: &str, input: Option<&PathBuf>, set: &[String], eps: Option<f64>, beta: Option<f64>) -> Result<Outcome, CliError> {
    let kind = bound_kind(theorem)?;
    let mut inp: BoundInput = match input {
        Some(p) => parse_json(&read_file(p)?, "bound input")?,
        None => BoundInput::default(),
    };
    for item in set {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects NAME=VALUE, got {item:?}")))?;
        let v: f64 = value.trim().parse().map_err(|_| CliError::Usage(format!("--set {name}: {value:?} is not a number")))?;
        if !inp.set(name.trim(), v) {
            return Err(CliError::Usage(format!("unknown input {name:?}; known: {}", BoundInput::NAMES.join(", "))));
        }
    }
    if let Some(e) = eps {
        inp.epsilon = Some(e);
    }
    if let Some(b) = beta {
        inp.beta = Some(b);
    }
    let rep = bounds::evaluate(kind, &inp)?;
    let text = match cli.format {
        Format::Json => json_line(&rep),
        Format::Csv => bound_csv(&rep),
    };
    Ok((text, true))
}

fn cmd_selftest(cli: &Cli, budget: f64, tolerance_scale: f64) -> Result<Outcome, CliError> {
    if !(budget > 0.0 && budget <= 1.0) {
        return Err(CliError::Usage(format!("--budget must lie in (0, 1], got {budget}")));
    }
    if !tolerance_scale.is_finite() {
        return Err(CliError::Usage("--tolerance-scale must be finite".into()));
    }
    let rep = selftest::run_all(&SelftestOptions { seed: cli.seed, budget, tolerance_scale });
    for s in &rep.suites {
        eprintln!(
            "{:<40} {}  {} of {} cases violate, worst {:e} (tolerance {:e})",
            s.name,
            if s.pass { "PASS" } else { "FAIL" },
            s.violations,
            s.cases,
            s.worst,
            s.tolerance
        );
    }
    let text = match cli.format {
        Format::Json => json_line(&rep),
        Format::Csv => {
            let mut out = String::from("suite,cases,violations,worst,tolerance,pass\n");
            for s in &rep.suites {
                out.push_str(&format!("{},{},{},{},{},{}\n", s.name, s.cases, s.violations, s.worst, s.tolerance, s.pass));
            }
            out
        }
    };
    Ok((text, rep.all_passed()))
}

fn cmd_list(cli: &Cli) -> Result<Outcome, CliError> {
    let bounds: Vec<&str> = BoundKind::ALL.iter().map(|k| k.id()).collect();
    let text = match cli.format {
        Format::Json => {
            let scenarios: BTreeMap<&str, &str> = registry::SCENARIOS.iter().map(|e| (e.id, e.summary)).collect();
            json_line(&serde_json::json!({ "scenarios": scenarios, "bounds": bounds }))
        }
        Format::Csv => {
            let mut out = String::from("kind,id,summary\n");
            for e in registry::SCENARIOS {
                out.push_str(&format!("scenario,{},{}\n", e.id, csv_escape(e.summary)));
            }
            for b in bounds {
                out.push_str(&format!("bound,{b},\n"));
            }
            out
        }
    };
    Ok((text, true))
}

fn dispatch(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Scenario { id, params } => cmd_scenario(cli, id, params),
        Command::Sweep { id, params, bound, from, to, points, spacing } => {
            cmd_sweep(cli, id, params, bound.as_deref(), EpsGrid { from: *from, to: *to, points: *points, spacing: *spacing })
        }
        Command::Measure { state, theory } => cmd_measure(cli, state, theory),
        Command::Bound { theorem, input, set, eps, beta } => cmd_bound(cli, theorem, input.as_ref(), set, *eps, *beta),
        Command::Selftest { budget, tolerance_scale } => cmd_selftest(cli, *budget, *tolerance_scale),
        Command::List => cmd_list(cli),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli).and_then(|(text, ok)| emit(&cli, &text).map(|_| ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("rtl: one or more checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("rtl: {e}");
            ExitCode::from(2)
        }
    }
}
