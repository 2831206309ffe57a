use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use eft_ode::problems::DEFAULT_RESONANCE_ALPHA;
use eft_ode::solver::{propagation_coefficients, MethodMode, SequenceKind, SupportSequence};
use eft_ode_bench::experiment::DEFAULT_MAX_HALVINGS;
use eft_ode_bench::presets::{self, RESONANCE_H0, TABLE_STEPS};
use eft_ode_bench::{run_matrix, write_csv, ExperimentSpec, ProblemSpec, RunOutcome, Status, Stepping};

#[derive(Parser)]
#[command(name = "bench", version, about = "Extrapolation ODE experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a single configuration.
    Run(RunArgs),
    /// Linear system, Romberg L=4, all modes.
    Table2(TableArgs),
    /// Linear system, harmonic L=6, all modes.
    Table3(TableArgs),
    /// Resonance problem with adaptive steps.
    Table4(Table4Args),
    /// Round-off propagation factors r_ij.
    Propagation(PropArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Linear,
    Resonance,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Double,
    Dmoller,
    Deft,
    Deft2,
    Dd,
}

impl From<ModeArg> for MethodMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Double => MethodMode::Double,
            ModeArg::Dmoller => MethodMode::DMoller,
            ModeArg::Deft => MethodMode::Deft,
            ModeArg::Deft2 => MethodMode::Deft2,
            ModeArg::Dd => MethodMode::DD,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SequenceArg {
    Romberg,
    Harmonic,
}

impl From<SequenceArg> for SequenceKind {
    fn from(s: SequenceArg) -> Self {
        match s {
            SequenceArg::Romberg => SequenceKind::Romberg,
            SequenceArg::Harmonic => SequenceKind::Harmonic,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Timed repetitions; the median is reported.
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Accepted for interface stability; the solver is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value = "linear")]
    problem: ProblemArg,
    /// Dimension of the linear system.
    #[arg(long, default_value_t = 2048)]
    n: usize,
    #[arg(long, default_value_t = DEFAULT_RESONANCE_ALPHA)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "deft")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "romberg")]
    sequence: SequenceArg,
    #[arg(long, default_value_t = 4)]
    stages: usize,
    #[arg(long, conflicts_with_all = ["adaptive", "h0"])]
    steps: Option<usize>,
    #[arg(long)]
    adaptive: bool,
    #[arg(long, requires = "adaptive")]
    h0: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_MAX_HALVINGS)]
    max_halvings: u32,
    #[arg(long, default_value_t = 0.0)]
    eps_r: f64,
    #[arg(long, default_value_t = 0.0)]
    eps_a: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct TableArgs {
    /// Step counts to run (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = TABLE_STEPS)]
    steps: Vec<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Table4Args {
    #[arg(long, default_value_t = RESONANCE_H0)]
    h0: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct PropArgs {
    #[arg(long, value_enum, default_value = "romberg")]
    sequence: SequenceArg,
    #[arg(long, default_value_t = 20)]
    stages: usize,
}

fn single_spec(a: &RunArgs) -> ExperimentSpec {
    let problem = match a.problem {
        ProblemArg::Linear => ProblemSpec::Linear { n: a.n },
        ProblemArg::Resonance => ProblemSpec::Resonance { alpha: a.alpha },
    };
    let mut spec = match (a.adaptive, a.steps) {
        (true, _) => {
            let span = match a.problem {
                ProblemArg::Linear => 0.25,
                ProblemArg::Resonance => 37.0,
            };
            let h0 = a.h0.unwrap_or(span / 64.0);
            let mut s = ExperimentSpec::adaptive(problem, a.mode.into(), a.sequence.into(), a.stages, h0);
            s.stepping = Stepping::Adaptive { h0, max_halvings: a.max_halvings };
            s
        }
        (false, steps) => {
            ExperimentSpec::fixed(problem, a.mode.into(), a.sequence.into(), a.stages, steps.unwrap_or(512))
        }
    };
    spec = spec.with_tolerances(a.eps_r, a.eps_a).with_reps(a.common.reps);
    spec
}

fn summary(outcomes: &[RunOutcome]) {
    eprintln!(
        "{:<24} {:>5} {:<8} {:<9} {:>3} {:>6} {:>6} {:>5} {:>9} {:>11} {:>10}  stages",
        "problem", "n", "mode", "sequence", "L", "req", "taken", "halv", "eps_r", "max_rel_err", "time_s"
    );
    for o in outcomes {
        let r = &o.row;
        let hist: Vec<String> =
            o.stage_histogram.iter().enumerate().filter(|(_, &c)| c > 0).map(|(s, c)| format!("{s}:{c}")).collect();
        eprintln!(
            "{:<24} {:>5} {:<8} {:<9} {:>3} {:>6} {:>6} {:>5} {:>9.1e} {:>11.3e} {:>10.4}  {}{}",
            r.problem,
            r.n,
            r.mode,
            r.sequence,
            r.stages,
            r.steps_req,
            r.steps_taken,
            r.halvings,
            r.eps_r,
            r.max_rel_err,
            r.elapsed_s,
            hist.join(" "),
            match (&r.status, &o.message) {
                (Status::Ok, None) => String::new(),
                (s, Some(m)) => format!("  [{s}: {m}]"),
                (s, None) => format!("  [{s}]"),
            }
        );
    }
}

fn emit(specs: &[ExperimentSpec], common: &Common) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let outcomes = run_matrix(specs)?;
    summary(&outcomes);
    let rows: Vec<_> = outcomes.iter().map(|o| o.row.clone()).collect();
    match &common.out {
        Some(path) => write_csv(File::create(path)?, &rows)?,
        None => write_csv(io::stdout().lock(), &rows)?,
    }
    let failed = rows.iter().any(|r| r.status != Status::Ok);
    Ok(if failed { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Run(a) => emit(&[single_spec(a)], &a.common),
        Cmd::Table2(a) => emit(&presets::table2(&a.steps, a.common.reps), &a.common),
        Cmd::Table3(a) => emit(&presets::table3(&a.steps, a.common.reps), &a.common),
        Cmd::Table4(a) => {
            eprintln!("h0 = {:e}", a.h0);
            emit(&presets::table4(a.h0, a.common.reps), &a.common)
        }
        Cmd::Propagation(a) => SupportSequence::new(a.sequence.into(), a.stages)
            .map(|seq| {
                let t = propagation_coefficients(&seq);
                let _ = io::stdout().write_all(presets::format_propagation(&t).as_bytes());
                ExitCode::SUCCESS
            })
            .map_err(Into::into),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
