use std::time::{Duration, Instant};

use eft_ode::problems::{linear_problem, max_rel_error, resonance_problem, IvpProblem};
use eft_ode::solver::{
    integrate, IntegrationReport, MethodMode, SequenceKind, SolverConfig, StepControl, SupportSequence,
};
use eft_ode::{DoubleDouble, Error, Result};

use crate::row::{ResultRow, Status};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemSpec {
    Linear { n: usize },
    Resonance { alpha: f64 },
}

impl ProblemSpec {
    pub fn build(&self) -> Result<IvpProblem> {
        match *self {
            ProblemSpec::Linear { n } => linear_problem(n),
            ProblemSpec::Resonance { alpha } => resonance_problem(alpha),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            ProblemSpec::Linear { .. } => "linear".to_string(),
            ProblemSpec::Resonance { alpha } => format!("resonance({alpha})"),
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            ProblemSpec::Linear { n } => n,
            ProblemSpec::Resonance { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Stepping {
    Fixed { steps: usize },
    Adaptive { h0: f64, max_halvings: u32 },
}

pub const DEFAULT_MAX_HALVINGS: u32 = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problem: ProblemSpec,
    pub mode: MethodMode,
    pub sequence: SequenceKind,
    pub stages: usize,
    pub stepping: Stepping,
    pub eps_r: f64,
    pub eps_a: f64,
    /// Timed repetitions; the reported time is their median.
    pub reps: usize,
}

impl ExperimentSpec {
    pub fn fixed(problem: ProblemSpec, mode: MethodMode, sequence: SequenceKind, stages: usize, steps: usize) -> Self {
        Self { problem, mode, sequence, stages, stepping: Stepping::Fixed { steps }, eps_r: 0.0, eps_a: 0.0, reps: 1 }
    }

    pub fn adaptive(problem: ProblemSpec, mode: MethodMode, sequence: SequenceKind, stages: usize, h0: f64) -> Self {
        let stepping = Stepping::Adaptive { h0, max_halvings: DEFAULT_MAX_HALVINGS };
        Self { stepping, ..Self::fixed(problem, mode, sequence, stages, 1) }
    }

    pub fn with_tolerances(mut self, eps_r: f64, eps_a: f64) -> Self {
        self.eps_r = eps_r;
        self.eps_a = eps_a;
        self
    }

    pub fn with_reps(mut self, reps: usize) -> Self {
        self.reps = reps;
        self
    }

    pub fn config(&self) -> Result<SolverConfig> {
        if self.reps == 0 {
            return Err(Error::InvalidConfig("reps must be at least 1".into()));
        }
        let control = match self.stepping {
            Stepping::Fixed { steps } => StepControl::Fixed { steps },
            Stepping::Adaptive { h0, max_halvings } => StepControl::Adaptive { h0, max_halvings, min_step: 0.0 },
        };
        let seq = SupportSequence::new(self.sequence, self.stages)?;
        let cfg = SolverConfig::new(seq, self.mode, control).with_tolerances(self.eps_r, self.eps_a);
        cfg.validate()?;
        Ok(cfg)
    }

    /// Requested step count; for adaptive runs, the number of base steps
    /// needed to span the interval.
    pub fn steps_requested(&self, span: f64) -> usize {
        match self.stepping {
            Stepping::Fixed { steps } => steps,
            Stepping::Adaptive { h0, .. } => (span / h0).ceil() as usize,
        }
    }
}

/// A [`ResultRow`] plus data that does not fit the CSV schema.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub row: ResultRow,
    /// `stage_histogram[s]` counts steps accepted at stage `s`.
    pub stage_histogram: Vec<usize>,
    /// Fixed steps that reached stage L without meeting the acceptance rule.
    pub unconverged_steps: usize,
    pub message: Option<String>,
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2
    }
}

fn timed(problem: &IvpProblem, cfg: &SolverConfig) -> (Result<IntegrationReport>, Duration) {
    let start = Instant::now();
    let r = integrate(problem, cfg);
    (r, start.elapsed())
}

/// Runs one experiment. Invalid specs are errors; solver failures become
/// rows with a failure status.
pub fn run(spec: &ExperimentSpec) -> Result<RunOutcome> {
    let cfg = spec.config()?;
    let problem = spec.problem.build()?;
    let reference = match problem.analytic(DoubleDouble::from(problem.t_end())) {
        Some(r) => r?,
        None => return Err(Error::InvalidProblem("no reference solution".into())),
    };

    if spec.reps > 1 {
        let _ = integrate(&problem, &cfg);
    }
    let mut times = Vec::with_capacity(spec.reps);
    let mut first: Option<Result<IntegrationReport>> = None;
    let mut nondeterministic = false;
    for _ in 0..spec.reps {
        let (r, dt) = timed(&problem, &cfg);
        times.push(dt);
        match &first {
            None => first = Some(r),
            Some(Ok(a)) => {
                if !matches!(&r, Ok(b) if b.y == a.y) {
                    nondeterministic = true;
                }
            }
            Some(Err(_)) => {}
        }
    }
    let elapsed = median(times).as_secs_f64().max(f64::MIN_POSITIVE);
    let mut row = ResultRow {
        problem: spec.problem.name(),
        n: spec.problem.dim(),
        mode: spec.mode.to_string(),
        sequence: spec.sequence.to_string(),
        stages: spec.stages,
        steps_req: spec.steps_requested(problem.t_end() - problem.t_start()),
        steps_taken: 0,
        halvings: 0,
        eps_r: spec.eps_r,
        eps_a: spec.eps_a,
        max_rel_err: f64::NAN,
        elapsed_s: elapsed,
        status: Status::Ok,
    };
    let outcome = match first.expect("reps >= 1") {
        Ok(rep) => {
            row.steps_taken = rep.steps;
            row.halvings = rep.halvings;
            let mut message = None;
            match max_rel_error(&rep.y, &reference) {
                Ok(e) => row.max_rel_err = e,
                Err(e) => {
                    row.status = Status::Error;
                    message = Some(e.to_string());
                }
            }
            if nondeterministic {
                row.status = Status::Error;
                message = Some("repetitions disagree".into());
            }
            RunOutcome { row, stage_histogram: rep.stage_histogram, unconverged_steps: rep.unconverged_steps, message }
        }
        Err(e) => {
            row.status = if matches!(e, Error::Breakdown { .. }) { Status::Breakdown } else { Status::Error };
            RunOutcome {
                row,
                stage_histogram: vec![0; spec.stages + 1],
                unconverged_steps: 0,
                message: Some(e.to_string()),
            }
        }
    };
    Ok(outcome)
}

/// Runs each spec in order. Execution is sequential so timings do not
/// contend with each other.
pub fn run_matrix(specs: &[ExperimentSpec]) -> Result<Vec<RunOutcome>> {
    specs.iter().map(run).collect()
}
