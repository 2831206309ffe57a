//! Explicit extrapolation (Gragg–Bulirsch–Stoer type) integrator.
//!
//! Each step builds the initial column `T_i1` of the extrapolation tableau
//! from an explicit Euler start followed by `w_i - 1` midpoint steps, then
//! extrapolates row by row until the convergence rule accepts a diagonal
//! entry. Five arithmetic modes share this skeleton:
//!
//! | mode      | state            | right-hand side | kernels                         |
//! |-----------|------------------|-----------------|---------------------------------|
//! | `Double`  | binary64         | binary64        | `axpy`, `scal`                  |
//! | `DMoller` | binary64 + resid | binary64        | Møller compensated updates      |
//! | `Deft`    | value + error    | double-double   | `axpy_error`, `scal_error`      |
//! | `Deft2`   | value + error    | binary64, e_f=0 | `axpy_error`, `scal_error`      |
//! | `DD`      | double-double    | double-double   | double-double arithmetic        |

mod initial;
mod propagation;
mod sequence;
mod step;
mod tableau;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

pub use initial::{initial_approx, Workspace};
pub use propagation::{propagation_coefficients, PropagationTable};
pub use sequence::{coefficients, CoefficientTable, SequenceKind, SupportSequence, MAX_STAGES};
pub use step::{advance_step, check_convergence, zero_tol_accept, StepStats, ZeroTolDecision, ZERO_TOL_SAFETY};
pub use tableau::Tableau;

use crate::blas1::{CompScalar, CompVector};
use crate::eft::{two_sum, DoubleDouble};
use crate::error::{Error, Result};
use crate::problems::IvpProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodMode {
    Double,
    DMoller,
    Deft,
    Deft2,
    DD,
}

impl MethodMode {
    pub const ALL: [MethodMode; 5] =
        [MethodMode::DD, MethodMode::Deft, MethodMode::Deft2, MethodMode::Double, MethodMode::DMoller];

    /// Whether the state carries an error term between steps.
    pub fn carries_error(self) -> bool {
        matches!(self, MethodMode::Deft | MethodMode::Deft2 | MethodMode::DD)
    }

    /// Whether the right-hand side is evaluated in double-double.
    pub fn dd_rhs(self) -> bool {
        matches!(self, MethodMode::Deft | MethodMode::DD)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MethodMode::Double => "double",
            MethodMode::DMoller => "dmoller",
            MethodMode::Deft => "deft",
            MethodMode::Deft2 => "deft2",
            MethodMode::DD => "dd",
        }
    }

    /// Display label in table output.
    pub fn label(self) -> &'static str {
        match self {
            MethodMode::Double => "Double",
            MethodMode::DMoller => "DMøller",
            MethodMode::Deft => "DEFT",
            MethodMode::Deft2 => "DEFT2",
            MethodMode::DD => "DD",
        }
    }
}

impl fmt::Display for MethodMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "double" => Ok(MethodMode::Double),
            "dmoller" | "dmøller" => Ok(MethodMode::DMoller),
            "deft" => Ok(MethodMode::Deft),
            "deft2" => Ok(MethodMode::Deft2),
            "dd" => Ok(MethodMode::DD),
            other => Err(Error::InvalidConfig(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepControl {
    /// `steps` equal steps spanning the whole interval.
    Fixed { steps: usize },
    /// Base step `h0`; a step that fails the acceptance rule is retried with
    /// half the step, at most `max_halvings` times and never below `min_step`.
    /// The next step starts again from `h0`.
    Adaptive { h0: f64, max_halvings: u32, min_step: f64 },
}

impl StepControl {
    pub fn adaptive(h0: f64) -> Self {
        StepControl::Adaptive { h0, max_halvings: 40, min_step: 1e-12 }
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, StepControl::Adaptive { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub sequence: SupportSequence,
    pub mode: MethodMode,
    /// Relative tolerance; zero (with `eps_a` zero) selects the plateau rule.
    pub eps_r: f64,
    pub eps_a: f64,
    pub control: StepControl,
}

impl SolverConfig {
    pub fn new(sequence: SupportSequence, mode: MethodMode, control: StepControl) -> Self {
        Self { sequence, mode, eps_r: 0.0, eps_a: 0.0, control }
    }

    pub fn with_tolerances(mut self, eps_r: f64, eps_a: f64) -> Self {
        self.eps_r = eps_r;
        self.eps_a = eps_a;
        self
    }

    pub fn zero_tolerance(&self) -> bool {
        self.eps_r == 0.0 && self.eps_a == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_r >= 0.0 && self.eps_a >= 0.0) {
            return Err(Error::InvalidConfig("tolerances must be non-negative".into()));
        }
        match self.control {
            StepControl::Fixed { steps: 0 } => {
                Err(Error::InvalidConfig("fixed stepping needs at least one step".into()))
            }
            StepControl::Adaptive { h0, max_halvings, min_step } => {
                if !(h0 > 0.0 && h0.is_finite()) {
                    Err(Error::InvalidConfig(format!("initial step must be positive, got {h0}")))
                } else if max_halvings == 0 {
                    Err(Error::InvalidConfig("adaptive stepping needs max_halvings >= 1".into()))
                } else if !(min_step >= 0.0) {
                    Err(Error::InvalidConfig("min_step must be non-negative".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Outcome of [`integrate`].
#[derive(Debug, Clone)]
pub struct IntegrationReport {
    pub y: CompVector,
    pub t_final: DoubleDouble,
    /// Accepted steps.
    pub steps: usize,
    /// Halvings summed over all steps.
    pub halvings: usize,
    /// Fixed-step steps that took `T_LL` without meeting the acceptance rule.
    pub unconverged_steps: usize,
    /// `stage_histogram[s]` counts steps accepted at stage `s`.
    pub stage_histogram: Vec<usize>,
    pub elapsed: Duration,
}

fn initial_state(problem: &IvpProblem, mode: MethodMode) -> Result<CompVector> {
    let mut y = CompVector::from_dd(problem.y0())?;
    if !mode.carries_error() {
        y.clear_errors();
    }
    Ok(y)
}

/// Integrates `problem` over its whole interval.
pub fn integrate(problem: &IvpProblem, config: &SolverConfig) -> Result<IntegrationReport> {
    config.validate()?;
    let start = Instant::now();
    let coeffs = coefficients(&config.sequence);
    let mut ws = Workspace::new(problem.dim());
    let mut y = initial_state(problem, config.mode)?;
    let mut hist = vec![0usize; config.sequence.stages() + 1];
    let (mut steps, mut halvings, mut unconverged) = (0usize, 0usize, 0usize);
    let span = two_sum(problem.t_end(), -problem.t_start());
    let span = DoubleDouble::from_pair(span.s, span.e);
    let t_start = DoubleDouble::from(problem.t_start());
    let t_end = DoubleDouble::from(problem.t_end());

    let mut record = |stats: &StepStats| {
        steps += 1;
        halvings += stats.halvings as usize;
        hist[stats.stages_used] += 1;
        if !stats.accepted {
            unconverged += 1;
        }
    };

    let t_final = match config.control {
        StepControl::Fixed { steps: n } => {
            let h_dd = span.div_f64(n as f64);
            let h = CompScalar::from(h_dd);
            for k in 0..n {
                // index multiplication keeps t free of drift
                let t = if config.mode.carries_error() {
                    t_start.accurate_add(h_dd.mul_f64(k as f64))
                } else {
                    DoubleDouble::from(problem.t_start() + k as f64 * h.v)
                };
                let (next, stats) = advance_step(problem, t, &y, h, config, &coeffs, &mut ws)?;
                y = next;
                record(&stats);
            }
            t_end
        }
        StepControl::Adaptive { h0, .. } => {
            let mut t = t_start;
            loop {
                let remaining = t_end.accurate_sub(t);
                if remaining.hi <= 0.0 {
                    break;
                }
                let last = h0 >= remaining.hi;
                let h = if last { CompScalar::from(remaining) } else { CompScalar::from(h0) };
                let (next, stats) = advance_step(problem, t, &y, h, config, &coeffs, &mut ws)?;
                y = next;
                t = if last && stats.halvings == 0 { t_end } else { t.accurate_add(DoubleDouble::from(stats.h_used)) };
                record(&stats);
            }
            t
        }
    };

    Ok(IntegrationReport {
        y,
        t_final,
        steps,
        halvings,
        unconverged_steps: unconverged,
        stage_histogram: hist,
        elapsed: start.elapsed(),
    })
}
