//! Experiment matrices of the reference tables.

use std::fmt::Write;

use eft_ode::problems::DEFAULT_RESONANCE_ALPHA;
use eft_ode::solver::{MethodMode, PropagationTable, SequenceKind};

use crate::experiment::{ExperimentSpec, ProblemSpec};

pub const LINEAR_DIM: usize = 2048;
pub const TABLE_STEPS: [usize; 5] = [512, 1024, 2048, 4096, 8192];
/// Base step of the resonance runs; each step starts from it again after
/// any halvings.
pub const RESONANCE_H0: f64 = 0.5;

/// Column order of the linear tables.
pub const LINEAR_MODES: [MethodMode; 5] =
    [MethodMode::DD, MethodMode::Deft, MethodMode::Deft2, MethodMode::Double, MethodMode::DMoller];

fn linear_matrix(kind: SequenceKind, stages: usize, steps: &[usize], reps: usize) -> Vec<ExperimentSpec> {
    let p = ProblemSpec::Linear { n: LINEAR_DIM };
    steps
        .iter()
        .flat_map(|&n| LINEAR_MODES.iter().map(move |&m| ExperimentSpec::fixed(p, m, kind, stages, n).with_reps(reps)))
        .collect()
}

/// Linear system, Romberg `L = 4`.
pub fn table2(steps: &[usize], reps: usize) -> Vec<ExperimentSpec> {
    linear_matrix(SequenceKind::Romberg, 4, steps, reps)
}

/// Linear system, harmonic `L = 6`.
pub fn table3(steps: &[usize], reps: usize) -> Vec<ExperimentSpec> {
    linear_matrix(SequenceKind::Harmonic, 6, steps, reps)
}

/// Resonance problem with adaptive steps: Romberg `L = 12` in all five
/// modes, then harmonic `L = 18` in DD and DEFT. DD rows use a nonzero
/// relative tolerance.
pub fn table4(h0: f64, reps: usize) -> Vec<ExperimentSpec> {
    let p = ProblemSpec::Resonance { alpha: DEFAULT_RESONANCE_ALPHA };
    let rom = |m| ExperimentSpec::adaptive(p, m, SequenceKind::Romberg, 12, h0).with_reps(reps);
    let har = |m| ExperimentSpec::adaptive(p, m, SequenceKind::Harmonic, 18, h0).with_reps(reps);
    vec![
        rom(MethodMode::DD).with_tolerances(1e-16, 0.0),
        rom(MethodMode::Deft),
        rom(MethodMode::Deft2),
        rom(MethodMode::Double),
        rom(MethodMode::DMoller),
        har(MethodMode::DD).with_tolerances(1e-18, 0.0),
        har(MethodMode::Deft),
    ]
}

/// Lower triangle of `r_ij`, one row per line, followed by the maximum.
pub fn format_propagation(t: &PropagationTable) -> String {
    let mut s = String::new();
    for i in 1..=t.stages() {
        let cells: Vec<String> = t.row(i).iter().map(|r| format!("{r:>11.4e}")).collect();
        let _ = writeln!(s, "{i:>3} {}", cells.join(" "));
    }
    let _ = writeln!(s, "max |r_ij| = {:.6e}", t.max_abs());
    s
}
