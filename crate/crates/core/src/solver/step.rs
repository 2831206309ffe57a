//! One extrapolation step: tableau construction, acceptance, step halving.

use super::{initial_approx, CoefficientTable, MethodMode, SolverConfig, StepControl, Tableau, Workspace};
use crate::blas1::{norm_inf, CompScalar, CompVector};
use crate::eft::{two_sum, DoubleDouble, UNIT_ROUNDOFF};
use crate::error::{Error, Result};
use crate::problems::IvpProblem;

/// Safety factor of the final-stage check under zero tolerance.
pub const ZERO_TOL_SAFETY: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    /// False when a fixed step took `T_LL` without meeting the acceptance rule.
    pub accepted: bool,
    pub stages_used: usize,
    pub halvings: u32,
    /// Diagonal correction of the accepted entry; zero for a one-stage sequence.
    pub corr_at_accept: f64,
    pub t_reached: DoubleDouble,
    /// Step actually taken.
    pub h_used: CompScalar,
}

/// `corr <= eps_r * norm_inf(t_prev) + eps_a`.
pub fn check_convergence(corr: f64, t_prev: &CompVector, eps_r: f64, eps_a: f64) -> bool {
    corr <= eps_r * norm_inf(t_prev) + eps_a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroTolDecision {
    Continue,
    /// Accept the diagonal entry of this stage.
    Accept(usize),
    Fail,
}

/// Plateau rule used when both tolerances are zero.
///
/// `corrs[s - 1]` is the diagonal correction of stage `s` and `norms[s - 1]`
/// is `norm_inf(T_ss)`; stage 1 has no correction and callers store
/// `f64::INFINITY` there. Only the last two stages are consulted.
///
/// A rise counts as the round-off plateau only if the earlier correction is
/// itself below `ZERO_TOL_SAFETY * u` relative to its entry; a rise above that
/// means truncation error still dominates.
pub fn zero_tol_accept(corrs: &[f64], norms: &[f64], max_stages: usize) -> ZeroTolDecision {
    let i = corrs.len();
    assert_eq!(i, norms.len(), "one norm per stage");
    if i < 2 {
        return ZeroTolDecision::Continue;
    }
    let (p, c) = (corrs[i - 2], corrs[i - 1]);
    if !c.is_finite() || !norms[i - 1].is_finite() {
        ZeroTolDecision::Fail
    } else if c == 0.0 {
        ZeroTolDecision::Accept(i)
    } else if c >= p && p <= ZERO_TOL_SAFETY * UNIT_ROUNDOFF * norms[i - 2] {
        ZeroTolDecision::Accept(i - 1)
    } else if i >= max_stages {
        if c <= ZERO_TOL_SAFETY * UNIT_ROUNDOFF * norms[i - 1] {
            ZeroTolDecision::Accept(i)
        } else {
            ZeroTolDecision::Fail
        }
    } else {
        ZeroTolDecision::Continue
    }
}

enum Attempt {
    Accepted { y: CompVector, stage: usize, corr: f64 },
    Exhausted { y: CompVector, corr: f64 },
}

fn attempt(
    problem: &IvpProblem,
    t_old: DoubleDouble,
    y: &CompVector,
    h: CompScalar,
    config: &SolverConfig,
    coeffs: &CoefficientTable,
    ws: &mut Workspace,
) -> Result<Attempt> {
    let l = config.sequence.stages();
    let zero_tol = config.zero_tolerance();
    // Fixed steps with zero tolerance always build the full tableau; the
    // plateau rule only decides when an adaptive step must be halved.
    let plateau = config.control.is_adaptive();
    let mut tab = Tableau::new(coeffs);
    let mut corrs = vec![f64::INFINITY];
    let mut norms = Vec::with_capacity(l);
    for (idx, &w) in config.sequence.w().iter().enumerate() {
        let t_i1 = initial_approx(problem, t_old, y, h, w, config.mode, ws)?;
        let i = tab.push_initial(t_i1)?;
        debug_assert_eq!(i, idx + 1);
        if i == 1 {
            norms.push(norm_inf(tab.diag(1)));
            if l == 1 {
                return Ok(Attempt::Accepted { y: tab.into_entry(1, 1), stage: 1, corr: 0.0 });
            }
            continue;
        }
        tab.extrapolate_row(i, config.mode)?;
        let corr = tab.corr(i, i);
        if !zero_tol {
            if check_convergence(corr, tab.get(i, i - 1), config.eps_r, config.eps_a) {
                return Ok(Attempt::Accepted { y: tab.into_entry(i, i), stage: i, corr });
            }
            if i == l {
                return Ok(Attempt::Exhausted { y: tab.into_entry(i, i), corr });
            }
            continue;
        }
        if !plateau {
            // the convergence test with zero tolerances holds only for an exactly zero correction
            if corr == 0.0 {
                return Ok(Attempt::Accepted { y: tab.into_entry(i, i), stage: i, corr });
            }
            if i == l {
                let y = tab.into_entry(i, i);
                return Ok(if corr <= ZERO_TOL_SAFETY * UNIT_ROUNDOFF * norm_inf(&y) {
                    Attempt::Accepted { y, stage: i, corr }
                } else {
                    Attempt::Exhausted { y, corr }
                });
            }
            continue;
        }
        corrs.push(corr);
        norms.push(norm_inf(tab.diag(i)));
        match zero_tol_accept(&corrs, &norms, l) {
            ZeroTolDecision::Continue => {}
            ZeroTolDecision::Accept(s) => {
                let corr = corrs[s - 1];
                return Ok(Attempt::Accepted { y: tab.into_entry(s, s), stage: s, corr });
            }
            ZeroTolDecision::Fail => {
                return Ok(Attempt::Exhausted { y: tab.into_entry(i, i), corr });
            }
        }
    }
    unreachable!("zero_tol_accept decides at the last stage")
}

fn finish(mut y: CompVector, mode: MethodMode) -> CompVector {
    let (v, e) = y.parts_mut();
    match mode {
        MethodMode::Double => {}
        MethodMode::DMoller => {
            // the Møller residual does not survive the step
            for (vk, ek) in v.iter_mut().zip(e.iter_mut()) {
                *vk += *ek;
                *ek = 0.0;
            }
        }
        MethodMode::Deft | MethodMode::Deft2 | MethodMode::DD => {
            // Renormalize so that e stays below ulp(v)/2. Without this, e keeps
            // an absolute size set by early rounding errors and swamps
            // components that later decay far below it.
            for (vk, ek) in v.iter_mut().zip(e.iter_mut()) {
                let s = two_sum(*vk, *ek);
                *vk = s.s;
                *ek = s.e;
            }
        }
    }
    y
}

/// Advances `y` from `t_old` by `h`, halving `h` on failure in adaptive mode.
pub fn advance_step(
    problem: &IvpProblem,
    t_old: DoubleDouble,
    y: &CompVector,
    h: CompScalar,
    config: &SolverConfig,
    coeffs: &CoefficientTable,
    ws: &mut Workspace,
) -> Result<(CompVector, StepStats)> {
    if !(h.v > 0.0) {
        return Err(Error::InvalidConfig(format!("step must be positive, got {}", h.v)));
    }
    let mut h = h;
    let mut halvings = 0u32;
    loop {
        let done = |y: CompVector, stage: usize, corr: f64, accepted: bool, halvings: u32| {
            let stats = StepStats {
                accepted,
                stages_used: stage,
                halvings,
                corr_at_accept: corr,
                t_reached: t_old.accurate_add(DoubleDouble::from(h)),
                h_used: h,
            };
            (finish(y, config.mode), stats)
        };
        match attempt(problem, t_old, y, h, config, coeffs, ws)? {
            Attempt::Accepted { y, stage, corr } => return Ok(done(y, stage, corr, true, halvings)),
            Attempt::Exhausted { y, corr } => match config.control {
                StepControl::Fixed { .. } => {
                    let l = config.sequence.stages();
                    return Ok(done(y, l, corr, false, halvings));
                }
                StepControl::Adaptive { max_halvings, min_step, .. } => {
                    let next = CompScalar::new(0.5 * h.v, 0.5 * h.e);
                    if halvings >= max_halvings || next.v < min_step {
                        return Err(Error::Breakdown { t: t_old.hi, h: h.v, halvings: halvings as usize });
                    }
                    h = next;
                    halvings += 1;
                }
            },
        }
    }
}
