use eft_ode::blas1::CompScalar;
use eft_ode::problems::{linear_problem, max_rel_error, resonance_problem, IvpProblem, RightHandSide};
use eft_ode::solver::{
    advance_step, coefficients, integrate, propagation_coefficients, MethodMode, SequenceKind, SolverConfig,
    StepControl, SupportSequence, Workspace,
};
use eft_ode::{CompVector, DoubleDouble, Result};
use eft_oracle::{BigFloat, PREC};
use proptest::prelude::*;

struct Decay;

impl RightHandSide for Decay {
    fn eval(&self, _t: f64, y: &[f64], f: &mut [f64]) -> Result<()> {
        f[0] = -y[0];
        Ok(())
    }

    fn eval_dd(&self, _t: DoubleDouble, y: &[DoubleDouble], f: &mut [DoubleDouble]) -> Result<()> {
        f[0] = -y[0];
        Ok(())
    }
}

fn decay(t_end: f64) -> IvpProblem {
    IvpProblem::new("decay", 0.0, t_end, vec![DoubleDouble::ONE], Box::new(Decay)).unwrap()
}

/// `y1' = 1`, `y2' = t`: the Gragg values at even substeps are exact.
struct Ramp;

impl RightHandSide for Ramp {
    fn eval(&self, t: f64, _y: &[f64], f: &mut [f64]) -> Result<()> {
        f[0] = 1.0;
        f[1] = t;
        Ok(())
    }

    fn eval_dd(&self, t: DoubleDouble, _y: &[DoubleDouble], f: &mut [DoubleDouble]) -> Result<()> {
        f[0] = DoubleDouble::ONE;
        f[1] = t;
        Ok(())
    }
}

fn seq(kind: SequenceKind, l: usize) -> SupportSequence {
    SupportSequence::new(kind, l).unwrap()
}

fn fixed(l: usize, mode: MethodMode, steps: usize) -> SolverConfig {
    SolverConfig::new(seq(SequenceKind::Romberg, l), mode, StepControl::Fixed { steps })
}

fn oracle_exp(x: f64) -> f64 {
    eft_oracle::exp(&BigFloat::from_f64(x), PREC).to_f64()
}

#[test]
fn single_step_decay_all_modes() {
    let p = decay(0.25);
    let want = oracle_exp(-0.25);
    for mode in MethodMode::ALL {
        let r = integrate(&p, &fixed(4, mode, 1)).unwrap();
        let got = r.y.v()[0] + r.y.e()[0];
        assert!((got - want).abs() <= 1e-12 * want, "{mode}: {got} vs {want}");
        assert_eq!(r.steps, 1);
    }
}

#[test]
fn linear_system_reaches_reference() {
    let p = linear_problem(8).unwrap();
    let reference = p.analytic(DoubleDouble::from(0.25)).unwrap().unwrap();
    for (k, r) in reference.iter().enumerate() {
        let want = oracle_exp(-0.25 * (k + 1) as f64);
        assert!((r.to_f64() - want).abs() <= 1e-15 * want);
    }
    for mode in MethodMode::ALL {
        let r = integrate(&p, &fixed(4, mode, 16)).unwrap();
        let err = max_rel_error(&r.y, &reference).unwrap();
        assert!(err < 1e-13, "{mode}: {err:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn modes_agree_bitwise_on_exact_problem(
        a in -1024i32..1024,
        b in -1024i32..1024,
        log_steps in 0u32..5,
        l in 1usize..5,
    ) {
        let y0 = vec![DoubleDouble::from(a as f64 / 64.0), DoubleDouble::from(b as f64 / 64.0)];
        let p = IvpProblem::new("ramp", 0.0, 0.5, y0, Box::new(Ramp)).unwrap();
        let steps = 1usize << log_steps;
        let base = integrate(&p, &fixed(l, MethodMode::Double, steps)).unwrap().y;
        let want = [a as f64 / 64.0 + 0.5, b as f64 / 64.0 + 0.125];
        prop_assert_eq!(base.v(), &want[..]);
        for mode in MethodMode::ALL {
            let y = integrate(&p, &fixed(l, mode, steps)).unwrap().y;
            prop_assert_eq!(&y, &base, "{}", mode);
        }
    }
}

/// Global error of `y' = -y` on `[0, 1]` with `n` steps, `rows` tableau rows.
fn decay_error(rows: usize, mode: MethodMode, n: usize) -> f64 {
    let p = decay(1.0);
    let r = integrate(&p, &fixed(rows - 1, mode, n)).unwrap();
    let want = eft_oracle::exp(&BigFloat::from_f64(-1.0), PREC);
    let got = BigFloat::from_pair(r.y.v()[0], r.y.e()[0]);
    got.rel_err(&want)
}

#[test]
fn extrapolated_rows_converge_with_order_2i() {
    // (rows, mode): Double has room for order 4 and 6; order 8 needs DD to
    // stay above the round-off floor over this range of H.
    for (rows, mode, ns) in [
        (2, MethodMode::Double, [4, 8, 16, 32]),
        (3, MethodMode::Double, [4, 8, 16, 32]),
        (4, MethodMode::DD, [4, 8, 16, 32]),
    ] {
        let errs: Vec<f64> = ns.iter().map(|&n| decay_error(rows, mode, n)).collect();
        let order = 2.0 * rows as f64;
        for w in errs.windows(2) {
            let slope = (w[0] / w[1]).log2();
            assert!((slope - order).abs() <= 0.15 * order, "rows {rows}: slope {slope:.3}, errors {errs:?}");
        }
    }
}

#[test]
fn runs_are_deterministic() {
    let p = linear_problem(64).unwrap();
    for mode in MethodMode::ALL {
        let cfg = fixed(4, mode, 32);
        let a = integrate(&p, &cfg).unwrap();
        let b = integrate(&p, &cfg).unwrap();
        assert_eq!(a.y, b.y, "{mode}");
        assert_eq!(a.stage_histogram, b.stage_histogram);
    }
    let p = resonance_problem(0.99999999).unwrap();
    let cfg = SolverConfig::new(seq(SequenceKind::Romberg, 12), MethodMode::Deft, StepControl::adaptive(0.5));
    let a = integrate(&p, &cfg).unwrap();
    let b = integrate(&p, &cfg).unwrap();
    assert_eq!(a.y, b.y);
    assert_eq!((a.steps, a.halvings), (b.steps, b.halvings));
}

#[test]
fn resonance_peak_forces_exact_halvings() {
    let p = resonance_problem(0.99999999).unwrap();
    let cfg = SolverConfig::new(seq(SequenceKind::Romberg, 12), MethodMode::Deft, StepControl::adaptive(0.5));
    let coeffs = coefficients(&cfg.sequence);
    let mut ws = Workspace::new(2);
    // start just before the first peak near pi/2
    let t0 = DoubleDouble::from(1.5);
    let y = CompVector::from_dd(&p.analytic(t0).unwrap().unwrap()).unwrap();
    let h = CompScalar::from(0.5);
    let (_, stats) = advance_step(&p, t0, &y, h, &cfg, &coeffs, &mut ws).unwrap();
    assert!(stats.accepted);
    assert!(stats.halvings >= 3, "{stats:?}");
    assert_eq!(stats.h_used.v, 0.5 / (1u64 << stats.halvings) as f64);
    assert_eq!(stats.h_used.e, 0.0);
    assert_eq!(stats.t_reached, t0.accurate_add(DoubleDouble::from(stats.h_used.v)));

    let r = integrate(&p, &cfg).unwrap();
    assert!(r.halvings > 0);
    assert_eq!(r.t_final, DoubleDouble::from(37.0));
    let reference = p.analytic(r.t_final).unwrap().unwrap();
    assert!(max_rel_error(&r.y, &reference).unwrap() < 1e-1);
}

#[test]
fn breakdown_is_reported() {
    let p = resonance_problem(0.99999999).unwrap();
    let control = StepControl::Adaptive { h0: 0.5, max_halvings: 2, min_step: 0.0 };
    let cfg = SolverConfig::new(seq(SequenceKind::Romberg, 6), MethodMode::Double, control);
    let err = integrate(&p, &cfg).unwrap_err();
    assert!(matches!(err, eft_ode::Error::Breakdown { halvings: 2, .. }), "{err}");
}

#[test]
fn propagation_factors_follow_recurrence() {
    for kind in [SequenceKind::Romberg, SequenceKind::Harmonic] {
        let s = seq(kind, 20);
        let c = coefficients(&s);
        let r = propagation_coefficients(&s);
        assert_eq!(r.stages(), 21);
        for i in 1..=r.stages() {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            assert_eq!(r.get(i, 1), sign);
            for j in 2..=i {
                let same = r.get(i, j - 1);
                let up = r.get(i - 1, j - 1);
                assert_eq!(r.get(i, j), same + c.get(i, j).v * (same - up), "{kind} r({i},{j})");
            }
        }
    }
}

#[test]
fn propagation_bounds() {
    let rom = propagation_coefficients(&seq(SequenceKind::Romberg, 20)).max_abs();
    assert!(rom < 2.0, "{rom}");
    let har = propagation_coefficients(&seq(SequenceKind::Harmonic, 20)).max_abs();
    assert!((1e5..=1e7).contains(&har), "{har:e}");
}

#[test]
fn resonance_reference_matches_oracle() {
    let p = resonance_problem(0.99999999).unwrap();
    for t in [0.0, 1.0, std::f64::consts::FRAC_PI_2, 20.0, 37.0] {
        let r = p.analytic(DoubleDouble::from(t)).unwrap().unwrap();
        let (s, c) = eft_oracle::sin_cos(&BigFloat::from_f64(t), PREC);
        let a = BigFloat::from_f64(0.99999999);
        let denom = BigFloat::one().sub(&a.mul(&s));
        let y1 = BigFloat::one().div(&denom, PREC);
        let y2 = a.mul(&c).div(&denom.mul(&denom), PREC);
        assert!(BigFloat::from_pair(r[0].hi, r[0].lo).rel_err(&y1) < 1e-22, "y1({t})");
        assert!(BigFloat::from_pair(r[1].hi, r[1].lo).rel_err(&y2) < 1e-22, "y2({t})");
    }
}
