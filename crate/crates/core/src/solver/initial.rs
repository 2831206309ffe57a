//! Initial column `T_i1`: one explicit Euler substep followed by `w - 1`
//! explicit midpoint substeps of size `h = H / w`.

use std::mem;

use super::MethodMode;
use crate::blas1::{axpy, axpy_error_parts, moller_axpy, CompScalar, CompVector};
use crate::eft::DoubleDouble;
use crate::error::{Error, Result};
use crate::problems::IvpProblem;

/// Scratch buffers reused across stages and steps.
#[derive(Debug, Clone)]
pub struct Workspace {
    f_v: Vec<f64>,
    f_e: Vec<f64>,
    y_dd: Vec<DoubleDouble>,
    f_dd: Vec<DoubleDouble>,
}

impl Workspace {
    pub fn new(n: usize) -> Self {
        Self {
            f_v: vec![0.0; n],
            f_e: vec![0.0; n],
            y_dd: vec![DoubleDouble::ZERO; n],
            f_dd: vec![DoubleDouble::ZERO; n],
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.f_v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: self.f_v.len() });
        }
        Ok(())
    }

    /// `(f_v, f_e)` from the double-double right-hand side at `(t, v + e)`.
    fn eval_split(&mut self, problem: &IvpProblem, t: DoubleDouble, y: &CompVector) -> Result<()> {
        if let Some(r) = problem.rhs_dd_split(t, y.v(), y.e(), &mut self.f_v, &mut self.f_e) {
            return r;
        }
        for (d, (&v, &e)) in self.y_dd.iter_mut().zip(y.v().iter().zip(y.e())) {
            *d = DoubleDouble::new(v, e);
        }
        problem.rhs_dd(t, &self.y_dd, &mut self.f_dd)?;
        for ((fv, fe), f) in self.f_v.iter_mut().zip(self.f_e.iter_mut()).zip(&self.f_dd) {
            *fv = f.hi;
            *fe = f.lo;
        }
        Ok(())
    }
}

/// Computes `T_i1 = y_w` for one step of size `big_h` starting at `(t_old, y)`.
pub fn initial_approx(
    problem: &IvpProblem,
    t_old: DoubleDouble,
    y: &CompVector,
    big_h: CompScalar,
    w: u64,
    mode: MethodMode,
    ws: &mut Workspace,
) -> Result<CompVector> {
    if w < 2 || !w.is_multiple_of(2) {
        return Err(Error::InvalidConfig(format!("substep count must be even and >= 2, got {w}")));
    }
    let n = problem.dim();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: y.len() });
    }
    ws.check(n)?;
    let wf = w as f64;
    match mode {
        MethodMode::Double => {
            let h = big_h.v / wf;
            let t0 = t_old.hi;
            let mut prev = y.v().to_vec();
            let mut cur = prev.clone();
            problem.rhs_double(t0, &prev, &mut ws.f_v)?;
            axpy(h, &ws.f_v, &mut cur)?;
            for k in 1..w {
                problem.rhs_double(t0 + k as f64 * h, &cur, &mut ws.f_v)?;
                axpy(2.0 * h, &ws.f_v, &mut prev)?;
                mem::swap(&mut prev, &mut cur);
            }
            CompVector::from_values(cur)
        }
        MethodMode::DMoller => {
            let h = big_h.v / wf;
            let t0 = t_old.hi;
            let mut s_prev = y.v().to_vec();
            let mut r_prev = vec![0.0; n];
            let mut s_cur = s_prev.clone();
            let mut r_cur = vec![0.0; n];
            problem.rhs_double(t0, &s_prev, &mut ws.f_v)?;
            moller_axpy(h, &ws.f_v, &mut s_cur, &mut r_cur)?;
            for k in 1..w {
                problem.rhs_double(t0 + k as f64 * h, &s_cur, &mut ws.f_v)?;
                moller_axpy(2.0 * h, &ws.f_v, &mut s_prev, &mut r_prev)?;
                mem::swap(&mut s_prev, &mut s_cur);
                mem::swap(&mut r_prev, &mut r_cur);
            }
            CompVector::new(s_cur, r_cur)
        }
        MethodMode::Deft | MethodMode::Deft2 => {
            let h_dd = DoubleDouble::from(big_h).div_f64(wf);
            let h = CompScalar::from(h_dd);
            let two_h = CompScalar::new(2.0 * h.v, 2.0 * h.e);
            let dd_rhs = mode.dd_rhs();
            if !dd_rhs {
                ws.f_e.fill(0.0);
            }
            let mut prev = y.clone();
            let mut cur = y.clone();
            let mut t = t_old;
            for k in 0..w {
                if dd_rhs {
                    ws.eval_split(problem, t, &cur)?;
                } else {
                    problem.rhs_double(t.hi, cur.v(), &mut ws.f_v)?;
                }
                if k == 0 {
                    axpy_error_parts(h, &ws.f_v, &ws.f_e, &mut cur);
                } else {
                    axpy_error_parts(two_h, &ws.f_v, &ws.f_e, &mut prev);
                    mem::swap(&mut prev, &mut cur);
                }
                t = t_old.accurate_add(h_dd.mul_f64((k + 1) as f64));
            }
            Ok(cur)
        }
        MethodMode::DD => {
            let h = DoubleDouble::from(big_h).div_f64(wf);
            let two_h = h.mul_pwr2(2.0);
            let mut prev = y.to_dd();
            let mut cur = prev.clone();
            problem.rhs_dd(t_old, &prev, &mut ws.f_dd)?;
            for (c, &f) in cur.iter_mut().zip(&ws.f_dd) {
                *c += h * f;
            }
            for k in 1..w {
                let t = t_old + h.mul_f64(k as f64);
                problem.rhs_dd(t, &cur, &mut ws.f_dd)?;
                for (p, &f) in prev.iter_mut().zip(&ws.f_dd) {
                    *p += two_h * f;
                }
                mem::swap(&mut prev, &mut cur);
            }
            CompVector::from_dd(&cur)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::RightHandSide;

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

    struct Still;

    impl RightHandSide for Still {
        fn eval(&self, _t: f64, _y: &[f64], f: &mut [f64]) -> Result<()> {
            f.fill(0.0);
            Ok(())
        }

        fn eval_dd(&self, _t: DoubleDouble, _y: &[DoubleDouble], f: &mut [DoubleDouble]) -> Result<()> {
            f.fill(DoubleDouble::ZERO);
            Ok(())
        }
    }

    fn decay() -> IvpProblem {
        IvpProblem::new("decay", 0.0, 1.0, vec![DoubleDouble::ONE], Box::new(Decay)).unwrap()
    }

    #[test]
    fn hand_evaluated_gragg_step() {
        let p = decay();
        let y = CompVector::from_values(vec![1.0]).unwrap();
        let mut ws = Workspace::new(1);
        for mode in MethodMode::ALL {
            let t = initial_approx(&p, DoubleDouble::ZERO, &y, 0.25.into(), 2, mode, &mut ws).unwrap();
            assert_eq!(t.v(), [0.78125], "{mode}");
            assert_eq!(t.e(), [0.0], "{mode}");
        }
    }

    #[test]
    fn zero_field_keeps_state() {
        let p = IvpProblem::new("still", 0.0, 1.0, vec![DoubleDouble::ONE; 2], Box::new(Still)).unwrap();
        let y = CompVector::new(vec![1.5, -2.0], vec![1e-17, 3e-18]).unwrap();
        let mut ws = Workspace::new(2);
        for mode in [MethodMode::Deft, MethodMode::Deft2, MethodMode::DD] {
            let t = initial_approx(&p, DoubleDouble::ZERO, &y, 0.5.into(), 2, mode, &mut ws).unwrap();
            assert_eq!(t, y, "{mode}");
        }
        let y = CompVector::from_values(vec![1.5, -2.0]).unwrap();
        for mode in [MethodMode::Double, MethodMode::DMoller] {
            let t = initial_approx(&p, DoubleDouble::ZERO, &y, 0.5.into(), 2, mode, &mut ws).unwrap();
            assert_eq!(t, y, "{mode}");
        }
    }

    #[test]
    fn rejects_odd_substeps() {
        let p = decay();
        let y = CompVector::from_values(vec![1.0]).unwrap();
        let mut ws = Workspace::new(1);
        for w in [0, 1, 3] {
            let r = initial_approx(&p, DoubleDouble::ZERO, &y, 0.25.into(), w, MethodMode::Double, &mut ws);
            assert!(r.is_err());
        }
    }

    #[test]
    fn dimension_checks() {
        let p = decay();
        let y = CompVector::from_values(vec![1.0, 2.0]).unwrap();
        let mut ws = Workspace::new(1);
        let r = initial_approx(&p, DoubleDouble::ZERO, &y, 0.25.into(), 2, MethodMode::Deft, &mut ws);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }
}
