//! Test initial value problems and the error metric used to score runs.

use std::fmt;

use crate::blas1::{nan_max, CompVector};
use crate::eft::{dd_exp, dd_sin_cos, two_sum, DoubleDouble};
use crate::error::{Error, Result};

/// Right-hand side `f(t, y)` of `y' = f(t, y)`, evaluable in binary64 and
/// in double-double.
pub trait RightHandSide: Send + Sync {
    fn eval(&self, t: f64, y: &[f64], f: &mut [f64]) -> Result<()>;

    fn eval_dd(&self, t: DoubleDouble, y: &[DoubleDouble], f: &mut [DoubleDouble]) -> Result<()>;

    /// Double-double evaluation on split vectors: `y = yv + ye`, result
    /// written as `(fv, fe) = (hi, lo)`. Returns `None` when the problem has
    /// no split form; callers then go through [`eval_dd`](Self::eval_dd).
    fn eval_dd_split(
        &self,
        _t: DoubleDouble,
        _yv: &[f64],
        _ye: &[f64],
        _fv: &mut [f64],
        _fe: &mut [f64],
    ) -> Option<Result<()>> {
        None
    }

    /// Closed-form solution at `t`, if one is known.
    fn analytic(&self, _t: DoubleDouble) -> Option<Result<Vec<DoubleDouble>>> {
        None
    }
}

pub struct IvpProblem {
    name: String,
    t_start: f64,
    t_end: f64,
    y0: Vec<DoubleDouble>,
    rhs: Box<dyn RightHandSide>,
}

impl fmt::Debug for IvpProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IvpProblem")
            .field("name", &self.name)
            .field("n", &self.dim())
            .field("t_start", &self.t_start)
            .field("t_end", &self.t_end)
            .finish_non_exhaustive()
    }
}

impl IvpProblem {
    pub fn new(
        name: impl Into<String>,
        t_start: f64,
        t_end: f64,
        y0: Vec<DoubleDouble>,
        rhs: Box<dyn RightHandSide>,
    ) -> Result<Self> {
        if y0.is_empty() {
            return Err(Error::EmptyVector);
        }
        if !(t_start.is_finite() && t_end.is_finite() && t_end > t_start) {
            return Err(Error::InvalidProblem(format!("bad interval [{t_start}, {t_end}]")));
        }
        Ok(Self { name: name.into(), t_start, t_end, y0, rhs })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.y0.len()
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn y0(&self) -> &[DoubleDouble] {
        &self.y0
    }

    pub fn rhs_double(&self, t: f64, y: &[f64], f: &mut [f64]) -> Result<()> {
        self.rhs.eval(t, y, f)
    }

    pub fn rhs_dd(&self, t: DoubleDouble, y: &[DoubleDouble], f: &mut [DoubleDouble]) -> Result<()> {
        self.rhs.eval_dd(t, y, f)
    }

    /// Split-vector form of [`rhs_dd`](Self::rhs_dd); `None` if the problem
    /// does not provide one.
    pub fn rhs_dd_split(
        &self,
        t: DoubleDouble,
        yv: &[f64],
        ye: &[f64],
        fv: &mut [f64],
        fe: &mut [f64],
    ) -> Option<Result<()>> {
        self.rhs.eval_dd_split(t, yv, ye, fv, fe)
    }

    pub fn analytic(&self, t: DoubleDouble) -> Option<Result<Vec<DoubleDouble>>> {
        self.rhs.analytic(t)
    }
}

/// `y_k' = -k y_k`, k = 1..=n.
struct LinearDecay {
    n: usize,
}

impl RightHandSide for LinearDecay {
    fn eval(&self, _t: f64, y: &[f64], f: &mut [f64]) -> Result<()> {
        for (k, (fk, &yk)) in f.iter_mut().zip(y).enumerate() {
            *fk = -((k + 1) as f64) * yk;
        }
        Ok(())
    }

    fn eval_dd(&self, _t: DoubleDouble, y: &[DoubleDouble], f: &mut [DoubleDouble]) -> Result<()> {
        // k <= 2^53 is exact in binary64, so each product is one DD-by-double multiply
        for (k, (fk, &yk)) in f.iter_mut().zip(y).enumerate() {
            *fk = yk.mul_f64(-((k + 1) as f64));
        }
        Ok(())
    }

    fn eval_dd_split(
        &self,
        _t: DoubleDouble,
        yv: &[f64],
        ye: &[f64],
        fv: &mut [f64],
        fe: &mut [f64],
    ) -> Option<Result<()>> {
        for (k, ((fv, fe), (&v, &e))) in fv.iter_mut().zip(fe.iter_mut()).zip(yv.iter().zip(ye)).enumerate() {
            let f = DoubleDouble::new(v, e).mul_f64(-((k + 1) as f64));
            *fv = f.hi;
            *fe = f.lo;
        }
        Some(Ok(()))
    }

    fn analytic(&self, t: DoubleDouble) -> Option<Result<Vec<DoubleDouble>>> {
        Some((1..=self.n).map(|k| dd_exp(t.mul_f64(-(k as f64)))).collect())
    }
}

/// Homogeneous linear system `y_k' = -k y_k`, `y(0) = 1`, on `[0, 1/4]`.
pub fn linear_problem(n: usize) -> Result<IvpProblem> {
    if n == 0 {
        return Err(Error::InvalidProblem("dimension must be at least 1".into()));
    }
    IvpProblem::new(format!("linear({n})"), 0.0, 0.25, vec![DoubleDouble::ONE; n], Box::new(LinearDecay { n }))
}

pub const DEFAULT_RESONANCE_ALPHA: f64 = 0.99999999;

struct Resonance {
    alpha: f64,
}

impl RightHandSide for Resonance {
    fn eval(&self, t: f64, y: &[f64], f: &mut [f64]) -> Result<()> {
        let (s, c) = t.sin_cos();
        let a = self.alpha;
        f[0] = y[1];
        f[1] = -a * y[0] * y[0] * s + 2.0 * a * y[0] * y[1] * c;
        Ok(())
    }

    fn eval_dd(&self, t: DoubleDouble, y: &[DoubleDouble], f: &mut [DoubleDouble]) -> Result<()> {
        let (s, c) = dd_sin_cos(t)?;
        let a = DoubleDouble::from(self.alpha);
        let y1_sq = y[0].sqr();
        f[0] = y[1];
        f[1] = (y1_sq * s * a).accurate_sub(y[0] * y[1] * c * a.mul_pwr2(2.0));
        f[1] = -f[1];
        Ok(())
    }

    fn analytic(&self, t: DoubleDouble) -> Option<Result<Vec<DoubleDouble>>> {
        Some(dd_sin_cos(t).and_then(|(s, c)| {
            let a = DoubleDouble::from(self.alpha);
            let denom = DoubleDouble::ONE.accurate_sub(a * s);
            let y1 = denom.recip()?;
            let y2 = (a * c).checked_div(denom.sqr())?;
            Ok(vec![y1, y2])
        }))
    }
}

/// Resonance problem on `[0, 37]` whose solution `1/(1 - alpha sin t)`
/// peaks at `1/(1 - alpha)` near `t = pi/2 + 2 pi m`.
pub fn resonance_problem(alpha: f64) -> Result<IvpProblem> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidProblem(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    IvpProblem::new(
        format!("resonance({alpha})"),
        0.0,
        37.0,
        vec![DoubleDouble::ONE, DoubleDouble::from(alpha)],
        Box::new(Resonance { alpha }),
    )
}

/// `max_k |(v_k + e_k) - ref_k| / |ref_k|`, numerator evaluated in double-double.
/// NaN if the approximation has a NaN entry.
pub fn max_rel_error(approx: &CompVector, reference: &[DoubleDouble]) -> Result<f64> {
    if approx.len() != reference.len() {
        return Err(Error::DimensionMismatch { expected: reference.len(), found: approx.len() });
    }
    let mut worst = 0.0f64;
    for (k, r) in reference.iter().enumerate() {
        if r.is_zero() {
            return Err(Error::ZeroReference(k));
        }
        let d = two_sum(approx.v()[k], -r.hi);
        let diff = DoubleDouble::from_pair(d.s, d.e).add_f64(approx.e()[k]).add_f64(-r.lo);
        worst = nan_max(worst, (diff.to_f64() / r.to_f64()).abs());
    }
    Ok(worst)
}
