//! Level-1 vector kernels.
//!
//! Plain `axpy`/`scal`, their error-evaluating counterparts that carry a
//! running error term alongside each component, and the Møller compensated
//! update. All kernels are dense, stride-1 and elementwise.

use crate::eft::{fma_error, quick_two_sum, two_prod, DoubleDouble};
use crate::error::{Error, Result};

/// A scalar with an attached error term; its value is `v + e`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompScalar {
    pub v: f64,
    pub e: f64,
}

impl CompScalar {
    pub const ZERO: Self = Self { v: 0.0, e: 0.0 };
    pub const ONE: Self = Self { v: 1.0, e: 0.0 };

    pub const fn new(v: f64, e: f64) -> Self {
        Self { v, e }
    }

    pub fn value(self) -> f64 {
        self.v + self.e
    }
}

impl From<f64> for CompScalar {
    fn from(v: f64) -> Self {
        Self { v, e: 0.0 }
    }
}

impl From<DoubleDouble> for CompScalar {
    fn from(x: DoubleDouble) -> Self {
        Self { v: x.hi, e: x.lo }
    }
}

impl From<CompScalar> for DoubleDouble {
    fn from(x: CompScalar) -> Self {
        DoubleDouble::new(x.v, x.e)
    }
}

/// Principal values paired with accumulated error terms.
///
/// Component `k` stands for `v[k] + e[k]`. No normalization is imposed
/// between the two parts: error terms may grow past half an ulp of the
/// principal value while they accumulate.
#[derive(Debug, Clone, PartialEq)]
pub struct CompVector {
    v: Vec<f64>,
    e: Vec<f64>,
}

impl CompVector {
    pub fn new(v: Vec<f64>, e: Vec<f64>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::EmptyVector);
        }
        check_dims(v.len(), e.len())?;
        Ok(Self { v, e })
    }

    /// Vector with all error terms zero.
    pub fn from_values(v: Vec<f64>) -> Result<Self> {
        let e = vec![0.0; v.len()];
        Self::new(v, e)
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_values(vec![0.0; n])
    }

    pub fn from_dd(x: &[DoubleDouble]) -> Result<Self> {
        Self::new(x.iter().map(|d| d.hi).collect(), x.iter().map(|d| d.lo).collect())
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn e(&self) -> &[f64] {
        &self.e
    }

    pub fn parts_mut(&mut self) -> (&mut [f64], &mut [f64]) {
        (&mut self.v, &mut self.e)
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.v, self.e)
    }

    /// Semantic value of component `k` as a double-double.
    pub fn get_dd(&self, k: usize) -> DoubleDouble {
        DoubleDouble::new(self.v[k], self.e[k])
    }

    pub fn to_dd(&self) -> Vec<DoubleDouble> {
        self.v.iter().zip(&self.e).map(|(&v, &e)| DoubleDouble::new(v, e)).collect()
    }

    /// Copies `other` into `self` without reallocating.
    pub fn assign(&mut self, other: &CompVector) -> Result<()> {
        check_dims(self.len(), other.len())?;
        self.v.copy_from_slice(&other.v);
        self.e.copy_from_slice(&other.e);
        Ok(())
    }

    pub fn clear_errors(&mut self) {
        self.e.iter_mut().for_each(|e| *e = 0.0);
    }
}

#[inline]
fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `y := alpha * x + y`, one fused multiply-add per component.
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) -> Result<()> {
    check_dims(x.len(), y.len())?;
    for (yk, &xk) in y.iter_mut().zip(x) {
        *yk = alpha.mul_add(xk, *yk);
    }
    Ok(())
}

/// `x := alpha * x`.
pub fn scal(alpha: f64, x: &mut [f64]) {
    for xk in x.iter_mut() {
        *xk *= alpha;
    }
}

/// AXPY with error evaluation.
///
/// Per component: `(y, e1, e2) := fma_error(alpha, x, y)` followed by
/// `e_y := e1 + e2 + alpha*e_x + e_alpha*x + e_y`, summed strictly left to
/// right so results are bit-reproducible.
pub fn axpy_error(alpha: CompScalar, x: &CompVector, y: &mut CompVector) -> Result<()> {
    check_dims(x.len(), y.len())?;
    let CompScalar { v: a, e: ea } = alpha;
    for (((yk, eyk), &xk), &exk) in y.v.iter_mut().zip(y.e.iter_mut()).zip(&x.v).zip(&x.e) {
        let t = fma_error(a, xk, *yk);
        *yk = t.s;
        *eyk += t.e1 + t.e2 + a * exk + ea * xk;
    }
    Ok(())
}

/// [`axpy_error`] with the `x` operand given as separate slices.
pub(crate) fn axpy_error_parts(alpha: CompScalar, xv: &[f64], xe: &[f64], y: &mut CompVector) {
    let CompScalar { v: a, e: ea } = alpha;
    for (((yk, eyk), &xk), &exk) in y.v.iter_mut().zip(y.e.iter_mut()).zip(xv).zip(xe) {
        let t = fma_error(a, xk, *yk);
        *yk = t.s;
        *eyk += t.e1 + t.e2 + a * exk + ea * xk;
    }
}

/// SCAL with error evaluation. Each output component is renormalized by
/// QuickTwoSum, so `|e_k| <= ulp(v_k)/2` afterwards.
pub fn scal_error(alpha: CompScalar, x: &mut CompVector) {
    let CompScalar { v: a, e: ea } = alpha;
    for (xk, exk) in x.v.iter_mut().zip(x.e.iter_mut()) {
        let w = two_prod(a, *xk);
        let w2 = a * *exk + ea * (*xk + *exk) + w.e;
        let r = quick_two_sum(w.s, w2);
        *xk = r.s;
        *exk = r.e;
    }
}

/// Møller's compensated update of a running sum.
///
/// Per component: `s := z + rp; (sum, rp) := quick_two_sum(sum, s)`, where
/// `rp` holds the negated residual so that `sum + rp` tracks the exact
/// total. Compensation is exact only while `|sum| >= |s|`.
pub fn moller_update(sum: &mut [f64], rp: &mut [f64], z: &[f64]) -> Result<()> {
    check_dims(sum.len(), z.len())?;
    check_dims(sum.len(), rp.len())?;
    for ((sk, rk), &zk) in sum.iter_mut().zip(rp.iter_mut()).zip(z) {
        let r = quick_two_sum(*sk, zk + *rk);
        *sk = r.s;
        *rk = r.e;
    }
    Ok(())
}

/// [`moller_update`] with increment `z = alpha * x` formed on the fly.
pub fn moller_axpy(alpha: f64, x: &[f64], sum: &mut [f64], rp: &mut [f64]) -> Result<()> {
    check_dims(sum.len(), x.len())?;
    check_dims(sum.len(), rp.len())?;
    for ((sk, rk), &xk) in sum.iter_mut().zip(rp.iter_mut()).zip(x) {
        let r = quick_two_sum(*sk, alpha * xk + *rk);
        *sk = r.s;
        *rk = r.e;
    }
    Ok(())
}

/// `max_k |v_k + e_k|`.
/// Max norm of `v + e`. NaN if any entry is NaN.
pub fn norm_inf(x: &CompVector) -> f64 {
    x.v.iter().zip(&x.e).fold(0.0, |m, (&v, &e)| nan_max(m, (v + e).abs()))
}

/// `max` that propagates NaN instead of discarding it.
pub(crate) fn nan_max(a: f64, b: f64) -> f64 {
    if b > a || b.is_nan() {
        b
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eft::UNIT_ROUNDOFF as U;

    fn cv(v: &[f64], e: &[f64]) -> CompVector {
        CompVector::new(v.to_vec(), e.to_vec()).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert_eq!(CompVector::new(vec![], vec![]), Err(Error::EmptyVector));
        assert_eq!(CompVector::new(vec![1.0], vec![0.0, 0.0]), Err(Error::DimensionMismatch { expected: 1, found: 2 }));
    }

    #[test]
    fn plain_axpy() {
        let mut y = vec![3.0, -4.0];
        axpy(0.0, &[1.0, 2.0], &mut y).unwrap();
        assert_eq!(y, [3.0, -4.0]);
        let mut y = vec![1.0];
        axpy(1.0, &[1.0], &mut y).unwrap();
        assert_eq!(y, [2.0]);
        let mut y = vec![1.0, 1.0];
        axpy(-0.25, &[1.0, 2.0], &mut y).unwrap();
        assert_eq!(y, [0.75, 0.5]);
        assert!(axpy(1.0, &[1.0], &mut [1.0, 2.0]).is_err());
    }

    #[test]
    fn plain_scal() {
        let mut x = vec![1.5, -2.0];
        scal(1.0, &mut x);
        assert_eq!(x, [1.5, -2.0]);
        scal(0.0, &mut x);
        assert_eq!(x, [0.0, -0.0]);
        let mut x = vec![3.0];
        scal(1.0 / 3.0, &mut x);
        assert_eq!(x, [1.0]);
    }

    #[test]
    fn axpy_error_zero_alpha_leaves_y() {
        let x = cv(&[1.0, 2.0], &[1e-17, -3e-18]);
        let mut y = cv(&[5.0, -7.0], &[2e-16, 1e-17]);
        let before = y.clone();
        axpy_error(CompScalar::ZERO, &x, &mut y).unwrap();
        assert_eq!(y, before);
    }

    #[test]
    fn axpy_error_captures_lost_bit() {
        let x = cv(&[1.0], &[0.0]);
        let mut y = cv(&[U], &[0.0]);
        axpy_error(CompScalar::ONE, &x, &mut y).unwrap();
        assert_eq!((y.v()[0], y.e()[0]), (1.0, U));
    }

    #[test]
    fn scal_error_cases() {
        let mut x = cv(&[2.5, -1.0], &[0.0, 0.0]);
        scal_error(CompScalar::ONE, &mut x);
        assert_eq!(x, cv(&[2.5, -1.0], &[0.0, 0.0]));
        scal_error(CompScalar::ZERO, &mut x);
        assert_eq!(norm_inf(&x), 0.0);

        let third = DoubleDouble::ONE.checked_div(DoubleDouble::from(3.0)).unwrap();
        let mut x = cv(&[3.0], &[0.0]);
        scal_error(third.into(), &mut x);
        assert_eq!(x.v()[0], 1.0);
        assert!(x.e()[0].abs() <= 2f64.powi(-104));
    }

    #[test]
    fn moller_recovers_lost_bits() {
        let mut s = vec![7.0];
        let mut r = vec![0.0];
        moller_update(&mut s, &mut r, &[0.0]).unwrap();
        assert_eq!((s[0], r[0]), (7.0, 0.0));

        let mut s = vec![1.0];
        let mut r = vec![0.0];
        moller_update(&mut s, &mut r, &[U]).unwrap();
        assert_eq!((s[0], r[0]), (1.0, U));
        moller_update(&mut s, &mut r, &[U]).unwrap();
        assert_eq!((s[0], r[0]), (1.0 + 2.0 * U, 0.0));
    }

    #[test]
    fn moller_beats_naive_summation() {
        let (mut naive, mut s, mut r) = (1.0f64, vec![1.0], vec![0.0]);
        for _ in 0..10_000 {
            naive += 1e-16;
            moller_update(&mut s, &mut r, &[1e-16]).unwrap();
        }
        // exact total 1 + 1e-12
        let exact = 1.0 + 1e-12;
        let naive_err = (naive - exact).abs();
        let comp_err = (s[0] + r[0] - exact).abs();
        assert!(naive_err > 1e-13, "{naive_err}");
        assert!(comp_err < 1e-15, "{comp_err}");
    }

    #[test]
    fn moller_axpy_matches_update() {
        let x = [0.3, -1.7, 2.2];
        let (mut s1, mut r1) = (vec![1.0, 2.0, -3.0], vec![1e-17, 0.0, -2e-17]);
        let (mut s2, mut r2) = (s1.clone(), r1.clone());
        let z: Vec<f64> = x.iter().map(|xk| 0.125 * xk).collect();
        moller_update(&mut s1, &mut r1, &z).unwrap();
        moller_axpy(0.125, &x, &mut s2, &mut r2).unwrap();
        assert_eq!((s1, r1), (s2, r2));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm_inf(&CompVector::zeros(3).unwrap()), 0.0);
        assert_eq!(norm_inf(&cv(&[1.0, -3.0], &[0.0, 0.0])), 3.0);
        assert_eq!(norm_inf(&cv(&[1.0], &[U])), 1.0);
    }
}
