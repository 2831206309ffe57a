use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use super::{quick_two_sum, two_prod, two_sum};
use crate::error::{Error, Result};

/// Unevaluated sum `hi + lo` carrying about 106 significant bits.
///
/// Normalized values satisfy `hi == fl(hi + lo)`. The `+`/`-` operators use
/// the "sloppy" addition (one TwoSum on the leading parts); it is accurate
/// to a few units of `2^-106` relative to `|a| + |b|`, but not relative to
/// the result under heavy cancellation. [`DoubleDouble::accurate_add`] is
/// accurate relative to the result.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    #[inline(always)]
    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    /// Renormalizes an arbitrary pair with `|hi| >= |lo|`.
    #[inline(always)]
    pub fn from_pair(hi: f64, lo: f64) -> Self {
        let p = quick_two_sum(hi, lo);
        Self { hi: p.s, lo: p.e }
    }

    #[inline(always)]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline(always)]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline(always)]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    /// Multiplication by a power of two; exact barring over/underflow.
    #[inline(always)]
    pub fn mul_pwr2(self, p: f64) -> Self {
        Self { hi: self.hi * p, lo: self.lo * p }
    }

    /// Addition with both parts run through TwoSum (IEEE-style add).
    #[inline]
    pub fn accurate_add(self, rhs: Self) -> Self {
        let s = two_sum(self.hi, rhs.hi);
        let t = two_sum(self.lo, rhs.lo);
        let r = quick_two_sum(s.s, s.e + t.s);
        let r = quick_two_sum(r.s, r.e + t.e);
        Self { hi: r.s, lo: r.e }
    }

    #[inline]
    pub fn accurate_sub(self, rhs: Self) -> Self {
        self.accurate_add(-rhs)
    }

    #[inline(always)]
    pub fn add_f64(self, b: f64) -> Self {
        let s = two_sum(self.hi, b);
        let r = quick_two_sum(s.s, s.e + self.lo);
        Self { hi: r.s, lo: r.e }
    }

    #[inline(always)]
    pub fn mul_f64(self, b: f64) -> Self {
        let p = two_prod(self.hi, b);
        let r = quick_two_sum(p.s, self.lo.mul_add(b, p.e));
        Self { hi: r.s, lo: r.e }
    }

    #[inline(always)]
    pub fn sqr(self) -> Self {
        let p = two_prod(self.hi, self.hi);
        let e = (2.0 * self.hi).mul_add(self.lo, p.e);
        let r = quick_two_sum(p.s, e);
        Self { hi: r.s, lo: r.e }
    }

    /// Quotient by a binary64 divisor. Division by zero follows IEEE rules.
    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let p = two_prod(q1, b);
        let s = two_sum(self.hi, -p.s);
        let tail = s.e + (self.lo - p.e);
        let q2 = (s.s + tail) / b;
        Self::from_pair(q1, q2)
    }

    /// Long division with three quotient digits; errors on a zero divisor.
    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        if rhs.hi == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.div_nonzero(rhs))
    }

    #[inline]
    fn div_nonzero(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self.accurate_sub(b.mul_f64(q1));
        let q2 = r.hi / b.hi;
        let r = r.accurate_sub(b.mul_f64(q2));
        let q3 = r.hi / b.hi;
        Self::from_pair(q1, q2).add_f64(q3)
    }

    pub fn recip(self) -> Result<Self> {
        Self::ONE.checked_div(self)
    }
}

impl From<f64> for DoubleDouble {
    #[inline(always)]
    fn from(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }
}

impl fmt::Debug for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DD({:e}, {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} + {:e}", self.hi, self.lo)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

/// Sloppy addition: TwoSum on the leading parts only.
impl Add for DoubleDouble {
    type Output = Self;
    #[inline(always)]
    fn add(self, rhs: Self) -> Self {
        let s = two_sum(self.hi, rhs.hi);
        let r = quick_two_sum(s.s, s.e + (self.lo + rhs.lo));
        Self { hi: r.s, lo: r.e }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline(always)]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline(always)]
    fn mul(self, rhs: Self) -> Self {
        let p = two_prod(self.hi, rhs.hi);
        let e = p.e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let r = quick_two_sum(p.s, e);
        Self { hi: r.s, lo: r.e }
    }
}

/// Division by a zero divisor yields a non-finite value; use
/// [`DoubleDouble::checked_div`] to get an error instead.
impl Div for DoubleDouble {
    type Output = Self;
    #[inline]
    fn div(self, rhs: Self) -> Self {
        if rhs.hi == 0.0 {
            return Self::from(self.hi / rhs.hi);
        }
        self.div_nonzero(rhs)
    }
}

impl AddAssign for DoubleDouble {
    #[inline(always)]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for DoubleDouble {
    #[inline(always)]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for DoubleDouble {
    #[inline(always)]
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}
