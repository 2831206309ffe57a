//! Test oracle: an arbitrary-precision binary float built on `num-bigint`.
//!
//! Values are dyadic rationals `mant * 2^exp`. Addition, subtraction and
//! multiplication are exact; division and the elementary functions round
//! to a caller-chosen number of bits. Nothing here shares code with the
//! arithmetic under test, so it can be used to check bit-exactness of
//! error-free transformations and the accuracy of double-double kernels.

pub mod samples;

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Working precision (bits) used by the convenience wrappers.
pub const PREC: u64 = 320;

#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn from_i64(v: i64) -> Self {
        BigFloat { mant: BigInt::from(v), exp: 0 }
    }

    /// Exact conversion. Panics on non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "oracle cannot represent {x}");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if biased == 0 { (frac, -1074) } else { (frac | (1u64 << 52), biased - 1075) };
        let mut mant = BigInt::from(m);
        if x < 0.0 {
            mant = -mant;
        }
        BigFloat { mant, exp: e }
    }

    /// Exact value of an unevaluated sum `hi + lo`.
    pub fn from_pair(hi: f64, lo: f64) -> Self {
        Self::from_f64(hi).add(&Self::from_f64(lo))
    }

    /// Exact value of `parts[0] + parts[1] + ...`.
    pub fn sum_of(parts: &[f64]) -> Self {
        parts.iter().fold(Self::zero(), |acc, &p| acc.add(&Self::from_f64(p)))
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    fn bits(&self) -> u64 {
        self.mant.bits()
    }

    /// Binary exponent of the leading bit, i.e. `floor(log2 |x|)`.
    pub fn ilog2(&self) -> i64 {
        assert!(!self.is_zero());
        self.exp + self.bits() as i64 - 1
    }

    fn align(&self, other: &Self) -> (BigInt, BigInt, i64) {
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as usize);
        let b = &other.mant << ((other.exp - e) as usize);
        (a, b, e)
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (a, b, e) = self.align(other);
        BigFloat { mant: a + b, exp: e }.trim()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        BigFloat { mant: &self.mant * &other.mant, exp: self.exp + other.exp }.trim()
    }

    pub fn neg(&self) -> Self {
        BigFloat { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp }
    }

    /// Multiply by `2^k` exactly.
    pub fn scale2(&self, k: i64) -> Self {
        BigFloat { mant: self.mant.clone(), exp: self.exp + k }
    }

    fn trim(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz as usize;
            self.exp += tz as i64;
        }
        self
    }

    /// Truncate the mantissa toward zero to at most `prec` bits.
    pub fn round(&self, prec: u64) -> Self {
        let b = self.bits();
        if b <= prec {
            return self.clone();
        }
        let shift = b - prec;
        let sign = self.mant.sign();
        let mag = self.mant.magnitude() >> (shift as usize);
        BigFloat { mant: BigInt::from_biguint(sign, mag), exp: self.exp + shift as i64 }.trim()
    }

    /// Quotient with `prec` significant bits (truncated).
    pub fn div(&self, other: &Self, prec: u64) -> Self {
        assert!(!other.is_zero(), "oracle division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let shift = (prec as i64 + other.bits() as i64 - self.bits() as i64 + 2).max(0);
        let num = &self.mant << (shift as usize);
        let q = num.div_floor(&other.mant);
        BigFloat { mant: q, exp: self.exp - other.exp - shift }.round(prec)
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let d = self.sub(other);
        match d.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// Exact equality of represented values.
    pub fn eq_value(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Nearest-ish binary64 (truncates to 64 bits first; only for reporting).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.bits();
        let (top, e) = if b > 64 {
            let m = self.mant.magnitude() >> ((b - 64) as usize);
            (m.to_u64().unwrap() as f64, self.exp + (b - 64) as i64)
        } else {
            (self.mant.magnitude().to_u64().unwrap() as f64, self.exp)
        };
        let v = ldexp(top, e);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// `|self - reference| / |reference|` as binary64.
    pub fn rel_err(&self, reference: &Self) -> f64 {
        let d = self.sub(reference);
        if d.is_zero() {
            return 0.0;
        }
        if reference.is_zero() {
            return f64::INFINITY;
        }
        d.abs().div(&reference.abs(), 64).to_f64()
    }

    /// Nearest integer (ties away from zero) as `BigInt`.
    fn round_to_int(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mant << (self.exp as usize);
        }
        let half = BigFloat { mant: BigInt::one(), exp: -1 };
        let shifted = if self.is_negative() { self.sub(&half) } else { self.add(&half) };
        if shifted.exp >= 0 {
            return &shifted.mant << (shifted.exp as usize);
        }
        let sign = shifted.mant.sign();
        let mag = shifted.mant.magnitude() >> ((-shifted.exp) as usize);
        BigInt::from_biguint(sign, mag)
    }
}

/// `atan(1/n)` for a small integer `n`, to `prec` bits.
fn atan_inv(n: i64, prec: u64) -> BigFloat {
    let work = prec + 32;
    let n_big = BigFloat::from_i64(n);
    let n2 = BigFloat::from_i64(n * n);
    let mut power = BigFloat::one().div(&n_big, work);
    let mut sum = power.clone();
    let mut k: i64 = 1;
    let tiny = -(work as i64) - 8;
    loop {
        power = power.div(&n2, work);
        if power.is_zero() || power.ilog2() < tiny {
            break;
        }
        let term = power.div(&BigFloat::from_i64(2 * k + 1), work);
        sum = if k % 2 == 1 { sum.sub(&term) } else { sum.add(&term) };
        sum = sum.round(work);
        k += 1;
    }
    sum.round(prec)
}

/// Pi to `prec` bits (Machin's formula).
pub fn pi(prec: u64) -> BigFloat {
    let a = atan_inv(5, prec + 16).scale2(4);
    let b = atan_inv(239, prec + 16).scale2(2);
    a.sub(&b).round(prec)
}

/// `exp(x)` to roughly `prec` bits.
pub fn exp(x: &BigFloat, prec: u64) -> BigFloat {
    if x.is_zero() {
        return BigFloat::one();
    }
    let work = prec + 64;
    // Scale the argument below 2^-20, sum the series, then square back up.
    let m = (x.ilog2() + 21).max(0);
    let y = x.scale2(-m);
    let mut term = BigFloat::one();
    let mut sum = BigFloat::one();
    let tiny = -(work as i64) - 8;
    let mut k = 1;
    loop {
        term = term.mul(&y).div(&BigFloat::from_i64(k), work);
        if term.is_zero() || term.ilog2() < tiny {
            break;
        }
        sum = sum.add(&term).round(work);
        k += 1;
    }
    for _ in 0..m {
        sum = sum.mul(&sum).round(work);
    }
    sum.round(prec)
}

/// Taylor series for sin (`odd = true`) or cos on a reduced argument.
fn trig_series(r: &BigFloat, odd: bool, work: u64) -> BigFloat {
    let r2 = r.mul(r).round(work);
    let (mut term, mut k) = if odd { (r.clone(), 1i64) } else { (BigFloat::one(), 0i64) };
    let mut sum = term.clone();
    let tiny = -(work as i64) - 8;
    let mut sign_neg = true;
    loop {
        term = term.mul(&r2).div(&BigFloat::from_i64((k + 1) * (k + 2)), work);
        k += 2;
        if term.is_zero() || term.ilog2() < tiny {
            break;
        }
        sum = if sign_neg { sum.sub(&term) } else { sum.add(&term) };
        sum = sum.round(work);
        sign_neg = !sign_neg;
    }
    sum
}

/// Returns `(sin x, cos x)` to roughly `prec` bits.
pub fn sin_cos(x: &BigFloat, prec: u64) -> (BigFloat, BigFloat) {
    if x.is_zero() {
        return (BigFloat::zero(), BigFloat::one());
    }
    let extra = (x.ilog2().max(0) as u64) + 64;
    let work = prec + extra;
    let half_pi = pi(work).scale2(-1);
    let q = x.div(&half_pi, work).round_to_int();
    let r = x.sub(&half_pi.mul(&BigFloat { mant: q.clone(), exp: 0 })).round(work);
    let s = trig_series(&r, true, work);
    let c = trig_series(&r, false, work);
    let quadrant = q.mod_floor(&BigInt::from(4)).to_u32().unwrap();
    let (s, c) = match quadrant {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    };
    (s.round(prec), c.round(prec))
}

pub fn sin(x: &BigFloat, prec: u64) -> BigFloat {
    sin_cos(x, prec).0
}

pub fn cos(x: &BigFloat, prec: u64) -> BigFloat {
    sin_cos(x, prec).1
}
