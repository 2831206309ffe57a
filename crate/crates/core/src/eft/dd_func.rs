//! Double-double `exp`, `sin` and `cos`.
//!
//! Both kernels reduce the argument with a constant split into three
//! binary64 words, so the reduction error stays far below `2^-106` for the
//! supported ranges, then sum a Taylor series by Horner's rule.

use super::{two_prod, DoubleDouble};
use crate::error::{Error, Result};

const LN2: [f64; 3] = [std::f64::consts::LN_2, 2.3190468138462996e-17, 5.707708438416212e-34];
const HALF_PI: [f64; 3] = [std::f64::consts::FRAC_PI_2, 6.123233995736766e-17, -1.4973849048591698e-33];

/// Largest |t| accepted by the trigonometric kernels.
pub const TRIG_ARG_LIMIT: f64 = 1099511627776.0; // 2^40

/// Range of exp arguments whose result is a normal double-double.
pub const EXP_ARG_MIN: f64 = -708.0;
pub const EXP_ARG_MAX: f64 = 709.0;

// 1/k! for k = 0..=30
const INV_FACT: [DoubleDouble; 31] = [
    DoubleDouble::new(1.0, 0.0),
    DoubleDouble::new(1.0, 0.0),
    DoubleDouble::new(0.5, 0.0),
    DoubleDouble::new(0.16666666666666666, 9.25185853854297e-18),
    DoubleDouble::new(0.041666666666666664, 2.3129646346357427e-18),
    DoubleDouble::new(0.008333333333333333, 1.1564823173178714e-19),
    DoubleDouble::new(0.001388888888888889, -5.300543954373577e-20),
    DoubleDouble::new(0.0001984126984126984, 1.7209558293420705e-22),
    DoubleDouble::new(2.48015873015873e-05, 2.1511947866775882e-23),
    DoubleDouble::new(2.7557319223985893e-06, -1.858393274046472e-22),
    DoubleDouble::new(2.755731922398589e-07, 2.3767714622250297e-23),
    DoubleDouble::new(2.505210838544172e-08, -1.448814070935912e-24),
    DoubleDouble::new(2.08767569878681e-09, -1.20734505911326e-25),
    DoubleDouble::new(1.6059043836821613e-10, 1.2585294588752098e-26),
    DoubleDouble::new(1.1470745597729725e-11, 2.0655512752830745e-28),
    DoubleDouble::new(7.647163731819816e-13, 7.03872877733453e-30),
    DoubleDouble::new(4.779477332387385e-14, 4.399205485834081e-31),
    DoubleDouble::new(2.8114572543455206e-15, 1.6508842730861433e-31),
    DoubleDouble::new(1.5619206968586225e-16, 1.1910679660273754e-32),
    DoubleDouble::new(8.22063524662433e-18, 2.2141894119604265e-34),
    DoubleDouble::new(4.110317623312165e-19, 1.4412973378659527e-36),
    DoubleDouble::new(1.9572941063391263e-20, -1.3643503830087908e-36),
    DoubleDouble::new(8.896791392450574e-22, -7.911402614872376e-38),
    DoubleDouble::new(3.868170170630684e-23, -8.843177655482344e-40),
    DoubleDouble::new(1.6117375710961184e-24, -3.6846573564509766e-41),
    DoubleDouble::new(6.446950284384474e-26, -1.9330404233703465e-42),
    DoubleDouble::new(2.4795962632247976e-27, -1.2953730964765229e-43),
    DoubleDouble::new(9.183689863795546e-29, 1.4303150396787322e-45),
    DoubleDouble::new(3.279889237069838e-30, 1.5117542744029879e-46),
    DoubleDouble::new(1.1309962886447716e-31, 1.0498015412959506e-47),
    DoubleDouble::new(3.7699876288159054e-33, 2.5870347832750324e-49),
];

/// `x - k * (c0 + c1 + c2)` for an integral `k`.
#[inline]
fn reduce(x: DoubleDouble, k: f64, c: &[f64; 3]) -> DoubleDouble {
    let p0 = two_prod(k, c[0]);
    let p1 = two_prod(k, c[1]);
    x.accurate_sub(DoubleDouble::new(p0.s, p0.e))
        .accurate_sub(DoubleDouble::new(p1.s, p1.e))
        .accurate_sub(DoubleDouble::from(k * c[2]))
}

/// Horner evaluation of `sum_k coeffs[k] * z^k`.
#[inline]
fn horner(z: DoubleDouble, coeffs: impl DoubleEndedIterator<Item = DoubleDouble>) -> DoubleDouble {
    let mut coeffs = coeffs.rev();
    let mut acc = coeffs.next().unwrap_or(DoubleDouble::ZERO);
    for c in coeffs {
        acc = (acc * z).accurate_add(c);
    }
    acc
}

fn ldexp(x: f64, e: i32) -> f64 {
    // e stays within +-1100 here, so two factors suffice
    let half = e / 2;
    x * 2f64.powi(half) * 2f64.powi(e - half)
}

pub fn dd_exp(x: DoubleDouble) -> Result<DoubleDouble> {
    if !(EXP_ARG_MIN..=EXP_ARG_MAX).contains(&x.hi) {
        return Err(Error::Domain { func: "dd_exp", arg: x.hi });
    }
    if x.is_zero() {
        return Ok(DoubleDouble::ONE);
    }
    let k = (x.hi / LN2[0]).round();
    let r = reduce(x, k, &LN2);
    // |r| <= ln2/2, so 25 terms leave a tail below 2^-110
    let p = horner(r, INV_FACT[..26].iter().copied());
    let e = k as i32;
    Ok(DoubleDouble::new(ldexp(p.hi, e), ldexp(p.lo, e)))
}

/// Returns `(sin t, cos t)`.
pub fn dd_sin_cos(t: DoubleDouble) -> Result<(DoubleDouble, DoubleDouble)> {
    if !(t.hi.abs() <= TRIG_ARG_LIMIT) {
        return Err(Error::Domain { func: "dd_sin_cos", arg: t.hi });
    }
    if t.is_zero() {
        return Ok((DoubleDouble::ZERO, DoubleDouble::ONE));
    }
    let k = (t.hi / HALF_PI[0]).round();
    let r = reduce(t, k, &HALF_PI);
    let r2 = r.sqr();
    // |r| <= pi/4: sin through r^29, cos through r^30
    let s = horner(r2, (0..=14).map(|j| signed(INV_FACT[2 * j + 1], j))) * r;
    let c = horner(r2, (0..=15).map(|j| signed(INV_FACT[2 * j], j)));
    Ok(match (k as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    })
}

#[inline(always)]
fn signed(c: DoubleDouble, j: usize) -> DoubleDouble {
    if j % 2 == 1 {
        -c
    } else {
        c
    }
}

pub fn dd_sin(t: DoubleDouble) -> Result<DoubleDouble> {
    dd_sin_cos(t).map(|(s, _)| s)
}

pub fn dd_cos(t: DoubleDouble) -> Result<DoubleDouble> {
    dd_sin_cos(t).map(|(_, c)| c)
}
