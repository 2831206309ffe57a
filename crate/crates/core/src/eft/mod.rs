//! Error-free transformations of binary64 arithmetic.
//!
//! Every routine here assumes IEEE 754 round-to-nearest-even with gradual
//! underflow, which is the Rust default on all supported targets. Under any
//! other rounding mode the exactness identities below do not hold.
//!
//! Products use `f64::mul_add`, which is a correctly rounded fused
//! multiply-add whether or not the target has the instruction.

mod dd;
mod dd_func;

pub use dd::DoubleDouble;
pub use dd_func::{dd_cos, dd_exp, dd_sin, dd_sin_cos};

/// Unit roundoff of binary64, `2^-53`.
pub const UNIT_ROUNDOFF: f64 = 1.0 / 9007199254740992.0;

/// Rounded result `s` of an operation together with its exact residual `e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumPair {
    pub s: f64,
    pub e: f64,
}

/// Result of [`fma_error`]: `s + e1 + e2 == a*x + y` exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FmaTriple {
    pub s: f64,
    pub e1: f64,
    pub e2: f64,
}

/// Knuth's branch-free TwoSum. No ordering requirement on the operands.
#[inline(always)]
pub fn two_sum(a: f64, b: f64) -> SumPair {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    SumPair { s, e }
}

/// Dekker's FastTwoSum.
///
/// Exact only when `|a| >= |b|` (or `a == 0`). Violating that silently
/// yields an inexact residual; callers such as the Møller update rely on
/// the precondition holding in practice rather than on a check.
#[inline(always)]
pub fn quick_two_sum(a: f64, b: f64) -> SumPair {
    let s = a + b;
    let e = b - (s - a);
    SumPair { s, e }
}

/// TwoProd via fused multiply-add. Exact unless `a*b` overflows or its
/// residual falls below the subnormal range.
#[inline(always)]
pub fn two_prod(a: f64, b: f64) -> SumPair {
    let s = a * b;
    let e = a.mul_add(b, -s);
    SumPair { s, e }
}

/// FMA with error evaluation (Boldo & Muller).
///
/// Returns `s = fma(a, x, y)` and two terms with `s + e1 + e2 = a*x + y`
/// exactly and `|e2| <= u/2 * |e1|`.
#[inline(always)]
pub fn fma_error(a: f64, x: f64, y: f64) -> FmaTriple {
    let s = a.mul_add(x, y);
    let u = two_prod(a, x);
    let alpha = two_sum(y, u.e);
    let beta = two_sum(u.s, alpha.s);
    let gamma = (beta.s - s) + beta.e;
    let tail = quick_two_sum(gamma, alpha.e);
    FmaTriple { s, e1: tail.s, e2: tail.e }
}

#[cfg(test)]
mod tests {
    use super::*;

    const U: f64 = UNIT_ROUNDOFF;

    #[test]
    fn two_sum_examples() {
        assert_eq!(two_sum(1.0, 0.0), SumPair { s: 1.0, e: 0.0 });
        assert_eq!(two_sum(1.0, U), SumPair { s: 1.0, e: U });
        let big = 2f64.powi(53);
        assert_eq!(two_sum(big, 1.0), SumPair { s: big, e: 1.0 });
        // operand order does not matter
        assert_eq!(two_sum(U, 1.0), SumPair { s: 1.0, e: U });
    }

    #[test]
    fn quick_two_sum_examples() {
        assert_eq!(quick_two_sum(1.0, U), SumPair { s: 1.0, e: U });
        assert_eq!(quick_two_sum(0.0, 0.0), SumPair { s: 0.0, e: 0.0 });
        assert_eq!(quick_two_sum(3.0, 1.0), SumPair { s: 4.0, e: 0.0 });
    }

    #[test]
    fn two_prod_examples() {
        for x in [1.5, -7.25e300, 3.0e-300, 0.0] {
            let p = two_prod(0.0, x);
            assert_eq!((p.s, p.e), (0.0, 0.0));
        }
        let a = 2f64.powi(27) + 1.0;
        assert_eq!(two_prod(a, a), SumPair { s: 2f64.powi(54) + 2f64.powi(28), e: 1.0 });
    }

    #[test]
    fn fma_error_examples() {
        let t = fma_error(0.0, 3.5, -2.25);
        assert_eq!((t.s, t.e1, t.e2), (-2.25, 0.0, 0.0));
        let t = fma_error(1.0, 1.0, U);
        assert_eq!((t.s, t.e1, t.e2), (1.0, U, 0.0));
    }

    #[test]
    fn overflow_propagates() {
        let s = two_sum(f64::MAX, f64::MAX);
        assert!(s.s.is_infinite());
        let p = two_prod(1e200, 1e200);
        assert!(p.s.is_infinite() && !p.e.is_finite());
        let t = fma_error(1e300, 1e300, 1.0);
        assert!(!t.s.is_finite());
    }
}
