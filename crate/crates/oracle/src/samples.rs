//! Input generators for exactness and accuracy sweeps.

use rand::Rng;

/// Random binary64 with a uniformly random 53-bit significand, random sign,
/// and binary exponent drawn from `exp_range`.
pub fn wide_f64<R: Rng>(rng: &mut R, exp_range: std::ops::RangeInclusive<i32>) -> f64 {
    let mant = (rng.gen::<u64>() >> 11) | (1u64 << 52);
    let e = rng.gen_range(exp_range);
    let x = mant as f64 * 2f64.powi(e - 52);
    if rng.gen() {
        -x
    } else {
        x
    }
}

/// Pairs designed to stress the EFT identities: exponent gaps around the
/// significand width, near-cancellation, ties, and powers of two.
pub fn adversarial_pairs() -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let bases = [1.0, -1.0, 1.5, 3.0, 2f64.powi(53), -1.0 + 2f64.powi(-52), 0.1, 7.0e150, -3.0e-150];
    for &a in &bases {
        for gap in 0..=120 {
            let b = a * 2f64.powi(-gap);
            out.push((a, b));
            out.push((a, -b));
            out.push((a, b * (1.0 + 2f64.powi(-52))));
            out.push((a, -b * (1.0 - 2f64.powi(-53))));
            out.push((b, a));
        }
        // exact ties at the rounding boundary
        let ulp = a.abs() * 2f64.powi(-52);
        out.push((a, ulp / 2.0));
        out.push((a, -ulp / 2.0));
        out.push((a, 1.5 * ulp));
        out.push((a, -a));
        out.push((a, 0.0));
    }
    out.push((f64::MIN_POSITIVE, f64::MIN_POSITIVE * 2f64.powi(-30)));
    out.push((f64::from_bits(1), f64::from_bits(3)));
    out
}
