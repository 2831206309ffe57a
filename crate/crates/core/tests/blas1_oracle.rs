use eft_ode::blas1::{axpy, axpy_error, moller_update, scal, scal_error, CompScalar, CompVector};
use eft_ode::eft::UNIT_ROUNDOFF;
use eft_oracle::{samples, BigFloat};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const U2: f64 = UNIT_ROUNDOFF * UNIT_ROUNDOFF;

fn random_comp(rng: &mut ChaCha8Rng, n: usize) -> CompVector {
    let v: Vec<f64> = (0..n).map(|_| samples::wide_f64(rng, -4..=4)).collect();
    let e = v.iter().map(|x| x * rng.gen_range(-1.0..1.0) * UNIT_ROUNDOFF).collect();
    CompVector::new(v, e).unwrap()
}

fn half_ulp(x: f64) -> f64 {
    let a = x.abs();
    0.5 * (f64::from_bits(a.to_bits() + 1) - a)
}

#[test]
fn axpy_error_semantic_accuracy() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2_000 {
        let x = random_comp(&mut rng, 8);
        let mut y = random_comp(&mut rng, 8);
        let a = samples::wide_f64(&mut rng, -3..=3);
        let alpha = CompScalar::new(a, a * rng.gen_range(-1.0..1.0) * UNIT_ROUNDOFF);
        let y0 = y.clone();
        axpy_error(alpha, &x, &mut y).unwrap();
        let ea = BigFloat::from_pair(alpha.v, alpha.e);
        for k in 0..8 {
            let ex = BigFloat::from_pair(x.v()[k], x.e()[k]);
            let ey = BigFloat::from_pair(y0.v()[k], y0.e()[k]);
            let exact = ea.mul(&ex).add(&ey);
            let magnitude = ea.mul(&ex).abs().add(&ey.abs()).to_f64();
            let got = BigFloat::from_pair(y.v()[k], y.e()[k]);
            let err = got.sub(&exact).abs().to_f64();
            assert!(err <= 8.0 * U2 * magnitude, "component {k}: err {err:e}, magnitude {magnitude:e}");
        }
    }
}

#[test]
fn scal_error_semantic_accuracy_and_normalization() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..2_000 {
        let mut x = random_comp(&mut rng, 8);
        let a = samples::wide_f64(&mut rng, -3..=3);
        let alpha = CompScalar::new(a, a * rng.gen_range(-1.0..1.0) * UNIT_ROUNDOFF);
        let x0 = x.clone();
        scal_error(alpha, &mut x);
        let ea = BigFloat::from_pair(alpha.v, alpha.e);
        for k in 0..8 {
            let exact = ea.mul(&BigFloat::from_pair(x0.v()[k], x0.e()[k]));
            let got = BigFloat::from_pair(x.v()[k], x.e()[k]);
            assert!(got.rel_err(&exact) <= 8.0 * U2);
            assert!(x.e()[k].abs() <= half_ulp(x.v()[k]));
        }
    }
}

proptest! {
    #[test]
    fn error_free_inputs_reproduce_plain_kernels(
        a in -1e3f64..1e3,
        xs in prop::collection::vec(-1e3f64..1e3, 1..16),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ys: Vec<f64> = xs.iter().map(|_| rng.gen_range(-1e3..1e3)).collect();
        let mut plain = ys.clone();
        axpy(a, &xs, &mut plain).unwrap();
        let x = CompVector::from_values(xs.clone()).unwrap();
        let mut y = CompVector::from_values(ys).unwrap();
        axpy_error(a.into(), &x, &mut y).unwrap();
        prop_assert_eq!(plain.as_slice(), y.v());

        let mut plain = xs.clone();
        scal(a, &mut plain);
        let mut x = x;
        scal_error(a.into(), &mut x);
        prop_assert_eq!(plain.as_slice(), x.v());
    }

    #[test]
    fn moller_update_is_exact_under_precondition(s in -1e6f64..1e6, z in -1e3f64..1e3) {
        prop_assume!(s.abs() >= z.abs());
        let mut sum = [s];
        let mut rp = [0.0];
        moller_update(&mut sum, &mut rp, &[z]).unwrap();
        let lhs = BigFloat::from_pair(sum[0], rp[0]);
        let rhs = BigFloat::from_pair(s, z);
        prop_assert!(lhs.eq_value(&rhs));
    }
}
