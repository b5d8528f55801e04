// The coefficients of g(β̃) = Σ (−1)ⁿ cₙ β̃²ⁿ, rebuilt in exact rationals from
// 4!·[(4n+2)! + (2n+1)!²] / [2^{2n−1} (2n+4)! (4n+3)! (2n+1)²].

use fibercap_core::specfun::{g_series, series_coefficient};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn reference(n: u64) -> BigRational {
    let num = BigInt::from(24) * (factorial(4 * n + 2) + factorial(2 * n + 1).pow(2));
    let den = factorial(2 * n + 4) * factorial(4 * n + 3) * BigInt::from((2 * n + 1).pow(2));
    // 2^{2n−1}
    let two_pow = BigRational::new(BigInt::from(2).pow(2 * n as u32), BigInt::from(2));
    BigRational::new(num, den) / two_pow
}

fn to_rational(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[test]
fn coefficients_match_closed_form_exactly() {
    for n in 0..=20u64 {
        let (num, den) = series_coefficient(n as u32);
        assert_eq!(to_rational(num, den), reference(n), "n = {n}");
    }
}

#[test]
fn first_coefficient_is_one() {
    let (num, den) = series_coefficient(0);
    assert_eq!(to_rational(num, den), BigRational::one());
}

#[test]
fn rational_partial_sum_matches_series_at_small_beta() {
    for beta in [0.5f64, 1.0, 3.0] {
        // β̃² as an exact binary rational
        let b = BigRational::from_float(beta).unwrap();
        let b2 = &b * &b;
        let mut sum = BigRational::zero();
        let mut power = BigRational::one();
        for n in 0..=20u64 {
            let term = reference(n) * &power;
            if n % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power *= &b2;
        }
        let exact = sum.to_f64().unwrap();
        let g = g_series(beta, 14).unwrap().value;
        assert!((g - exact).abs() < 1e-14, "β̃={beta}: {g} vs {exact}");
    }
}
