//! Alternating power series for `g(β̃)` in extended precision.
//!
//! ```text
//! g(β̃) = 4! Σₙ (−1)ⁿ β̃²ⁿ [(4n+2)! + (2n+1)!²] / [2²ⁿ⁻¹ (2n+4)! (4n+3)! (2n+1)²]
//! ```
//!
//! Terms grow to ~1e29 at β̃ = 200 and ~1e155 at β̃ = 800 before the
//! factorials win, so the partial sums cancel catastrophically in `f64`.
//! The sum is carried out in binary fixed point on `BigInt`, with the number
//! of fractional bits chosen from the largest term (found by a cheap `f64`
//! scan of the log-magnitudes) plus the requested digits and a guard.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use super::{GEval, GMethod};
use crate::error::{Error, Result};
use crate::math::{exp, lgamma, ln};

/// Working-precision limits for [`g_series_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Refuse evaluations that need more fractional bits than this.
    pub max_bits: u64,
    /// Decimal digits carried beyond the requested accuracy.
    pub guard_digits: u32,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            max_bits: 8192,
            guard_digits: 10,
        }
    }
}

const LOG2_10: f64 = core::f64::consts::LOG2_10;
const MAX_TERMS: u32 = 1_000_000;

/// Natural log of `|tₙ|`, the n-th term magnitude at `β̃`.
fn ln_term(n: u32, beta: f64) -> f64 {
    let n = n as f64;
    // (2n+1)!²/(4n+3)! relative to 1/(4n+3)
    let ratio = exp(2.0 * lgamma(2.0 * n + 2.0) - lgamma(4.0 * n + 4.0));
    let bracket = 1.0 / (4.0 * n + 3.0) + ratio;
    let pow = if n == 0.0 { 0.0 } else { 2.0 * n * ln(0.5 * beta) };
    ln(48.0) + pow - lgamma(2.0 * n + 5.0) - 2.0 * ln(2.0 * n + 1.0) + ln(bracket)
}

struct Plan {
    terms: u32,
    log10_max: f64,
    first_omitted: f64,
}

fn plan(beta: f64, floor_log10: f64) -> Result<Plan> {
    let mut log10_max = f64::NEG_INFINITY;
    let q = 0.25 * beta * beta;
    for n in 0..MAX_TERMS {
        let l10 = ln_term(n, beta) / core::f64::consts::LN_10;
        log10_max = log10_max.max(l10);
        let nf = n as f64;
        // past the peak once the leading ratio (β̃/2)²/((2n+5)(2n+6)) drops below 1/2
        let decreasing = q < 0.5 * (2.0 * nf + 5.0) * (2.0 * nf + 6.0);
        if decreasing && l10 < floor_log10 {
            return Ok(Plan {
                terms: n,
                log10_max,
                first_omitted: libm::pow(10.0, l10),
            });
        }
    }
    Err(Error::ParameterDomain {
        name: "beta_tilde",
        value: beta,
    })
}

/// Multiplies a fixed-point value by an `f64` exactly (up to one truncation).
fn mul_f64(x: &BigInt, q: f64) -> BigInt {
    let bits = q.to_bits();
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let mantissa = if exponent == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    let shift = exponent - 1075;
    let prod = x * BigInt::from(mantissa);
    if shift >= 0 {
        prod << (shift as usize)
    } else {
        prod >> ((-shift) as usize)
    }
}

fn fixed_to_f64(x: &BigInt, frac_bits: u64) -> f64 {
    let shift = frac_bits.saturating_sub(64);
    let head = (x >> (shift as usize)).to_f64().unwrap_or(f64::NAN);
    head * libm::pow(2.0, -((frac_bits - shift) as f64))
}

/// `g(β̃)` by the power series with default precision limits.
pub fn g_series(beta_tilde: f64, target_digits: u32) -> Result<GEval> {
    g_series_with(beta_tilde, target_digits, &SeriesConfig::default())
}

/// `g(β̃)` by the power series.
///
/// `err_estimate` is the magnitude of the first omitted term plus the
/// fixed-point rounding bound.
pub fn g_series_with(beta_tilde: f64, target_digits: u32, cfg: &SeriesConfig) -> Result<GEval> {
    if target_digits < 6 {
        return Err(Error::ParameterDomain {
            name: "target_digits",
            value: target_digits as f64,
        });
    }
    crate::error::check_finite("beta_tilde", beta_tilde)?;
    let beta = beta_tilde.abs();
    if beta == 0.0 {
        return Ok(GEval {
            value: 1.0,
            method: GMethod::Series,
            err_estimate: 0.0,
            beta_tilde,
        });
    }

    let floor = -((target_digits + cfg.guard_digits) as f64);
    let plan = plan(beta, floor)?;
    let digits = plan.log10_max.max(0.0) + (target_digits + cfg.guard_digits) as f64;
    let frac_bits = libm::ceil(digits * LOG2_10) as u64 + 64;
    if frac_bits > cfg.max_bits {
        return Err(Error::PrecisionOverflow {
            required_bits: frac_bits,
            cap_bits: cfg.max_bits,
        });
    }

    let one = BigInt::one() << (frac_bits as usize);
    let q = 0.25 * beta * beta;
    // c = (β̃/2)^{2n}/(2n+4)!,  d = (2n+1)!²/(4n+3)!
    let mut c = &one / 24u32;
    let mut d = &one / 6u32;
    let mut sum = BigInt::zero();
    for n in 0..plan.terms {
        let n64 = n as u64;
        let bracket = &one / (4 * n64 + 3) + &d;
        let odd = 2 * n64 + 1;
        let term = (&c * bracket * 48u32) / (&one * (odd * odd));
        if n % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        c = mul_f64(&c, q) / ((2 * n64 + 5) * (2 * n64 + 6));
        let num = (2 * n64 + 2) * (2 * n64 + 2) * (2 * n64 + 3) * (2 * n64 + 3);
        let den = (4 * n64 + 4) * (4 * n64 + 5) * (4 * n64 + 6) * (4 * n64 + 7);
        d = d * num / den;
    }

    let value = fixed_to_f64(&sum, frac_bits);
    // each truncation is one unit in the last place, amplified at most by the
    // ratio between the peak term and the term it happened in
    let rounding = 8.0 * plan.terms as f64 * libm::pow(10.0, plan.log10_max.max(0.0))
        * libm::pow(2.0, -(frac_bits as f64));
    Ok(GEval {
        value,
        method: GMethod::Series,
        err_estimate: plan.first_omitted + rounding,
        beta_tilde,
    })
}

/// Exact coefficient `cₙ` of `(−1)ⁿ β̃²ⁿ` as a `(numerator, denominator)` pair.
pub fn series_coefficient(n: u32) -> (BigUint, BigUint) {
    let fact = |k: u32| -> BigUint { (1..=k).fold(BigUint::one(), |acc, i| acc * i) };
    let n = n as u64;
    let numerator = BigUint::from(48u32)
        * (fact((4 * n + 2) as u32) + fact((2 * n + 1) as u32).pow(2));
    let denominator = (BigUint::one() << (2 * n as usize))
        * fact((2 * n + 4) as u32)
        * fact((4 * n + 3) as u32)
        * BigUint::from((2 * n + 1) * (2 * n + 1));
    (numerator, denominator)
}

/// Largest `log₁₀|tₙ|` over the series at `β̃`, from the `f64` scan.
pub fn series_peak_log10(beta_tilde: f64) -> f64 {
    let beta = beta_tilde.abs();
    if beta == 0.0 {
        return 0.0;
    }
    let mut best = f64::NEG_INFINITY;
    let q = 0.25 * beta * beta;
    for n in 0..MAX_TERMS {
        let l = ln_term(n, beta) / core::f64::consts::LN_10;
        best = best.max(l);
        let nf = n as f64;
        if q < 0.5 * (2.0 * nf + 5.0) * (2.0 * nf + 6.0) && l < best - 20.0 {
            break;
        }
    }
    best
}
