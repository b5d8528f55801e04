//! The kernel `F(μ)` and the Green function it is built from.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math::{cos, sin};
use crate::quadrature::UnitLegendre;

/// Below this `|μ|` the closed form loses digits and the Taylor series is used.
pub const KERNEL_SERIES_SWITCH: f64 = 0.1;
const KERNEL_SERIES_TERMS: usize = 6;

/// Largest imaginary part the Green-function oracle may leave behind.
pub const ORACLE_IMAG_TOL: f64 = 1e-8;

/// `F(μ) = 3(μ² − sin²μ)/μ⁴`, normalized so that `F(0) = 1`.
///
/// Small arguments use `4! Σ (−1)ˢ (2μ)²ˢ / (2s+4)!`.
pub fn f_kernel(mu: f64) -> f64 {
    let mu = mu.abs();
    if mu < KERNEL_SERIES_SWITCH {
        f_kernel_series(mu, KERNEL_SERIES_TERMS)
    } else {
        let s = sin(mu);
        let m2 = mu * mu;
        3.0 * (m2 - s * s) / (m2 * m2)
    }
}

/// Truncated Taylor series of `F`; `terms` terms starting at `s = 0`.
pub fn f_kernel_series(mu: f64, terms: usize) -> f64 {
    let x = 4.0 * mu * mu;
    // term_s = 24 (-x)^s / (2s+4)!, built by ratio from term_0 = 1
    let mut term = 1.0;
    let mut sum = 0.0;
    for s in 0..terms {
        sum += term;
        let k = (2 * s + 5) as f64;
        term *= -x / (k * (k + 1.0));
    }
    sum
}

/// Dimensionless Green function of `∂²` on `[0, 1]` with zero boundary values.
///
/// `G₀(a, b) = a(b − 1)` for `a ≤ b` and `b(a − 1)` otherwise.
pub fn green0(z1: f64, z2: f64) -> Result<f64> {
    for (name, z) in [("z1", z1), ("z2", z2)] {
        if !(0.0..=1.0).contains(&z) {
            return Err(Error::ParameterDomain { name, value: z });
        }
    }
    Ok(if z1 <= z2 { z1 * (z2 - 1.0) } else { z2 * (z1 - 1.0) })
}

/// `∂G₀/∂ζ₁ · ∂G₀/∂ζ₂`, continuous off the diagonal.
fn green0_derivative_product(z1: f64, z2: f64) -> f64 {
    if z1 < z2 {
        (z2 - 1.0) * z1
    } else {
        z2 * (z1 - 1.0)
    }
}

/// Independent evaluation of `F(μ)` from its Green-function definition,
/// `−12 ∫∫ ∂₁G₀ ∂₂G₀ e^{−2iμ(ζ₁−ζ₂)} dζ₁dζ₂` over the unit square.
///
/// The square is split along `ζ₁ = ζ₂`, where the derivatives jump, and each
/// triangle gets an `order × order` Gauss-Legendre product rule.
pub fn f_kernel_oracle(mu: f64, order: usize) -> Result<f64> {
    if order < 8 {
        return Err(Error::ParameterDomain {
            name: "order",
            value: order as f64,
        });
    }
    crate::error::check_finite("mu", mu)?;
    let rule = UnitLegendre::new(order);
    let mut acc = Complex64::new(0.0, 0.0);
    // outer variable v in [0,1]; lower triangle z1 in [0,v] with z2 = v,
    // upper triangle z2 in [0,v] with z1 = v
    for (&v, &wv) in rule.nodes().iter().zip(rule.weights()) {
        for (&t, &wt) in rule.nodes().iter().zip(rule.weights()) {
            let u = t * v;
            let w = wv * wt * v;
            for (z1, z2) in [(u, v), (v, u)] {
                let phase = -2.0 * mu * (z1 - z2);
                let g = green0_derivative_product(z1, z2);
                acc += Complex64::new(cos(phase), sin(phase)) * (w * g);
            }
        }
    }
    let value = acc * -12.0;
    if value.im.abs() > ORACLE_IMAG_TOL {
        return Err(Error::ImaginaryResidual {
            residual: value.im.abs(),
        });
    }
    Ok(value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn fixed_points() {
        assert_eq!(f_kernel(0.0), 1.0);
        assert!((f_kernel(PI) - 3.0 / (PI * PI)).abs() < 1e-15);
        // 3(1 - sin²1) = 3cos²1
        let direct = 3.0 * (1.0 - 1f64.sin().powi(2));
        assert!((f_kernel(1.0) - direct).abs() < 1e-15);
        assert!((f_kernel(1.0) - 0.875_779_745_179).abs() < 1e-11);
    }

    #[test]
    fn branches_meet_at_switch() {
        let mu = KERNEL_SERIES_SWITCH;
        let s = f_kernel_series(mu, KERNEL_SERIES_TERMS);
        let m2 = mu * mu;
        let closed = 3.0 * (m2 - mu.sin().powi(2)) / (m2 * m2);
        assert!((s - closed).abs() < 1e-12, "{s} vs {closed}");
        assert!((f_kernel(mu * (1.0 - 1e-12)) - f_kernel(mu)).abs() < 1e-12);
    }

    #[test]
    fn green_function_basics() {
        assert_eq!(green0(0.0, 0.7).unwrap(), 0.0);
        assert_eq!(green0(1.0, 0.3).unwrap(), 0.0);
        assert_eq!(green0(0.5, 0.5).unwrap(), -0.25);
        assert_eq!(green0(0.2, 0.9).unwrap(), green0(0.9, 0.2).unwrap());
        assert!(green0(-0.1, 0.5).is_err());
        assert!(green0(0.5, 1.5).is_err());
    }

    #[test]
    fn diagonal_integral_is_minus_sixth() {
        let rule = UnitLegendre::new(8);
        let v = rule.integrate(0.0, 1.0, |z| green0(z, z).unwrap());
        assert!((v + 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn oracle_matches_closed_form() {
        assert!((f_kernel_oracle(0.0, 32).unwrap() - 1.0).abs() < 1e-10);
        assert!((f_kernel_oracle(1.0, 64).unwrap() - f_kernel(1.0)).abs() < 1e-8);
        assert!((f_kernel_oracle(PI, 64).unwrap() - 3.0 / (PI * PI)).abs() < 1e-8);
        assert!(f_kernel_oracle(1.0, 4).is_err());
    }
}
