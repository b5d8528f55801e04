//! Integral and triple-sum representations of `g(β̃)`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::kernel::f_kernel;
use super::{GEval, GMethod};
use crate::error::{check_finite, Error, Result};
use crate::math::sin;
use crate::quadrature::UnitLegendre;

/// Default cap on `M³` for the discrete sums.
pub const DEFAULT_DISCRETE_BUDGET: u64 = 1 << 24;

/// Argument scale applied to the sine-grid sum. `1.0` evaluates the triple
/// sum literally, `0.25` rescales it onto the continuum integral's argument.
pub const SINE_GRID_LITERAL: f64 = 1.0;
/// See [`SINE_GRID_LITERAL`].
pub const SINE_GRID_CONTINUUM: f64 = 0.25;

/// Which discrete triple sum [`g_discrete`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscreteMode {
    /// Left-endpoint Riemann sum of the cube integral, `O(1/M)`.
    Riemann,
    /// Sum over sine-dispersion frequencies with a wrapped fourth index.
    SineGrid {
        /// Multiplies the kernel argument; see [`SINE_GRID_LITERAL`].
        calibration: f64,
    },
}

fn tensor_gauss(beta: f64, n: usize) -> f64 {
    let rule = UnitLegendre::new(n);
    let (x, w) = (rule.nodes(), rule.weights());
    let a = 0.25 * beta;
    let mut total = 0.0;
    for (&x3, &w3) in x.iter().zip(w) {
        let diffs: Vec<f64> = x.iter().map(|&xi| xi - x3).collect();
        let mut plane = 0.0;
        for (i, (&d1, &w1)) in diffs.iter().zip(w).enumerate() {
            // integrand is symmetric in (x1, x2): sum the lower triangle twice
            let s = a * d1;
            let mut row = 0.5 * w1 * f_kernel(s * d1);
            for (&d2, &w2) in diffs[..i].iter().zip(w) {
                row += w2 * f_kernel(s * d2);
            }
            plane += w1 * row;
        }
        total += w3 * 2.0 * plane;
    }
    total
}

/// `g(β̃) = ∫∫∫ F((β̃/4)(x₁−x₃)(x₂−x₃))` over the unit cube, tensor-product
/// Gauss-Legendre with `nodes_per_axis` points per axis.
///
/// The error estimate is the change against a rule with half as many nodes,
/// which overstates the error of the finer rule.
pub fn g_cubature(beta_tilde: f64, nodes_per_axis: usize) -> Result<GEval> {
    if nodes_per_axis < 8 {
        return Err(Error::ParameterDomain {
            name: "nodes_per_axis",
            value: nodes_per_axis as f64,
        });
    }
    check_finite("beta_tilde", beta_tilde)?;
    let beta = beta_tilde.abs();
    let fine = tensor_gauss(beta, nodes_per_axis);
    let coarse = tensor_gauss(beta, nodes_per_axis.div_ceil(2));
    Ok(GEval {
        value: fine,
        method: GMethod::Cubature,
        err_estimate: (fine - coarse).abs(),
        beta_tilde,
    })
}

fn riemann_sum(beta: f64, m: usize) -> f64 {
    let inv = 1.0 / m as f64;
    let a = 0.25 * beta;
    let mut total = 0.0;
    for k3 in 0..m {
        for k1 in 0..m {
            let s = a * (k1 as f64 - k3 as f64) * inv;
            let mut row = 0.0;
            for k2 in 0..m {
                row += f_kernel(s * (k2 as f64 - k3 as f64) * inv);
            }
            total += row;
        }
    }
    total * inv * inv * inv
}

fn sine_grid_sum(beta: f64, m: usize, calibration: f64) -> f64 {
    // Ω̄ₖ/W = sin(πk/M)/π
    let omega2: Vec<f64> = (0..m)
        .map(|k| {
            let s = sin(PI * k as f64 / m as f64) / PI;
            s * s
        })
        .collect();
    let scale = calibration * 0.5 * beta;
    let mi = m as isize;
    let mut total = 0.0;
    for k1 in 0..mi {
        for k2 in 0..mi {
            let partial = omega2[k1 as usize] + omega2[k2 as usize];
            let mut row = 0.0;
            for k3 in 0..mi {
                let k4 = (k1 + k2 - k3).rem_euclid(mi) as usize;
                row += f_kernel(scale * (partial - omega2[k3 as usize] - omega2[k4]));
            }
            total += row;
        }
    }
    let inv = 1.0 / m as f64;
    total * inv * inv * inv
}

/// `g(β̃)` from a discrete triple sum on an `M`-point grid.
pub fn g_discrete(beta_tilde: f64, grid_m: usize, mode: DiscreteMode) -> Result<GEval> {
    g_discrete_with_budget(beta_tilde, grid_m, mode, DEFAULT_DISCRETE_BUDGET)
}

/// [`g_discrete`] with an explicit cap on the number of kernel evaluations.
///
/// The error estimate is the change against the `M/2` grid.
pub fn g_discrete_with_budget(
    beta_tilde: f64,
    grid_m: usize,
    mode: DiscreteMode,
    budget: u64,
) -> Result<GEval> {
    if grid_m < 8 {
        return Err(Error::ParameterDomain {
            name: "grid_m",
            value: grid_m as f64,
        });
    }
    check_finite("beta_tilde", beta_tilde)?;
    let requested = (grid_m as u64).saturating_pow(3);
    if requested > budget {
        return Err(Error::BudgetExceeded { requested, budget });
    }
    let beta = beta_tilde.abs();
    let eval = |m: usize| match mode {
        DiscreteMode::Riemann => riemann_sum(beta, m),
        DiscreteMode::SineGrid { calibration } => sine_grid_sum(beta, m, calibration),
    };
    let value = eval(grid_m);
    let coarse = eval(grid_m / 2);
    let method = match mode {
        DiscreteMode::Riemann => GMethod::DiscreteRiemann,
        DiscreteMode::SineGrid { .. } => GMethod::DiscreteSineGrid,
    };
    Ok(GEval {
        value,
        method,
        err_estimate: (value - coarse).abs(),
        beta_tilde,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_kernel_at_zero() {
        assert!((g_cubature(0.0, 16).unwrap().value - 1.0).abs() < 1e-12);
        assert_eq!(g_discrete(0.0, 16, DiscreteMode::Riemann).unwrap().value, 1.0);
        let s = g_discrete(0.0, 16, DiscreteMode::SineGrid { calibration: 1.0 }).unwrap();
        assert!((s.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn argument_checks() {
        assert!(g_cubature(1.0, 4).is_err());
        assert!(g_discrete(1.0, 4, DiscreteMode::Riemann).is_err());
        assert!(matches!(
            g_discrete_with_budget(1.0, 64, DiscreteMode::Riemann, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn value_at_two_hundred_by_cubature() {
        let g = g_cubature(200.0, 96).unwrap();
        assert!((g.value - 0.42).abs() < 0.01, "{}", g.value);
    }
}
