//! Quadrature rules used by the special functions and channel models.
//!
//! Node generation for the Gaussian rules is delegated to `gauss-quad`; this
//! module only rescales them and adds an adaptive Gauss-Kronrod integrator
//! for the cases where a fixed rule is not trustworthy.

use alloc::vec::Vec;
use core::num::NonZeroUsize;

use gauss_quad::{GaussLaguerre, GaussLegendre};

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights mapped onto `[0, 1]`.
#[derive(Debug, Clone)]
pub struct UnitLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl UnitLegendre {
    /// An `n`-point rule; `n` is clamped to at least 1.
    pub fn new(n: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).expect("n >= 1"));
        let (nodes, weights) = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .unzip();
        Self { nodes, weights }
    }

    /// Nodes in `[0, 1]`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights, summing to one.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Always false; a rule has at least one point.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(a + h * x))
            .sum::<f64>()
            * h
    }
}

/// `∫_0^∞ e^{-τ} f(τ) dτ` with an `n`-point Gauss-Laguerre rule.
pub fn gauss_laguerre<F: FnMut(f64) -> f64>(n: usize, mut f: F) -> f64 {
    let rule = GaussLaguerre::new(
        NonZeroUsize::new(n.max(1)).expect("n >= 1"),
        0.0.try_into().expect("alpha = 0 is valid"),
    );
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| w * f(x))
        .sum()
}

// Kronrod 15-point extension of the 7-point Gauss rule, on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod_15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod (7/15) integration of `f` over `[a, b]`.
///
/// Returns the integral and the summed error estimate. Fails if the
/// estimate is still above `tol` after `max_intervals` subdivisions.
pub fn adaptive_kronrod<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_intervals: usize,
) -> Result<(f64, f64)> {
    let (v, e) = kronrod_15(&mut f, a, b);
    let mut intervals: Vec<(f64, f64, f64, f64)> = alloc::vec![(a, b, v, e)];
    loop {
        let total_err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if total_err <= tol {
            break;
        }
        if intervals.len() >= max_intervals {
            return Err(Error::QuadratureNotConverged {
                achieved: total_err,
                requested: tol,
            });
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (vl, el) = kronrod_15(&mut f, lo, mid);
        let (vr, er) = kronrod_15(&mut f, mid, hi);
        intervals.push((lo, mid, vl, el));
        intervals.push((mid, hi, vr, er));
    }
    // sum in position order so the result does not depend on refinement history
    intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
    let value = intervals.iter().map(|iv| iv.2).sum();
    let err = intervals.iter().map(|iv| iv.3).sum();
    Ok((value, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        let r = UnitLegendre::new(5);
        assert!((r.weights().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((r.integrate(0.0, 2.0, |x| x.powi(9)) - 102.4).abs() < 1e-11);
    }

    #[test]
    fn laguerre_gives_factorials() {
        let v = gauss_laguerre(16, |x| x.powi(5));
        assert!((v - 120.0).abs() < 1e-9);
    }

    #[test]
    fn kronrod_handles_peaks() {
        let (v, e) = adaptive_kronrod(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10, 500).unwrap();
        let exact = 2.0 * 100.0 * libm::atan(100.0);
        assert!((v - exact).abs() < 1e-8, "{v} vs {exact} (err {e})");
    }

    #[test]
    fn kronrod_reports_failure() {
        let err = adaptive_kronrod(|x| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0, 1e-14, 4);
        assert!(matches!(err, Err(Error::QuadratureNotConverged { .. })));
    }
}
