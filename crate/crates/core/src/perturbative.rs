//! First-order-in-`γ` solution of the noiseless NLSE at `z = L`.
//!
//! ```text
//! Φ⁽⁰⁾_n = e^{iβΩ²_n L} X_n
//! Φ⁽¹⁾_n = iγ e^{iβΩ²_n L} δ_ω² Σ X_{k₁} X_{k₂} X̄_{k₃} · L·K(μ, L),   k₁+k₂−k₃ ≡ n (mod M′)
//! μ      = iβL(Ω²_n + Ω²_{k₃} − Ω²_{k₁} − Ω²_{k₂}),   K(μ, z) = (1 − e^{−μz/L})/μ
//! ```
//!
//! The factor `L` makes `L·K` the `z′`-integral `∫₀^L e^{−μz′/L} dz′`. The
//! sum runs directly over all input-band triples, `O(M³)`, because `K`
//! couples all four indices.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ComplexField, Domain, SpectralGrid};
use crate::math::sin;
use crate::params::Span;

/// Default cap on the number of triples summed.
pub const DEFAULT_TRIPLE_BUDGET: u64 = 64 * 64 * 64;

const K_SERIES_SWITCH: f64 = 1e-6;

/// Discrete dispersion relation used for `Ω²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DispersionConvention {
    /// `ω_n² = (2πn/T)²`, the FFT-diagonal Laplacian used by the simulator.
    #[default]
    Continuum,
    /// `Ω_n² = (2M′/T)² sin²(πn/M′)`, the finite-difference form.
    SineGrid,
}

impl DispersionConvention {
    /// `Ω²` for FFT slot `j` of `grid`.
    pub fn omega_sq(self, grid: &SpectralGrid, j: usize) -> f64 {
        match self {
            DispersionConvention::Continuum => {
                let w = grid.omega(j);
                w * w
            }
            DispersionConvention::SineGrid => {
                let m = grid.m_total as f64;
                let s = 2.0 * m / grid.big_t * sin(PI * grid.signed_index(j) as f64 / m);
                s * s
            }
        }
    }
}

/// `K(μ, z) = (1 − e^{−μz/L})/μ`, with its `μ → 0` limit `z/L`.
pub fn kernel_k(mu: Complex64, z_over_l: f64) -> Complex64 {
    if mu.norm() < K_SERIES_SWITCH {
        // z/L − μ(z/L)²/2 + μ²(z/L)³/6
        let s = z_over_l;
        Complex64::new(s, 0.0) - mu * (s * s / 2.0) + mu * mu * (s * s * s / 6.0)
    } else {
        (Complex64::new(1.0, 0.0) - (-mu * z_over_l).exp()) / mu
    }
}

/// Leading and first-order parts of the solution, separately.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbativeSolution {
    /// `Φ⁽⁰⁾(L)`, linear propagation of the input.
    pub phi0: ComplexField,
    /// `Φ⁽¹⁾(L)`, first order in `γ`.
    pub phi1: ComplexField,
}

impl PerturbativeSolution {
    /// `Φ⁽⁰⁾ + Φ⁽¹⁾`.
    pub fn total(&self) -> ComplexField {
        let mut out = self.phi0.clone();
        for (a, b) in out.samples.iter_mut().zip(&self.phi1.samples) {
            *a += b;
        }
        out
    }
}

/// `Φ⁽⁰⁾ + Φ⁽¹⁾` at `z = L` for a band-limited frequency-domain input.
pub fn phi_perturbative(
    x: &ComplexField,
    span: &Span,
    convention: DispersionConvention,
) -> Result<ComplexField> {
    Ok(phi_perturbative_parts(x, span, convention, DEFAULT_TRIPLE_BUDGET)?.total())
}

/// [`phi_perturbative`] returning both orders and taking an explicit budget.
pub fn phi_perturbative_parts(
    x: &ComplexField,
    span: &Span,
    convention: DispersionConvention,
    budget: u64,
) -> Result<PerturbativeSolution> {
    x.require(Domain::Frequency)?;
    let grid = &x.grid;
    let m = grid.m_meaning as u64;
    let requested = m.saturating_pow(3);
    if requested > budget {
        return Err(Error::BudgetExceeded { requested, budget });
    }
    if !x.is_band_limited()? {
        return Err(Error::ShapeMismatch("input has energy outside the band"));
    }

    let (beta, gamma, length) = (span.beta, span.gamma, span.length);
    let omega2: Vec<f64> = (0..grid.m_total)
        .map(|j| convention.omega_sq(grid, j))
        .collect();
    let propagator = |j: usize| Complex64::new(0.0, beta * omega2[j] * length).exp();

    let mut phi0 = ComplexField::zeros(*grid, Domain::Frequency);
    for (j, out) in phi0.samples.iter_mut().enumerate() {
        *out = propagator(j) * x.samples[j];
    }

    let mut phi1 = ComplexField::zeros(*grid, Domain::Frequency);
    if gamma != 0.0 {
        let band: Vec<usize> = grid.band_indices().map(|n| grid.slot(n)).collect();
        let mut acc = alloc::vec![Complex64::new(0.0, 0.0); grid.m_total];
        for &j1 in &band {
            for &j2 in &band {
                let x12 = x.samples[j1] * x.samples[j2];
                let n12 = grid.signed_index(j1) + grid.signed_index(j2);
                for &j3 in &band {
                    let j = grid.slot(n12 - grid.signed_index(j3));
                    let mu = Complex64::new(
                        0.0,
                        beta * length * (omega2[j] + omega2[j3] - omega2[j1] - omega2[j2]),
                    );
                    acc[j] += x12 * x.samples[j3].conj() * kernel_k(mu, 1.0);
                }
            }
        }
        let d2 = grid.delta_omega * grid.delta_omega;
        let pref = Complex64::new(0.0, gamma * d2 * length);
        for (j, out) in phi1.samples.iter_mut().enumerate() {
            *out = pref * propagator(j) * acc[j];
        }
    }
    Ok(PerturbativeSolution { phi0, phi1 })
}
