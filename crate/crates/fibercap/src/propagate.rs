//! Split-step Fourier integration of
//! `∂_zψ + iβ∂²_tψ − iγ|ψ|²ψ = η` over one span.
//!
//! The dispersive sub-step is diagonal in frequency, `X_n ← e^{iβω_n²h} X_n`;
//! the Kerr sub-step is diagonal in time, `ψ ← ψ e^{iγ|ψ|²h}`. Both are exact
//! on their own, so only the splitting itself is approximate. Noise is added
//! in the time domain at the end of every step, `QΔ/δ_t` per sample.

use fibercap_core::grid::{ComplexField, Domain};
use fibercap_core::params::Span;
use fibercap_core::rng::{master_rng, StreamRng};
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::transform::Transformer;

/// Largest relative power change a noiseless step may cause.
pub const POWER_GUARD: f64 = 1e-6;

/// Operator splitting used per step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Symmetric `N(Δ/2) D(Δ) N(Δ/2)`, second order.
    #[default]
    Strang,
    /// `D(Δ)` then `N(Δ)`, first order.
    Euler,
}

impl Scheme {
    /// Name used in configs and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Strang => "strang",
            Scheme::Euler => "euler",
        }
    }

    /// Inverse of [`Scheme::name`].
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "strang" => Some(Scheme::Strang),
            "euler" => Some(Scheme::Euler),
            _ => None,
        }
    }
}

/// Step count, splitting scheme and noise seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropagationConfig {
    /// Number of z-steps N; `Δ = L/N`.
    pub n_steps: usize,
    /// Splitting scheme.
    pub scheme: Scheme,
    /// Seed of the noise stream.
    pub seed: u64,
}

impl PropagationConfig {
    /// Checked constructor.
    pub fn new(n_steps: usize, scheme: Scheme, seed: u64) -> Result<Self> {
        let cfg = Self {
            n_steps,
            scheme,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `n_steps ≥ 1`.
    pub fn validate(&self) -> Result<()> {
        if self.n_steps == 0 {
            return Err(fibercap_core::Error::ParameterDomain {
                name: "n_steps",
                value: 0.0,
            }
            .into());
        }
        Ok(())
    }
}

struct Noise {
    sigma: f64,
    rng: StreamRng,
}

/// Propagates `field` over `span` and returns the output in the frequency domain.
///
/// `noise_q` is the noise spectral density Q per unit length; `None` or zero
/// gives the deterministic solution.
pub fn propagate(
    field: &ComplexField,
    span: &Span,
    cfg: &PropagationConfig,
    noise_q: Option<f64>,
) -> Result<ComplexField> {
    let mut tf = Transformer::new(field.grid);
    propagate_with(&mut tf, field, span, cfg, noise_q)
}

/// [`propagate`] reusing a transformer planned for the field's grid.
pub fn propagate_with(
    tf: &mut Transformer,
    field: &ComplexField,
    span: &Span,
    cfg: &PropagationConfig,
    noise_q: Option<f64>,
) -> Result<ComplexField> {
    cfg.validate()?;
    if *tf.grid() != field.grid {
        return Err(Error::Core(fibercap_core::Error::ShapeMismatch(
            "transformer planned for a different grid",
        )));
    }
    let grid = field.grid;
    let dz = span.length / cfg.n_steps as f64;
    let mut noise = match noise_q {
        Some(q) if q < 0.0 || !q.is_finite() => {
            return Err(fibercap_core::Error::ParameterDomain {
                name: "noise_q",
                value: q,
            }
            .into())
        }
        Some(q) if q > 0.0 => Some(Noise {
            sigma: (0.5 * q * dz / grid.delta_t).sqrt(),
            rng: master_rng(cfg.seed),
        }),
        _ => None,
    };

    let disp: Vec<Complex64> = (0..grid.m_total)
        .map(|j| Complex64::from_polar(1.0, span.beta * grid.omega(j).powi(2) * dz))
        .collect();
    let kerr = |buf: &mut [Complex64], h: f64| {
        for z in buf.iter_mut() {
            *z *= Complex64::from_polar(1.0, span.gamma * z.norm_sqr() * h);
        }
    };

    let mut buf = tf.to_time(field).samples;
    for step in 0..cfg.n_steps {
        let before: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
        match cfg.scheme {
            Scheme::Strang => {
                kerr(&mut buf, 0.5 * dz);
                dispersion(tf, &mut buf, &disp);
                kerr(&mut buf, 0.5 * dz);
            }
            Scheme::Euler => {
                dispersion(tf, &mut buf, &disp);
                kerr(&mut buf, dz);
            }
        }
        let after: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
        let rel_change = if before > 0.0 {
            (after - before).abs() / before
        } else {
            after
        };
        if rel_change.is_nan() || rel_change > POWER_GUARD {
            return Err(Error::Unstable { step, rel_change });
        }
        if let Some(n) = noise.as_mut() {
            for z in buf.iter_mut() {
                let a: f64 = StandardNormal.sample(&mut n.rng);
                let b: f64 = StandardNormal.sample(&mut n.rng);
                *z += Complex64::new(n.sigma * a, n.sigma * b);
            }
        }
    }
    tf.time_to_freq_in_place(&mut buf);
    Ok(ComplexField::new(buf, Domain::Frequency, grid)?)
}

fn dispersion(tf: &mut Transformer, buf: &mut [Complex64], disp: &[Complex64]) {
    tf.time_to_freq_in_place(buf);
    for (z, d) in buf.iter_mut().zip(disp) {
        *z *= d;
    }
    tf.freq_to_time_in_place(buf);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::to_time;
    use fibercap_core::grid::{make_grid, sample_gaussian_input};
    use std::f64::consts::PI;

    fn input(seed: u64) -> ComplexField {
        let g = make_grid(2.0 * PI * 16.0, 16, 4).unwrap();
        sample_gaussian_input(&g, 1.0, &mut master_rng(seed)).unwrap()
    }

    #[test]
    fn linear_channel_is_exact() {
        let x = input(1);
        let span = Span::new(0.003, 0.0, 1.0).unwrap();
        let cfg = PropagationConfig::new(7, Scheme::Strang, 0).unwrap();
        let y = propagate(&x, &span, &cfg, None).unwrap();
        for j in 0..x.grid.m_total {
            let want = Complex64::from_polar(1.0, 0.003 * x.grid.omega(j).powi(2)) * x.samples[j];
            assert!((y.samples[j] - want).norm() <= 1e-10 * x.norm());
        }
    }

    #[test]
    fn zero_dispersion_is_a_pointwise_rotation() {
        let x = input(2);
        let span = Span::new(0.0, 0.4, 1.0).unwrap();
        let cfg = PropagationConfig::new(3, Scheme::Euler, 0).unwrap();
        let y = to_time(&propagate(&x, &span, &cfg, None).unwrap());
        let xt = to_time(&x);
        for (a, b) in xt.samples.iter().zip(&y.samples) {
            let want = a * Complex64::from_polar(1.0, 0.4 * a.norm_sqr());
            assert!((b - want).norm() <= 1e-10 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn rejects_bad_settings() {
        assert!(PropagationConfig::new(0, Scheme::Strang, 0).is_err());
        let x = input(3);
        let span = Span::new(0.0, 0.0, 1.0).unwrap();
        let cfg = PropagationConfig::new(2, Scheme::Strang, 0).unwrap();
        assert!(propagate(&x, &span, &cfg, Some(-1.0)).is_err());
        assert_eq!(Scheme::from_name("euler"), Some(Scheme::Euler));
        assert_eq!(Scheme::from_name("rk4"), None);
    }

    #[test]
    fn noise_is_seeded() {
        let x = input(4);
        let span = Span::new(0.001, 0.2, 1.0).unwrap();
        let a = PropagationConfig::new(20, Scheme::Strang, 9).unwrap();
        let b = PropagationConfig { seed: 10, ..a };
        let ya = propagate(&x, &span, &a, Some(0.01)).unwrap();
        assert_eq!(ya, propagate(&x, &span, &a, Some(0.01)).unwrap());
        assert_ne!(ya, propagate(&x, &span, &b, Some(0.01)).unwrap());
    }
}
