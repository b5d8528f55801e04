//! Noise statistics over an ensemble of noisy propagations.
//!
//! Realization `i` draws its input and its noise from streams keyed by
//! `(seed, i)`, runs once without noise and once with, and records the
//! added power and the deviation `Y − Φ(L)`. Realizations run in parallel and
//! are reduced in index order, so results do not depend on the thread count.

use fibercap_core::grid::{sample_gaussian_input, SpectralGrid};
use fibercap_core::params::Span;
use fibercap_core::persample::MCEstimate;
use fibercap_core::rng::{derive_seed, realization_rng};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::propagate::{propagate_with, PropagationConfig};
use crate::transform::Transformer;

const INPUT_TAG: u64 = 0x1;
const NOISE_TAG: u64 = 0x2;

/// Minimum ensemble size.
pub const MIN_REALIZATIONS: usize = 100;

/// What to simulate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    /// Fiber span.
    pub span: Span,
    /// Simulation grid.
    pub grid: SpectralGrid,
    /// Input spectral density P.
    pub signal_psd: f64,
    /// Noise spectral density Q per unit length.
    pub noise_q: f64,
    /// Step count, scheme and master seed.
    pub propagation: PropagationConfig,
    /// Number of realizations.
    pub n_realizations: usize,
}

/// Power-law fit of the mean deviation against Q.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// Q values used.
    pub q_values: Vec<f64>,
    /// Mean RMS deviation at each Q.
    pub deviations: Vec<f64>,
    /// Least-squares slope of `ln deviation` against `ln Q`.
    pub exponent: f64,
}

/// Ensemble averages.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseStats {
    /// `P(Y) − P(Φ(L))`, average power in the whole simulated band.
    pub added_power: MCEstimate,
    /// RMS deviation `√P(Y − Φ(L))`.
    pub deviation: MCEstimate,
    /// Present when a Q ladder was given.
    pub scaling_fit: Option<ScalingFit>,
}

/// `QLW′/2π`, the noise power the ensemble should add.
pub fn expected_added_power(spec: &EnsembleSpec) -> f64 {
    spec.noise_q * spec.span.length * spec.grid.w_prime / (2.0 * std::f64::consts::PI)
}

/// Runs the ensemble at `spec.noise_q` and, if `q_ladder` is not empty,
/// at every Q of the ladder with the same inputs and noise streams.
pub fn ensemble_noise_stats(spec: &EnsembleSpec, q_ladder: &[f64]) -> Result<NoiseStats> {
    if spec.n_realizations < MIN_REALIZATIONS {
        return Err(fibercap_core::Error::ParameterDomain {
            name: "n_realizations",
            value: spec.n_realizations as f64,
        }
        .into());
    }
    spec.propagation.validate()?;
    let mut qs = vec![spec.noise_q];
    qs.extend_from_slice(q_ladder);
    let seed = spec.propagation.seed;
    let grid = spec.grid;

    // per realization: (added power, deviation) for each q
    let rows: Vec<Vec<(f64, f64)>> = (0..spec.n_realizations as u64)
        .into_par_iter()
        .map_init(
            || Transformer::new(grid),
            |tf, i| -> Result<Vec<(f64, f64)>> {
                let mut rng = realization_rng(derive_seed(seed, INPUT_TAG), i);
                let x = sample_gaussian_input(&grid, spec.signal_psd, &mut rng)?;
                let clean = propagate_with(tf, &x, &spec.span, &spec.propagation, None)?;
                let p_clean = clean.average_power();
                let noisy_cfg = PropagationConfig {
                    seed: derive_seed(derive_seed(seed, NOISE_TAG), i),
                    ..spec.propagation
                };
                qs.iter()
                    .map(|&q| {
                        let y = propagate_with(tf, &x, &spec.span, &noisy_cfg, Some(q))?;
                        let t2 = grid.big_t * grid.big_t;
                        let dev2: f64 = y
                            .samples
                            .iter()
                            .zip(&clean.samples)
                            .map(|(a, b)| (a - b).norm_sqr())
                            .sum::<f64>()
                            / t2;
                        Ok((y.average_power() - p_clean, dev2.sqrt()))
                    })
                    .collect()
            },
        )
        .collect::<Result<_>>()?;

    let column = |k: usize, pick: fn(&(f64, f64)) -> f64| -> Vec<f64> {
        rows.iter().map(|r| pick(&r[k])).collect()
    };
    let added_power = MCEstimate::from_samples(&column(0, |r| r.0));
    let deviation = MCEstimate::from_samples(&column(0, |r| r.1));

    let scaling_fit = if q_ladder.is_empty() {
        None
    } else {
        let deviations: Vec<f64> = (1..qs.len())
            .map(|k| MCEstimate::from_samples(&column(k, |r| r.1)).mean)
            .collect();
        Some(ScalingFit {
            exponent: log_log_slope(q_ladder, &deviations)?,
            q_values: q_ladder.to_vec(),
            deviations,
        })
    };
    Ok(NoiseStats {
        added_power,
        deviation,
        scaling_fit,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 || x.iter().chain(y).any(|v| v.is_nan() || *v <= 0.0) {
        return Err(Error::Core(fibercap_core::Error::ShapeMismatch(
            "log-log fit needs at least two positive points",
        )));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    Ok(sxy / sxx)
}
