//! Time/frequency transforms with the grid's continuous-normalized convention.
//!
//! `X_n = δ_t Σ_j x_j e^{iω_n t_j}` and `x_j = (1/T) Σ_n X_n e^{−iω_n t_j}`.

use std::sync::Arc;

use fibercap_core::grid::{ComplexField, Domain, SpectralGrid};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Cached FFT plans for one grid size.
pub struct Transformer {
    grid: SpectralGrid,
    // rustfft's "forward" is e^{−i...}, which is our frequency → time direction
    to_time: Arc<dyn Fft<f64>>,
    to_freq: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl Transformer {
    /// Plans both directions for `grid`.
    pub fn new(grid: SpectralGrid) -> Self {
        let mut planner = FftPlanner::new();
        let to_time = planner.plan_fft_forward(grid.m_total);
        let to_freq = planner.plan_fft_inverse(grid.m_total);
        let len = to_time
            .get_inplace_scratch_len()
            .max(to_freq.get_inplace_scratch_len());
        Self {
            grid,
            to_time,
            to_freq,
            scratch: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// Grid the plans were made for.
    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    /// In-place frequency → time on raw samples.
    pub fn freq_to_time_in_place(&mut self, buf: &mut [Complex64]) {
        self.to_time.process_with_scratch(buf, &mut self.scratch);
        let s = 1.0 / self.grid.big_t;
        buf.iter_mut().for_each(|z| *z *= s);
    }

    /// In-place time → frequency on raw samples.
    pub fn time_to_freq_in_place(&mut self, buf: &mut [Complex64]) {
        self.to_freq.process_with_scratch(buf, &mut self.scratch);
        let s = self.grid.delta_t;
        buf.iter_mut().for_each(|z| *z *= s);
    }

    /// Field in the time domain (copied if it already is).
    pub fn to_time(&mut self, field: &ComplexField) -> ComplexField {
        let mut out = field.clone();
        if out.domain == Domain::Frequency {
            self.freq_to_time_in_place(&mut out.samples);
            out.domain = Domain::Time;
        }
        out
    }

    /// Field in the frequency domain (copied if it already is).
    pub fn to_frequency(&mut self, field: &ComplexField) -> ComplexField {
        let mut out = field.clone();
        if out.domain == Domain::Time {
            self.time_to_freq_in_place(&mut out.samples);
            out.domain = Domain::Frequency;
        }
        out
    }
}

/// One-shot [`Transformer::to_time`].
pub fn to_time(field: &ComplexField) -> ComplexField {
    Transformer::new(field.grid).to_time(field)
}

/// One-shot [`Transformer::to_frequency`].
pub fn to_frequency(field: &ComplexField) -> ComplexField {
    Transformer::new(field.grid).to_frequency(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fibercap_core::grid::{make_grid, sample_gaussian_input};
    use fibercap_core::rng::master_rng;
    use std::f64::consts::PI;

    #[test]
    fn round_trip_and_parseval() {
        let g = make_grid(2.0 * PI * 16.0, 16, 4).unwrap();
        let x = sample_gaussian_input(&g, 2.0, &mut master_rng(5)).unwrap();
        let t = to_time(&x);
        let back = to_frequency(&t);
        assert!(back.distance(&x).unwrap() <= 1e-12 * x.norm());
        let (pt, pf) = (t.average_power(), x.average_power());
        assert!((pt - pf).abs() <= 1e-12 * pf);
    }

    #[test]
    fn single_bin_is_a_plane_wave() {
        let g = make_grid(2.0 * PI * 8.0, 8, 2).unwrap();
        let mut x = ComplexField::zeros(g, Domain::Frequency);
        x.samples[g.slot(1)] = Complex64::new(g.big_t, 0.0);
        let t = to_time(&x);
        for (j, z) in t.samples.iter().enumerate() {
            let want = Complex64::from_polar(1.0, -g.omega(g.slot(1)) * j as f64 * g.delta_t);
            assert!((z - want).norm() < 1e-12);
        }
    }
}
