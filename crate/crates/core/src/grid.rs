//! Discretized time/frequency description of a band-limited signal.
//!
//! A window of length `T` is sampled at `M′` points, `δ_t = T/M′`. The
//! frequency bins are spaced by `2π/T`; bin `n` (signed, `−M′/2 ≤ n < M′/2`)
//! sits at `ω_n = 2πn/T`. The input occupies the `M` central bins, which span
//! the band `W = 2πM/T`; the dense grid spans `W′ = rW` with `M′ = rM`.
//!
//! Frequency-domain amplitudes follow the continuous convention
//! `f(t) = ∫ dω/2π e^{−iωt} f_ω`, discretized as
//! `X_n = δ_t Σ_j x_j e^{iω_n t_j}` and `x_j = (1/T) Σ_n X_n e^{−iω_n t_j}`.
//! With that convention the density step is `δ_ω = 1/T`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_positive, Error, Result};
use crate::math::sqrt;

/// Time/frequency grid shared by the simulator and the perturbative solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGrid {
    /// Window length T.
    pub big_t: f64,
    /// Number of information-bearing bins M.
    pub m_meaning: usize,
    /// Total number of bins M′.
    pub m_total: usize,
    /// Time step δ_t = T/M′.
    pub delta_t: f64,
    /// Frequency density step δ_ω = W/(2πM) = 1/T.
    pub delta_omega: f64,
    /// Input bandwidth W.
    pub w: f64,
    /// Simulated bandwidth W′ = rW.
    pub w_prime: f64,
}

/// Builds the grid for bandwidth `w`, `m_meaning` input bins and integer
/// oversampling `r`.
pub fn make_grid(w: f64, m_meaning: usize, oversampling: usize) -> Result<SpectralGrid> {
    check_positive("w", w)?;
    if m_meaning < 2 {
        return Err(Error::ParameterDomain {
            name: "m_meaning",
            value: m_meaning as f64,
        });
    }
    if oversampling < 1 {
        return Err(Error::ParameterDomain {
            name: "oversampling",
            value: oversampling as f64,
        });
    }
    let m_total = m_meaning * oversampling;
    let big_t = 2.0 * PI * m_meaning as f64 / w;
    Ok(SpectralGrid {
        big_t,
        m_meaning,
        m_total,
        delta_t: big_t / m_total as f64,
        delta_omega: w / (2.0 * PI * m_meaning as f64),
        w,
        w_prime: w * oversampling as f64,
    })
}

impl SpectralGrid {
    /// Builds the grid from both bandwidths; their ratio must be an integer.
    pub fn from_bandwidths(w: f64, w_prime: f64, m_meaning: usize) -> Result<Self> {
        check_positive("w", w)?;
        check_positive("w_prime", w_prime)?;
        let ratio = w_prime / w;
        let r = libm::round(ratio);
        if r < 1.0 || (ratio - r).abs() > 1e-9 * r {
            return Err(Error::ParameterDomain {
                name: "oversampling",
                value: ratio,
            });
        }
        make_grid(w, m_meaning, r as usize)
    }

    /// Oversampling factor r = M′/M.
    pub fn oversampling(&self) -> usize {
        self.m_total / self.m_meaning
    }

    /// Signed frequency index of FFT slot `j`.
    pub fn signed_index(&self, j: usize) -> isize {
        let m = self.m_total as isize;
        let j = j as isize;
        if j < (m + 1) / 2 {
            j
        } else {
            j - m
        }
    }

    /// FFT slot holding signed frequency index `n` (taken mod M′).
    pub fn slot(&self, n: isize) -> usize {
        n.rem_euclid(self.m_total as isize) as usize
    }

    /// Angular frequency `2πn/T` of FFT slot `j`.
    pub fn omega(&self, j: usize) -> f64 {
        2.0 * PI * self.signed_index(j) as f64 / self.big_t
    }

    /// Signed indices of the input band, `−⌊M/2⌋ ..= M − ⌊M/2⌋ − 1`.
    pub fn band_indices(&self) -> core::ops::RangeInclusive<isize> {
        let lo = -((self.m_meaning / 2) as isize);
        lo..=lo + self.m_meaning as isize - 1
    }

    /// Whether FFT slot `j` lies in the input band.
    pub fn in_band(&self, j: usize) -> bool {
        self.band_indices().contains(&self.signed_index(j))
    }
}

/// Which representation a [`ComplexField`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// Samples `x_j` at `t_j = j δ_t`.
    Time,
    /// Amplitudes `X_n` in FFT slot order.
    Frequency,
}

impl Domain {
    /// Tag byte used by the binary snapshot format.
    pub fn tag(self) -> u8 {
        match self {
            Domain::Time => 0,
            Domain::Frequency => 1,
        }
    }

    /// Inverse of [`Domain::tag`].
    pub fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            0 => Some(Domain::Time),
            1 => Some(Domain::Frequency),
            _ => None,
        }
    }
}

/// `M′` complex samples on a [`SpectralGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    /// Samples in time order or FFT slot order.
    pub samples: Vec<Complex64>,
    /// Representation.
    pub domain: Domain,
    /// Grid the samples live on.
    pub grid: SpectralGrid,
}

impl ComplexField {
    /// All-zero field.
    pub fn zeros(grid: SpectralGrid, domain: Domain) -> Self {
        Self {
            samples: vec![Complex64::new(0.0, 0.0); grid.m_total],
            domain,
            grid,
        }
    }

    /// Wraps samples, checking the length.
    pub fn new(samples: Vec<Complex64>, domain: Domain, grid: SpectralGrid) -> Result<Self> {
        if samples.len() != grid.m_total {
            return Err(Error::ShapeMismatch("sample count differs from M′"));
        }
        Ok(Self {
            samples,
            domain,
            grid,
        })
    }

    /// Average power, `(1/T)∫|x|²dt` in time or `Σ|X_n|²/T²` in frequency.
    pub fn average_power(&self) -> f64 {
        let s: f64 = self.samples.iter().map(|z| z.norm_sqr()).sum();
        match self.domain {
            Domain::Time => s / self.grid.m_total as f64,
            Domain::Frequency => s / (self.grid.big_t * self.grid.big_t),
        }
    }

    /// Average power carried by bins outside the input band.
    pub fn out_of_band_power(&self) -> Result<f64> {
        self.require(Domain::Frequency)?;
        let t2 = self.grid.big_t * self.grid.big_t;
        Ok(self
            .samples
            .iter()
            .enumerate()
            .filter(|(j, _)| !self.grid.in_band(*j))
            .map(|(_, z)| z.norm_sqr())
            .sum::<f64>()
            / t2)
    }

    /// Whether every bin outside the input band is exactly zero.
    pub fn is_band_limited(&self) -> Result<bool> {
        self.require(Domain::Frequency)?;
        Ok(self
            .samples
            .iter()
            .enumerate()
            .all(|(j, z)| self.grid.in_band(j) || (z.re == 0.0 && z.im == 0.0)))
    }

    /// Euclidean distance between two fields on the same grid and domain.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.domain != other.domain || self.samples.len() != other.samples.len() {
            return Err(Error::ShapeMismatch("fields differ in domain or length"));
        }
        Ok(sqrt(
            self.samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum(),
        ))
    }

    /// Euclidean norm of the samples.
    pub fn norm(&self) -> f64 {
        sqrt(self.samples.iter().map(|z| z.norm_sqr()).sum())
    }

    pub(crate) fn require(&self, domain: Domain) -> Result<()> {
        if self.domain == domain {
            Ok(())
        } else {
            Err(Error::ShapeMismatch("field is in the wrong domain"))
        }
    }
}

/// Draws a Gaussian input: i.i.d. circular complex Gaussian amplitudes of
/// variance `P/δ_ω` in the `M` band bins, zero elsewhere.
pub fn sample_gaussian_input<R: Rng + ?Sized>(
    grid: &SpectralGrid,
    signal_psd: f64,
    rng: &mut R,
) -> Result<ComplexField> {
    if !(signal_psd.is_finite() && signal_psd >= 0.0) {
        return Err(Error::ParameterDomain {
            name: "signal_psd",
            value: signal_psd,
        });
    }
    let sigma = sqrt(0.5 * signal_psd / grid.delta_omega);
    let mut field = ComplexField::zeros(*grid, Domain::Frequency);
    for n in grid.band_indices() {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        field.samples[grid.slot(n)] = Complex64::new(sigma * re, sigma * im);
    }
    Ok(field)
}
