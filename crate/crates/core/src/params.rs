//! Link parameters and their dimensionless reduction.
//!
//! Units at this boundary are fixed to seconds, kilometres and watts:
//!
//! | field        | symbol | unit        |
//! |--------------|--------|-------------|
//! | `beta`       | β      | s²/km       |
//! | `gamma`      | γ      | 1/(W·km)    |
//! | `length`     | L      | km          |
//! | `bandwidth`  | W      | 1/s         |
//! | `noise_psd`  | Q      | W·s/km      |
//! | `signal_psd` | P      | W·s         |
//!
//! **Bandwidth convention.** `W` is stored as the plain scalar the usual
//! engineering figure suggests: a 100 GHz band is `1e11`, not `2π·1e11`.
//! Only this reading reproduces `β̃ = βLW² ≈ 200` for the standard
//! 20 ps²/km, 1000 km, 100 GHz link, so it is a convention, not a claim
//! about angular versus ordinary frequency.
//!
//! Everything downstream of [`derive_dimensionless`] works on
//! [`DimensionlessChannel`] only.

use core::f64::consts::PI;

use crate::error::{check_finite, check_positive, Error, Result};
use crate::math;

/// One ps²/km expressed in s²/km.
pub const PS2_PER_KM: f64 = 1e-24;
/// One milliwatt in watts.
pub const MILLIWATT: f64 = 1e-3;

/// Converts a power ratio in decibels to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    math::db_to_linear(db)
}

/// Converts a linear power ratio to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    math::linear_to_db(x)
}

/// Dimensionful parameters of a single-polarization lossless fiber link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalChannel {
    /// Dispersion coefficient β \[s²/km\].
    pub beta: f64,
    /// Kerr coefficient γ \[1/(W·km)\].
    pub gamma: f64,
    /// Propagation distance L \[km\].
    pub length: f64,
    /// Input bandwidth W \[1/s\], scalar convention (100 GHz is `1e11`).
    pub bandwidth: f64,
    /// Noise spectral density Q per unit length \[W·s/km\].
    pub noise_psd: f64,
    /// Signal spectral power density P \[W·s\].
    pub signal_psd: f64,
}

/// The numbers every analytic formula depends on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessChannel {
    /// β̃ = βLW².
    pub beta_tilde: f64,
    /// γ̃ = γ·L·P_ave.
    pub gamma_tilde: f64,
    /// SNR = P/(QL).
    pub snr: f64,
    /// Average signal power P_ave = PW/2π \[W\].
    pub p_ave: f64,
    /// Accumulated noise power in the band, P_noise = QLW/2π \[W\].
    pub p_noise: f64,
}

/// The part of a link the propagation routines need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    /// Dispersion coefficient.
    pub beta: f64,
    /// Kerr coefficient.
    pub gamma: f64,
    /// Propagation distance.
    pub length: f64,
}

impl Span {
    /// Builds a span, rejecting a non-positive length.
    pub fn new(beta: f64, gamma: f64, length: f64) -> Result<Self> {
        check_finite("beta", beta)?;
        check_finite("gamma", gamma)?;
        check_positive("length", length)?;
        Ok(Self {
            beta,
            gamma,
            length,
        })
    }
}

impl From<&PhysicalChannel> for Span {
    fn from(ch: &PhysicalChannel) -> Self {
        Span {
            beta: ch.beta,
            gamma: ch.gamma,
            length: ch.length,
        }
    }
}

impl PhysicalChannel {
    /// Builds a channel from the noise spectral density `Q` directly.
    pub fn new(
        beta: f64,
        gamma: f64,
        length: f64,
        bandwidth: f64,
        noise_psd: f64,
        signal_psd: f64,
    ) -> Result<Self> {
        let ch = Self {
            beta,
            gamma,
            length,
            bandwidth,
            noise_psd,
            signal_psd,
        };
        ch.validate()?;
        Ok(ch)
    }

    /// Builds a channel from the in-band noise power `P_noise = QLW/2π`
    /// and the SNR, which is how link budgets are usually quoted.
    pub fn from_noise_power(
        beta: f64,
        gamma: f64,
        length: f64,
        bandwidth: f64,
        p_noise: f64,
        snr: f64,
    ) -> Result<Self> {
        check_positive("length", length)?;
        check_positive("bandwidth", bandwidth)?;
        check_positive("p_noise", p_noise)?;
        if !(snr.is_finite() && snr >= 0.0) {
            return Err(Error::ParameterDomain {
                name: "snr",
                value: snr,
            });
        }
        let noise_psd = 2.0 * PI * p_noise / (length * bandwidth);
        Self::new(
            beta,
            gamma,
            length,
            bandwidth,
            noise_psd,
            snr * noise_psd * length,
        )
    }

    /// Rebuilds a channel from its dimensionless numbers plus a reference
    /// length, bandwidth and noise power.
    pub fn from_dimensionless(
        beta_tilde: f64,
        gamma_tilde: f64,
        snr: f64,
        length: f64,
        bandwidth: f64,
        p_noise: f64,
    ) -> Result<Self> {
        check_positive("snr", snr)?;
        check_positive("length", length)?;
        check_positive("bandwidth", bandwidth)?;
        check_positive("p_noise", p_noise)?;
        let beta = beta_tilde / (length * bandwidth * bandwidth);
        let gamma = gamma_tilde / (length * snr * p_noise);
        Self::from_noise_power(beta, gamma, length, bandwidth, p_noise, snr)
    }

    /// The 20 ps²/km, 1.31 /(W·km), 1000 km, 100 GHz link with
    /// `P_noise = 5.3e-4 mW`, at the given SNR.
    pub fn typical_link(snr: f64) -> Result<Self> {
        Self::from_noise_power(
            20.0 * PS2_PER_KM,
            1.31,
            1000.0,
            1e11,
            5.3e-4 * MILLIWATT,
            snr,
        )
    }

    /// Checks the parameter-domain invariants.
    pub fn validate(&self) -> Result<()> {
        check_finite("beta", self.beta)?;
        check_finite("gamma", self.gamma)?;
        check_positive("length", self.length)?;
        check_positive("bandwidth", self.bandwidth)?;
        check_positive("noise_psd", self.noise_psd)?;
        if !(self.signal_psd.is_finite() && self.signal_psd >= 0.0) {
            return Err(Error::ParameterDomain {
                name: "signal_psd",
                value: self.signal_psd,
            });
        }
        Ok(())
    }

    /// Same link with the signal density set to reach `snr`.
    pub fn with_snr(&self, snr: f64) -> Result<Self> {
        let mut ch = *self;
        ch.signal_psd = snr * self.noise_psd * self.length;
        ch.validate()?;
        Ok(ch)
    }

    /// Same link with β scaled so that `β̃` takes the given value.
    pub fn with_beta_tilde(&self, beta_tilde: f64) -> Result<Self> {
        let mut ch = *self;
        ch.beta = beta_tilde / (self.length * self.bandwidth * self.bandwidth);
        ch.validate()?;
        Ok(ch)
    }

    /// `QLW/2π`.
    pub fn noise_power(&self) -> f64 {
        self.noise_psd * self.length * self.bandwidth / (2.0 * PI)
    }
}

/// Reduces a physical channel to its dimensionless description.
pub fn derive_dimensionless(phys: &PhysicalChannel) -> Result<DimensionlessChannel> {
    phys.validate()?;
    let p_noise = phys.noise_power();
    let snr = phys.signal_psd / (phys.noise_psd * phys.length);
    let p_ave = snr * p_noise;
    Ok(DimensionlessChannel {
        beta_tilde: phys.beta * phys.length * phys.bandwidth * phys.bandwidth,
        gamma_tilde: phys.gamma * phys.length * p_ave,
        snr,
        p_ave,
        p_noise,
    })
}

/// `γ̃` the link would have at `snr` with its noise floor held fixed.
pub fn gamma_tilde_of_snr(phys: &PhysicalChannel, snr: f64) -> Result<f64> {
    phys.validate()?;
    check_positive("snr", snr)?;
    Ok(phys.gamma * phys.length * (snr * phys.noise_power()))
}

/// Slope `dγ̃/dSNR = γ L P_noise` of the fixed-noise-floor mapping.
pub fn gamma_tilde_per_snr(phys: &PhysicalChannel) -> Result<f64> {
    phys.validate()?;
    Ok(phys.gamma * phys.length * phys.noise_power())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn typical_link_beta_tilde_is_200() {
        let d = derive_dimensionless(&PhysicalChannel::typical_link(1000.0).unwrap()).unwrap();
        assert!((d.beta_tilde - 200.0).abs() / 200.0 < 5e-3, "{}", d.beta_tilde);
        assert!((d.p_noise - 5.3e-7).abs() < 1e-18);
    }

    #[test]
    fn linear_channel_has_no_gamma_tilde() {
        let mut ch = PhysicalChannel::typical_link(100.0).unwrap();
        ch.gamma = 0.0;
        assert_eq!(derive_dimensionless(&ch).unwrap().gamma_tilde, 0.0);
    }

    #[test]
    fn gamma_tilde_at_unit_snr() {
        // 1.31 /(W km) * 1000 km * 5.3e-7 W
        let ch = PhysicalChannel::typical_link(1.0).unwrap();
        let g = gamma_tilde_of_snr(&ch, 1.0).unwrap();
        assert!((g - 6.943e-4).abs() < 1e-9, "{g}");
        let g2 = gamma_tilde_of_snr(&ch, 2.0).unwrap();
        assert_eq!(g2, 2.0 * g);
        assert!(gamma_tilde_of_snr(&ch, 1e-300).unwrap() < 1e-300);
    }

    #[test]
    fn rejects_bad_domain() {
        for (l, w, q) in [(0.0, 1.0, 1.0), (1.0, -1.0, 1.0), (1.0, 1.0, 0.0)] {
            let err = PhysicalChannel::new(0.0, 0.0, l, w, q, 1.0).unwrap_err();
            assert!(matches!(err, Error::ParameterDomain { .. }));
        }
        assert!(PhysicalChannel::new(0.0, 0.0, 1.0, 1.0, 1.0, -1.0).is_err());
        assert!(gamma_tilde_of_snr(&PhysicalChannel::typical_link(1.0).unwrap(), 0.0).is_err());
    }

    #[test]
    fn span_rejects_zero_length() {
        assert!(Span::new(1.0, 1.0, 0.0).is_err());
        assert!(Span::new(0.0, 0.0, 1.0).is_ok());
    }
}
