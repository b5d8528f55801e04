//! Spectral efficiency of the nonlinear Schrödinger (NLSE) fiber channel at
//! large signal-to-noise ratio.
//!
//! The crate is `no_std` (it needs `alloc`) and holds the pure numerical
//! pieces:
//!
//! * [`params`] maps dimensionful link parameters onto the three numbers that
//!   drive every analytic formula: the dispersion `β̃ = βLW²`, the
//!   nonlinearity `γ̃ = γ L P_ave` and the SNR `P/(QL)`.
//! * [`specfun`] evaluates the penalty shape function `g(β̃)` and its kernel
//!   `F(μ)` by several independent routes (extended-precision series,
//!   Gauss-Legendre cubature, discrete triple sums, large-`β̃` asymptotics).
//! * [`channels`] holds the analytic spectral-efficiency models and the
//!   crossover / applicability solvers built on them.
//! * [`grid`] and [`perturbative`] describe the discretized signal used by the
//!   split-step simulator and the first-order-in-`γ` solution of the NLSE.
//! * [`persample`] is the zero-dispersion channel, where each time sample is
//!   an independent scalar channel with a known conditional density.
//!
//! FFT propagation, Monte-Carlo ensembles, file formats and the command line
//! live in the `fibercap` crate.
#![cfg_attr(not(test), no_std)]
#![deny(missing_docs)]

extern crate alloc;

pub mod channels;
pub mod error;
pub mod grid;
mod math;
pub mod params;
pub mod persample;
pub mod perturbative;
pub mod quadrature;
pub mod rng;
pub mod specfun;

pub use error::{Error, Result};
pub use params::{DimensionlessChannel, PhysicalChannel, Span};
pub use specfun::{GConfig, GEval, GMethod};
