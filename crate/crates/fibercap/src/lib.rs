//! Simulation, Monte-Carlo and command-line layer on top of `fibercap-core`.
//!
//! * [`transform`] and [`propagate`]: FFT-based split-step integration of the
//!   noisy NLSE on a [`SpectralGrid`](fibercap_core::grid::SpectralGrid).
//! * [`ensemble`]: parallel noise statistics over many realizations.
//! * [`mi`]: parallel driver for the per-sample mutual-information estimator.
//! * [`config`], [`snapshot`]: TOML run configuration and field files.
//! * [`validate`]: the numbered validation checks behind `fibercap validate`.
//! * [`cli`]: the `fibercap` binary.
#![deny(missing_docs)]

pub mod cli;
pub mod config;
pub mod ensemble;
mod error;
pub mod mi;
pub mod propagate;
pub mod snapshot;
pub mod transform;
pub mod validate;

pub use error::{Error, Result};
