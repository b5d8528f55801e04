//! The penalty shape function `g(β̃)` and the kernel `F(μ)` behind it.
//!
//! `g` multiplies `γ̃²/3` in the first nonlinear correction to the spectral
//! efficiency. It equals one without dispersion and decays like
//! `log(β̃)/β̃`. Every evaluation route lives here so that they can be checked
//! against each other:
//!
//! | route                | function                      | good for            |
//! |----------------------|-------------------------------|---------------------|
//! | power series         | [`g_series`]                  | any β̃, exact digits |
//! | cube integral        | [`g_cubature`]                | moderate/large β̃    |
//! | Riemann triple sum   | [`g_discrete`]                | `O(1/M)` oracle     |
//! | sine-grid triple sum | [`g_discrete`]                | discretized model   |
//! | asymptotic           | [`g_asymptotic`]              | β̃ ≫ 1               |

mod cubature;
mod kernel;
mod series;

pub use cubature::{
    g_cubature, g_discrete, g_discrete_with_budget, DiscreteMode, DEFAULT_DISCRETE_BUDGET,
    SINE_GRID_CONTINUUM, SINE_GRID_LITERAL,
};
pub use kernel::{f_kernel, f_kernel_oracle, f_kernel_series, green0, KERNEL_SERIES_SWITCH};
pub use series::{
    g_series, g_series_with, series_coefficient, series_peak_log10, SeriesConfig,
};

use core::fmt;

use crate::error::{check_finite, Error, Result};
use crate::math::{exp, ln, pow};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// How a [`GEval`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GMethod {
    /// Extended-precision power series.
    Series,
    /// Tensor-product Gauss-Legendre over the unit cube.
    Cubature,
    /// Riemann triple sum.
    DiscreteRiemann,
    /// Sine-dispersion triple sum.
    DiscreteSineGrid,
    /// Two-term large-β̃ asymptotics.
    Asymptotic,
}

impl GMethod {
    /// Short lowercase name, as used in CSV headers.
    pub fn name(self) -> &'static str {
        match self {
            GMethod::Series => "series",
            GMethod::Cubature => "cubature",
            GMethod::DiscreteRiemann => "discrete_riemann",
            GMethod::DiscreteSineGrid => "discrete_sine_grid",
            GMethod::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for GMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A value of `g(β̃)` with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GEval {
    /// The value.
    pub value: f64,
    /// Route used.
    pub method: GMethod,
    /// Claimed bound on `|value − g(β̃)|`.
    pub err_estimate: f64,
    /// Argument.
    pub beta_tilde: f64,
}

/// Smallest β̃ at which the asymptotic bracket `log(β̃/2) + γ_E − 23/6` is positive.
pub fn asymptotic_threshold() -> f64 {
    2.0 * exp(23.0 / 6.0 - EULER_GAMMA)
}

/// `g(β̃) ≈ (16π/β̃)(log(β̃/2) + γ_E − 23/6)`.
///
/// The error tag is the nominal `β̃^{−3/2}` order of the dropped terms.
pub fn g_asymptotic(beta_tilde: f64) -> Result<GEval> {
    check_finite("beta_tilde", beta_tilde)?;
    let beta = beta_tilde.abs();
    if beta <= asymptotic_threshold() {
        return Err(Error::ParameterDomain {
            name: "beta_tilde",
            value: beta_tilde,
        });
    }
    let value = 16.0 * core::f64::consts::PI / beta * (ln(0.5 * beta) + EULER_GAMMA - 23.0 / 6.0);
    Ok(GEval {
        value,
        method: GMethod::Asymptotic,
        err_estimate: pow(beta, -1.5),
        beta_tilde,
    })
}

/// Method selection for [`g_eval_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GConfig {
    /// Use the series for `|β̃| ≤ series_switch`.
    pub series_switch: f64,
    /// Use the asymptotic form for `|β̃| ≥ asymptotic_switch`; cubature in between.
    pub asymptotic_switch: f64,
    /// Requested digits for the series.
    pub series_digits: u32,
    /// Minimum Gauss-Legendre nodes per axis for the cubature.
    pub cubature_nodes: usize,
}

impl Default for GConfig {
    fn default() -> Self {
        Self {
            series_switch: 40.0,
            asymptotic_switch: f64::INFINITY,
            series_digits: 12,
            cubature_nodes: 96,
        }
    }
}

/// Nodes per axis used by [`g_eval_with`] at a given β̃: the kernel argument
/// spans `[0, β̃/4]`, and the oscillating part needs a few nodes per period.
pub fn cubature_nodes_for(beta_tilde: f64, min_nodes: usize) -> usize {
    let extra = libm::ceil(beta_tilde.abs() / 4.0) as usize;
    min_nodes.max(extra.min(512))
}

/// `g(β̃)` with the default method selection.
pub fn g_eval(beta_tilde: f64) -> Result<GEval> {
    g_eval_with(beta_tilde, &GConfig::default())
}

/// `g(β̃)`, dispatching between series, cubature and asymptotics.
pub fn g_eval_with(beta_tilde: f64, cfg: &GConfig) -> Result<GEval> {
    check_finite("beta_tilde", beta_tilde)?;
    let beta = beta_tilde.abs();
    if beta <= cfg.series_switch {
        g_series(beta_tilde, cfg.series_digits)
    } else if beta >= cfg.asymptotic_switch {
        g_asymptotic(beta_tilde)
    } else {
        g_cubature(beta_tilde, cubature_nodes_for(beta, cfg.cubature_nodes))
    }
}
