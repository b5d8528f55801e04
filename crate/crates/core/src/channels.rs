//! Analytic spectral-efficiency models, all in nats per symbol.
//!
//! * Shannon: `log(1 + SNR)`.
//! * Dispersive, first order in `γ̃`: `log SNR − (γ̃²/3)·g(β̃)`.
//! * Zero dispersion, exact in `γ̃`:
//!   `log SNR − ½∫₀^∞ e^{−τ} log(1 + τ²γ̃²/3) dτ`.
//! * Its expansion `log SNR − γ̃²/3 (+ 2γ̃⁴/3)`.
//!
//! The solvers at the bottom sweep a link along its fixed-noise-floor
//! mapping `γ̃(SNR) = γ L P_noise · SNR`.

use crate::error::{check_positive, Error, Result};
use crate::math::{db_to_linear, linear_to_db, ln, ln_1p, sqrt};
use crate::params::{derive_dimensionless, gamma_tilde_per_snr, PhysicalChannel};
use crate::quadrature::{adaptive_kronrod, gauss_laguerre};
use crate::specfun::{g_eval, GEval};

/// Absolute accuracy targeted for the zero-dispersion penalty integral.
pub const PENALTY_TOL: f64 = 1e-9;
/// Default ratio of next to current correction tolerated by
/// [`applicability_bound`]; puts the β̃ = 200 reference link at 30 dB.
pub const DEFAULT_APPLICABILITY_RATIO: f64 = 0.62;
/// Search window for [`crossover_snr`].
pub const CROSSOVER_WINDOW_DB: (f64, f64) = (0.0, 60.0);

const LAGUERRE_NODES: usize = 64;
const LAGUERRE_CHECK_NODES: usize = 48;
const TAIL_CUTOFF: f64 = 80.0;

/// Which model a spectral-efficiency value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeModel {
    /// Linear AWGN channel.
    Shannon,
    /// First-order dispersive result.
    DispersivePerturbative,
    /// Exact zero-dispersion result.
    NondispersiveExact,
    /// Quadratic zero-dispersion expansion.
    NondispersiveExpansion,
}

impl SeModel {
    /// All models, in column order.
    pub const ALL: [SeModel; 4] = [
        SeModel::Shannon,
        SeModel::DispersivePerturbative,
        SeModel::NondispersiveExact,
        SeModel::NondispersiveExpansion,
    ];

    /// Lowercase identifier.
    pub fn name(self) -> &'static str {
        match self {
            SeModel::Shannon => "shannon",
            SeModel::DispersivePerturbative => "dispersive",
            SeModel::NondispersiveExact => "nondispersive_exact",
            SeModel::NondispersiveExpansion => "nondispersive_expansion",
        }
    }

    /// Inverse of [`SeModel::name`].
    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

/// One evaluated point of a spectral-efficiency curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SePoint {
    /// Linear SNR.
    pub snr: f64,
    /// `γ̃` at this SNR.
    pub gamma_tilde: f64,
    /// `β̃` of the link.
    pub beta_tilde: f64,
    /// Spectral efficiency \[nats/symbol\].
    pub se_nats: f64,
    /// Model used.
    pub model: SeModel,
}

/// `log(1 + SNR)`.
pub fn shannon_se(snr: f64) -> f64 {
    ln_1p(snr)
}

/// `(γ̃²/3)·g`.
pub fn dispersive_penalty(gamma_tilde: f64, g: f64) -> f64 {
    gamma_tilde * gamma_tilde * g / 3.0
}

/// `log SNR − (γ̃²/3) g(β̃)` with `g` from [`g_eval`].
pub fn dispersive_se(snr: f64, gamma_tilde: f64, beta_tilde: f64) -> Result<f64> {
    let g = g_eval(beta_tilde)?;
    dispersive_se_with_g(snr, gamma_tilde, &g)
}

/// [`dispersive_se`] with a precomputed `g`.
pub fn dispersive_se_with_g(snr: f64, gamma_tilde: f64, g: &GEval) -> Result<f64> {
    check_positive("snr", snr)?;
    check_gamma(gamma_tilde)?;
    Ok(ln(snr) - dispersive_penalty(gamma_tilde, g.value))
}

fn check_gamma(gamma_tilde: f64) -> Result<f64> {
    if gamma_tilde.is_finite() && gamma_tilde >= 0.0 {
        Ok(gamma_tilde)
    } else {
        Err(Error::ParameterDomain {
            name: "gamma_tilde",
            value: gamma_tilde,
        })
    }
}

/// How to evaluate the zero-dispersion penalty integral.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum PenaltyQuadrature {
    /// Fixed Gauss-Laguerre rule with this many nodes.
    Laguerre(usize),
    /// Adaptive Gauss-Kronrod on a truncated interval, to this tolerance.
    Adaptive(f64),
    /// 64-point Gauss-Laguerre, falling back to adaptive when a 48-point
    /// rule disagrees by more than the target accuracy.
    #[default]
    Auto,
}

/// `½∫₀^∞ e^{−τ} log(1 + τ²γ̃²/3) dτ`.
pub fn nondispersive_penalty(gamma_tilde: f64, quad: PenaltyQuadrature) -> Result<f64> {
    check_gamma(gamma_tilde)?;
    if gamma_tilde == 0.0 {
        return Ok(0.0);
    }
    let a = gamma_tilde * gamma_tilde / 3.0;
    let f = |t: f64| ln_1p(a * t * t);
    let half = |v: f64| 0.5 * v;
    match quad {
        PenaltyQuadrature::Laguerre(n) => Ok(half(gauss_laguerre(n, f))),
        PenaltyQuadrature::Adaptive(tol) => adaptive_penalty(a, tol).map(half),
        PenaltyQuadrature::Auto => {
            let fine = gauss_laguerre(LAGUERRE_NODES, f);
            let coarse = gauss_laguerre(LAGUERRE_CHECK_NODES, f);
            if (fine - coarse).abs() <= 0.1 * PENALTY_TOL {
                Ok(half(fine))
            } else {
                adaptive_penalty(a, 0.1 * PENALTY_TOL).map(half)
            }
        }
    }
}

fn adaptive_penalty(a: f64, tol: f64) -> Result<f64> {
    let g = |t: f64| crate::math::exp(-t) * ln_1p(a * t * t);
    // the kink-free but sharply curved part sits near τ ~ 1/√a
    let knee = (1.0 / sqrt(a)).clamp(1e-6, 1.0);
    let (v1, _) = adaptive_kronrod(g, 0.0, knee, 0.5 * tol, 2000)?;
    let (v2, _) = adaptive_kronrod(g, knee, TAIL_CUTOFF, 0.5 * tol, 2000)?;
    Ok(v1 + v2)
}

/// Exact zero-dispersion spectral efficiency.
pub fn nondispersive_se_exact(snr: f64, gamma_tilde: f64, quad: PenaltyQuadrature) -> Result<f64> {
    check_positive("snr", snr)?;
    Ok(ln(snr) - nondispersive_penalty(gamma_tilde, quad)?)
}

/// Truncation order of [`nondispersive_se_expansion`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExpansionOrder {
    /// `log SNR − γ̃²/3`.
    #[default]
    Quadratic,
    /// Adds the next correction `+2γ̃⁴/3`.
    Quartic,
}

/// Small-`γ̃` expansion of the zero-dispersion result.
pub fn nondispersive_se_expansion(snr: f64, gamma_tilde: f64, order: ExpansionOrder) -> Result<f64> {
    check_positive("snr", snr)?;
    let g2 = gamma_tilde * gamma_tilde;
    let quartic = match order {
        ExpansionOrder::Quadratic => 0.0,
        ExpansionOrder::Quartic => 2.0 * g2 * g2 / 3.0,
    };
    Ok(ln(snr) - g2 / 3.0 + quartic)
}

/// Evaluates one model at one point. `g` is only used by the dispersive model.
pub fn evaluate(model: SeModel, snr: f64, gamma_tilde: f64, g: &GEval) -> Result<SePoint> {
    let se_nats = match model {
        SeModel::Shannon => {
            if snr.is_nan() || snr < 0.0 {
                return Err(Error::ParameterDomain {
                    name: "snr",
                    value: snr,
                });
            }
            shannon_se(snr)
        }
        SeModel::DispersivePerturbative => dispersive_se_with_g(snr, gamma_tilde, g)?,
        SeModel::NondispersiveExact => {
            nondispersive_se_exact(snr, gamma_tilde, PenaltyQuadrature::Auto)?
        }
        SeModel::NondispersiveExpansion => {
            nondispersive_se_expansion(snr, gamma_tilde, ExpansionOrder::Quadratic)?
        }
    };
    Ok(SePoint {
        snr,
        gamma_tilde,
        beta_tilde: g.beta_tilde,
        se_nats,
        model,
    })
}

/// SNR at which the dispersive curve drops below the exact zero-dispersion one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossover {
    /// Linear SNR.
    pub snr: f64,
    /// The same in dB.
    pub snr_db: f64,
}

/// [`crossover_snr_in`] over the default window with 1e-6 dB resolution.
pub fn crossover_snr(phys: &PhysicalChannel) -> Result<Crossover> {
    crossover_snr_in(phys, CROSSOVER_WINDOW_DB.0, CROSSOVER_WINDOW_DB.1, 1e-6)
}

/// Locates the first SNR in `[lo_db, hi_db]` where the dispersive
/// first-order curve stops lying above the exact zero-dispersion curve.
///
/// Both curves share the link's `γ̃(SNR)` mapping. The window is scanned in
/// quarter-dB steps for a sign change, which is then bisected to `tol_db`.
pub fn crossover_snr_in(
    phys: &PhysicalChannel,
    lo_db: f64,
    hi_db: f64,
    tol_db: f64,
) -> Result<Crossover> {
    let slope = gamma_tilde_per_snr(phys)?;
    check_positive("gamma", phys.gamma)?;
    check_positive("tol_db", tol_db)?;
    let beta_tilde = derive_dimensionless(phys)?.beta_tilde;
    let g = g_eval(beta_tilde)?;
    // dispersive − nondispersive; the ln SNR terms cancel
    let gap = |db: f64| -> Result<f64> {
        let gt = slope * db_to_linear(db);
        Ok(nondispersive_penalty(gt, PenaltyQuadrature::Auto)? - dispersive_penalty(gt, g.value))
    };
    let no_crossing = Error::NoCrossing { lo_db, hi_db };
    let step = 0.25;
    let mut a = lo_db;
    let mut fa = gap(a)?;
    let mut bracket = None;
    while a < hi_db {
        let b = (a + step).min(hi_db);
        let fb = gap(b)?;
        if fa > 0.0 && fb <= 0.0 {
            bracket = Some((a, b));
            break;
        }
        a = b;
        fa = fb;
    }
    let (mut a, mut b) = bracket.ok_or(no_crossing)?;
    while b - a > tol_db {
        let m = 0.5 * (a + b);
        if gap(m)? > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let snr_db = 0.5 * (a + b);
    Ok(Crossover {
        snr: db_to_linear(snr_db),
        snr_db,
    })
}

/// Upper SNR limit of the first-order dispersive result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ApplicabilityBound {
    /// The estimate holds up to this SNR.
    Bounded {
        /// Linear SNR.
        snr: f64,
        /// The same in dB.
        snr_db: f64,
    },
    /// No nonlinearity, no bound.
    Unbounded,
}

/// Largest SNR at which the estimated next correction `(g γ̃²)²` stays below
/// `ratio_max` times the first correction `g γ̃²/3`, i.e. `g γ̃² ≤ ratio_max/3`.
pub fn applicability_bound(phys: &PhysicalChannel, ratio_max: f64) -> Result<ApplicabilityBound> {
    if !(ratio_max > 0.0 && ratio_max <= 1.0) {
        return Err(Error::ParameterDomain {
            name: "ratio_max",
            value: ratio_max,
        });
    }
    let slope = gamma_tilde_per_snr(phys)?;
    if slope == 0.0 {
        return Ok(ApplicabilityBound::Unbounded);
    }
    let g = g_eval(derive_dimensionless(phys)?.beta_tilde)?.value;
    let gamma_max = sqrt(ratio_max / (3.0 * g));
    let snr = gamma_max / slope.abs();
    Ok(ApplicabilityBound::Bounded {
        snr,
        snr_db: linear_to_db(snr),
    })
}
