//! The zero-dispersion channel, one time sample at a time.
//!
//! With `β = 0` every sample evolves on its own: the noiseless solution is the
//! rotation `Y₀ = X e^{iμ}`, `μ = γL|X|²`, and to leading order in the noise
//! the output is Gaussian around it. Writing `u + iv = Y e^{−iφ_X−iμ} − |X|`,
//!
//! ```text
//! P(Y|X) = exp(−[(1+4μ²/3)u² − 2μuv + v²] / (QL(1+μ²/3))) / (πQL √(1+μ²/3))
//! cov(u, v) = (QL/2) [[1, μ], [μ, 1+4μ²/3]]
//! ```
//!
//! Powers are per sample, so `p = E|X|²` and `ql` is the noise variance
//! accumulated over the span.
//!
//! [`mi_contribution`] computes one term of the mutual-information average.
//! The output density `P(Y) = E_X P(Y|X)` is estimated by importance sampling
//! around the inverse map `X̂ = |Y| e^{i(φ_Y − γL|Y|²)}`, which is where the
//! posterior concentrates at large SNR.

use core::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{check_positive, Error, Result};
use crate::math::{exp, ln, sqrt};
use crate::rng::{derive_seed, realization_rng};

/// Default proposal width, in units of `√ql` per quadrature.
pub const DEFAULT_PROPOSAL_SCALE: f64 = 3.0;

/// Minimum number of integration steps for [`simulate_sample`].
pub const MIN_STEPS: usize = 100;

/// Below this fraction of `n_inner` the effective sample size counts as degenerate.
pub const ESS_WARN_FRACTION: f64 = 0.1;

/// Scalar channel for one time sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerSampleChannel {
    /// Mean input power `E|X|²`.
    pub p: f64,
    /// Accumulated noise variance.
    pub ql: f64,
    /// `γL`.
    pub gamma_l: f64,
}

impl PerSampleChannel {
    /// Checked constructor; `p` and `ql` must be positive.
    pub fn new(p: f64, ql: f64, gamma_l: f64) -> Result<Self> {
        check_positive("p", p)?;
        check_positive("ql", ql)?;
        if !gamma_l.is_finite() {
            return Err(Error::ParameterDomain {
                name: "gamma_l",
                value: gamma_l,
            });
        }
        Ok(Self { p, ql, gamma_l })
    }

    /// Channel with `ql = 1` at the given SNR and `γ̃`.
    pub fn from_snr_gamma_tilde(snr: f64, gamma_tilde: f64) -> Result<Self> {
        check_positive("snr", snr)?;
        Self::new(snr, 1.0, gamma_tilde / snr)
    }

    /// `p/ql`.
    pub fn snr(&self) -> f64 {
        self.p / self.ql
    }

    /// `γ̃ = γL·p`.
    pub fn gamma_tilde(&self) -> f64 {
        self.gamma_l * self.p
    }

    /// Nonlinear phase `μ = γL|x|²` of input `x`.
    pub fn mu(&self, x: Complex64) -> f64 {
        self.gamma_l * x.norm_sqr()
    }
}

/// Mean of a Monte-Carlo average with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MCEstimate {
    /// Sample mean.
    pub mean: f64,
    /// Sample standard deviation over `√n_samples`.
    pub std_error: f64,
    /// Number of samples.
    pub n_samples: u64,
}

impl MCEstimate {
    /// Estimate from a slice of samples.
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                std_error: f64::NAN,
                n_samples: 0,
            };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            mean,
            std_error: sqrt(var / n as f64),
            n_samples: n as u64,
        }
    }
}

/// Noiseless output `x e^{iγL|x|²}`.
pub fn exact_map(x: Complex64, ch: &PerSampleChannel) -> Complex64 {
    x * Complex64::from_polar(1.0, ch.mu(x))
}

/// Rotated coordinates `(u, v)` of output `y` relative to input `x`.
pub fn rotated_coordinates(y: Complex64, x: Complex64, ch: &PerSampleChannel) -> (f64, f64) {
    let r = x.norm();
    let phase = if r > 0.0 { x.arg() } else { 0.0 };
    let z = y * Complex64::from_polar(1.0, -phase - ch.mu(x)) - r;
    (z.re, z.im)
}

/// `ln P(y|x)`.
pub fn ln_conditional_pdf(y: Complex64, x: Complex64, ch: &PerSampleChannel) -> f64 {
    let mu = ch.mu(x);
    let (u, v) = rotated_coordinates(y, x, ch);
    let d = 1.0 + mu * mu / 3.0;
    let q = (1.0 + 4.0 * mu * mu / 3.0) * u * u - 2.0 * mu * u * v + v * v;
    -q / (ch.ql * d) - ln(PI * ch.ql * sqrt(d))
}

/// Conditional density `P(y|x)` with respect to `d²y`.
pub fn conditional_pdf(y: Complex64, x: Complex64, ch: &PerSampleChannel) -> f64 {
    exp(ln_conditional_pdf(y, x, ch))
}

/// Covariance `[[σ_uu, σ_uv], [σ_uv, σ_vv]]` of `(u, v)` for input modulus² `|x|²`.
pub fn conditional_covariance(ch: &PerSampleChannel, x_abs2: f64) -> [[f64; 2]; 2] {
    let mu = ch.gamma_l * x_abs2;
    let h = 0.5 * ch.ql;
    [[h, h * mu], [h * mu, h * (1.0 + 4.0 * mu * mu / 3.0)]]
}

/// Draws `Y` from [`conditional_pdf`] via its Cholesky factor.
pub fn sample_conditional<R: Rng + ?Sized>(
    x: Complex64,
    ch: &PerSampleChannel,
    rng: &mut R,
) -> Complex64 {
    let mu = ch.mu(x);
    let s = sqrt(0.5 * ch.ql);
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    let u = s * a;
    let v = s * (mu * a + sqrt(1.0 + mu * mu / 3.0) * b);
    let r = x.norm();
    let phase = if r > 0.0 { x.arg() } else { 0.0 };
    Complex64::new(r + u, v) * Complex64::from_polar(1.0, phase + mu)
}

/// Integrates `dψ = iγ|ψ|²ψ dz + dη` over the span by exact-rotation
/// splitting: half rotation, noise kick of variance `ql/n_steps`, half rotation.
pub fn simulate_sample<R: Rng + ?Sized>(
    x: Complex64,
    ch: &PerSampleChannel,
    n_steps: usize,
    rng: &mut R,
) -> Result<Complex64> {
    if n_steps < MIN_STEPS {
        return Err(Error::ParameterDomain {
            name: "n_steps",
            value: n_steps as f64,
        });
    }
    let half = 0.5 * ch.gamma_l / n_steps as f64;
    let sigma = sqrt(0.5 * ch.ql / n_steps as f64);
    let mut psi = x;
    for _ in 0..n_steps {
        psi *= Complex64::from_polar(1.0, half * psi.norm_sqr());
        let a: f64 = StandardNormal.sample(rng);
        let b: f64 = StandardNormal.sample(rng);
        psi += Complex64::new(sigma * a, sigma * b);
        psi *= Complex64::from_polar(1.0, half * psi.norm_sqr());
    }
    Ok(psi)
}

/// Where the output samples of the MI estimator come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputSource {
    /// Drawn from [`conditional_pdf`].
    Analytic,
    /// Produced by [`simulate_sample`] with the given number of steps.
    Simulated {
        /// Integration steps.
        n_steps: usize,
    },
}

/// Settings for the mutual-information estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiConfig {
    /// Number of `(X, Y)` pairs averaged.
    pub n_outer: usize,
    /// Importance samples per output density estimate.
    pub n_inner: usize,
    /// Proposal width in units of `√ql`.
    pub proposal_scale: f64,
    /// How `Y` is generated.
    pub source: OutputSource,
    /// Global phase added to every input.
    pub input_phase: f64,
}

impl Default for MiConfig {
    fn default() -> Self {
        Self {
            n_outer: 1000,
            n_inner: 1000,
            proposal_scale: DEFAULT_PROPOSAL_SCALE,
            source: OutputSource::Analytic,
            input_phase: 0.0,
        }
    }
}

impl MiConfig {
    /// Checks the estimator's preconditions against `ch`.
    pub fn validate(&self, ch: &PerSampleChannel) -> Result<()> {
        if self.n_outer < 1000 {
            return Err(Error::ParameterDomain {
                name: "n_outer",
                value: self.n_outer as f64,
            });
        }
        if self.n_inner < 1000 {
            return Err(Error::ParameterDomain {
                name: "n_inner",
                value: self.n_inner as f64,
            });
        }
        check_positive("proposal_scale", self.proposal_scale)?;
        if ch.snr() < 100.0 {
            return Err(Error::ParameterDomain {
                name: "snr",
                value: ch.snr(),
            });
        }
        if let OutputSource::Simulated { n_steps } = self.source {
            if n_steps < MIN_STEPS {
                return Err(Error::ParameterDomain {
                    name: "n_steps",
                    value: n_steps as f64,
                });
            }
        }
        Ok(())
    }
}

/// One outer term of the MI average.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiContribution {
    /// `ln P(Y|X) − ln P̂(Y)` in nats.
    pub value: f64,
    /// Effective sample size of the importance weights.
    pub ess: f64,
}

/// Aggregated estimator output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiReport {
    /// Mutual information in nats per sample.
    pub estimate: MCEstimate,
    /// Smallest effective sample size seen.
    pub min_ess: f64,
    /// Outer samples whose ESS fell below `ESS_WARN_FRACTION · n_inner`.
    pub degenerate: u64,
}

impl MiReport {
    /// Collects contributions, in order.
    pub fn from_contributions(parts: &[MiContribution], n_inner: usize) -> Self {
        let values: alloc::vec::Vec<f64> = parts.iter().map(|c| c.value).collect();
        let limit = ESS_WARN_FRACTION * n_inner as f64;
        Self {
            estimate: MCEstimate::from_samples(&values),
            min_ess: parts.iter().map(|c| c.ess).fold(f64::INFINITY, f64::min),
            degenerate: parts.iter().filter(|c| c.ess < limit).count() as u64,
        }
    }

    /// Whether any outer sample had a degenerate proposal.
    pub fn has_degenerate_proposal(&self) -> bool {
        self.degenerate > 0
    }
}

fn circular_gaussian<R: Rng + ?Sized>(var: f64, rng: &mut R) -> Complex64 {
    let s = sqrt(0.5 * var);
    let a: f64 = StandardNormal.sample(rng);
    let b: f64 = StandardNormal.sample(rng);
    Complex64::new(s * a, s * b)
}

/// `ln P̂(y)` and the ESS of its importance weights.
pub fn ln_output_density<R: Rng + ?Sized>(
    y: Complex64,
    ch: &PerSampleChannel,
    n_inner: usize,
    proposal_scale: f64,
    rng: &mut R,
) -> (f64, f64) {
    let r = y.norm();
    let phase = if r > 0.0 { y.arg() } else { 0.0 };
    let centre_phase = phase - ch.gamma_l * r * r;
    let centre = Complex64::from_polar(r, centre_phase);
    // proposal noise is drawn in the frame of the centre, so a global phase
    // rotation of the problem rotates every inner sample with it
    let frame = Complex64::from_polar(1.0, centre_phase);
    let s2 = proposal_scale * proposal_scale * ch.ql;
    let ln_q_norm = -ln(2.0 * PI * s2);
    let ln_prior_norm = -ln(PI * ch.p);

    let mut max = f64::NEG_INFINITY;
    let mut lw = alloc::vec::Vec::with_capacity(n_inner);
    for _ in 0..n_inner {
        let xi = circular_gaussian(2.0 * s2, rng);
        let xp = centre + frame * xi;
        let ln_q = ln_q_norm - xi.norm_sqr() / (2.0 * s2);
        let ln_prior = ln_prior_norm - xp.norm_sqr() / ch.p;
        let l = ln_conditional_pdf(y, xp, ch) + ln_prior - ln_q;
        max = max.max(l);
        lw.push(l);
    }
    let (mut s1, mut s2w) = (0.0, 0.0);
    for l in &lw {
        let w = exp(l - max);
        s1 += w;
        s2w += w * w;
    }
    (max + ln(s1 / n_inner as f64), s1 * s1 / s2w)
}

/// Outer term `index` of the MI average, drawn from its own random stream.
pub fn mi_contribution(
    ch: &PerSampleChannel,
    cfg: &MiConfig,
    seed: u64,
    index: u64,
) -> Result<MiContribution> {
    let mut rng = realization_rng(seed, index);
    let x = circular_gaussian(ch.p, &mut rng) * Complex64::from_polar(1.0, cfg.input_phase);
    let y = match cfg.source {
        OutputSource::Analytic => sample_conditional(x, ch, &mut rng),
        OutputSource::Simulated { n_steps } => simulate_sample(x, ch, n_steps, &mut rng)?,
    };
    let mut inner = realization_rng(derive_seed(seed, 1), index);
    let (ln_py, ess) = ln_output_density(y, ch, cfg.n_inner, cfg.proposal_scale, &mut inner);
    Ok(MiContribution {
        value: ln_conditional_pdf(y, x, ch) - ln_py,
        ess,
    })
}

/// Single-threaded mutual-information estimate in nats per sample.
pub fn estimate_mi(ch: &PerSampleChannel, cfg: &MiConfig, seed: u64) -> Result<MiReport> {
    cfg.validate(ch)?;
    let parts = (0..cfg.n_outer as u64)
        .map(|i| mi_contribution(ch, cfg, seed, i))
        .collect::<Result<alloc::vec::Vec<_>>>()?;
    Ok(MiReport::from_contributions(&parts, cfg.n_inner))
}
