//! TOML run configuration. Every key carries its unit in the name, and every
//! section is optional; missing keys take the defaults below.
//!
//! ```toml
//! [link]
//! beta_ps2_per_km = 20.0
//! gamma_per_w_km = 1.31
//! length_km = 1000.0
//! bandwidth_per_s = 1e11
//! noise_power_mw = 5.3e-4
//! snr_db = 30.0
//! # beta_tilde = 800.0   # rescales beta
//!
//! [sweep]
//! snr_min = 0.0
//! snr_max = 45.0
//! points = 181
//! ```

use std::hash::{DefaultHasher, Hash, Hasher};
use std::path::Path;

use fibercap_core::channels::SeModel;
use fibercap_core::params::{db_to_linear, PhysicalChannel, MILLIWATT, PS2_PER_KM};
use fibercap_core::persample::{MiConfig, OutputSource, PerSampleChannel, DEFAULT_PROPOSAL_SCALE};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::propagate::Scheme;

/// Whole configuration file.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Physical link.
    pub link: LinkConfig,
    /// `gfun` table.
    pub gfun: GfunConfig,
    /// `sweep` table.
    pub sweep: SweepConfig,
    /// `simulate` run.
    pub simulate: SimulateConfig,
    /// `mi-mc` run.
    pub mi: MiSection,
}

/// Link parameters in engineering units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkConfig {
    /// β in ps²/km.
    pub beta_ps2_per_km: f64,
    /// γ in 1/(W·km).
    pub gamma_per_w_km: f64,
    /// L in km.
    pub length_km: f64,
    /// W in 1/s.
    pub bandwidth_per_s: f64,
    /// In-band noise power QLW/2π in mW.
    pub noise_power_mw: f64,
    /// Operating SNR in dB.
    pub snr_db: f64,
    /// If set, β is rescaled to give this β̃.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_tilde: Option<f64>,
}

impl Default for LinkConfig {
    fn default() -> Self {
        Self {
            beta_ps2_per_km: 20.0,
            gamma_per_w_km: 1.31,
            length_km: 1000.0,
            bandwidth_per_s: 1e11,
            noise_power_mw: 5.3e-4,
            snr_db: 30.0,
            beta_tilde: None,
        }
    }
}

impl LinkConfig {
    /// The link as a [`PhysicalChannel`].
    pub fn physical(&self) -> Result<PhysicalChannel> {
        let ch = PhysicalChannel::from_noise_power(
            self.beta_ps2_per_km * PS2_PER_KM,
            self.gamma_per_w_km,
            self.length_km,
            self.bandwidth_per_s,
            self.noise_power_mw * MILLIWATT,
            db_to_linear(self.snr_db),
        )
        .map_err(bad)?;
        match self.beta_tilde {
            Some(b) => ch.with_beta_tilde(b).map_err(bad),
            None => Ok(ch),
        }
    }
}

/// Point spacing of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    /// Evenly spaced values.
    Linear,
    /// Evenly spaced logarithms.
    Log,
}

/// Unit in which an SNR range is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnrUnit {
    /// Decibels.
    Db,
    /// Plain ratio.
    Linear,
}

/// `points` values from `lo` to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, points: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if points == 0 || !lo.is_finite() || !hi.is_finite() || (points > 1 && hi <= lo) {
        return Err(Error::Config(format!(
            "grid needs points ≥ 1 and min < max, got {points} points on [{lo}, {hi}]"
        )));
    }
    if spacing == Spacing::Log && lo <= 0.0 {
        return Err(Error::Config(format!("log grid needs a positive start, got {lo}")));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let step = |i: usize| i as f64 / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match spacing {
            Spacing::Linear => lo + (hi - lo) * step(i),
            Spacing::Log => (lo.ln() + (hi.ln() - lo.ln()) * step(i)).exp(),
        })
        .collect())
}

/// Routes for `g` that `gfun` can tabulate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GfunMethod {
    /// Extended-precision series.
    Series,
    /// Gauss-Legendre cubature.
    Cubature,
    /// Large-β̃ asymptotics.
    Asymptotic,
    /// Riemann triple sum.
    Riemann,
    /// Sine-grid triple sum.
    SineGrid,
}

impl GfunMethod {
    /// CSV column stem.
    pub fn name(self) -> &'static str {
        match self {
            GfunMethod::Series => "series",
            GfunMethod::Cubature => "cubature",
            GfunMethod::Asymptotic => "asymptotic",
            GfunMethod::Riemann => "riemann",
            GfunMethod::SineGrid => "sine_grid",
        }
    }
}

/// `gfun` settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GfunConfig {
    /// Smallest β̃.
    pub beta_min: f64,
    /// Largest β̃.
    pub beta_max: f64,
    /// Number of points.
    pub points: usize,
    /// Spacing.
    pub spacing: Spacing,
    /// Explicit β̃ values; overrides the range when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// Columns to compute.
    pub methods: Vec<GfunMethod>,
    /// Minimum cubature nodes per axis.
    pub cubature_nodes: usize,
    /// Grid size of the discrete sums.
    pub discrete_m: usize,
}

impl Default for GfunConfig {
    fn default() -> Self {
        Self {
            beta_min: 1.0,
            beta_max: 2000.0,
            points: 50,
            spacing: Spacing::Log,
            values: None,
            methods: vec![GfunMethod::Series, GfunMethod::Cubature, GfunMethod::Asymptotic],
            cubature_nodes: 96,
            discrete_m: 64,
        }
    }
}

impl GfunConfig {
    /// β̃ values to tabulate.
    pub fn betas(&self) -> Result<Vec<f64>> {
        let v = match &self.values {
            Some(v) => v.clone(),
            None => grid(self.beta_min, self.beta_max, self.points, self.spacing)?,
        };
        if v.is_empty() || v.iter().any(|b| !b.is_finite()) {
            return Err(Error::Config("gfun needs finite β̃ values".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("gfun needs at least one method".into()));
        }
        Ok(v)
    }
}

/// `sweep` settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Start of the SNR range.
    pub snr_min: f64,
    /// End of the SNR range.
    pub snr_max: f64,
    /// Number of points.
    pub points: usize,
    /// Unit of `snr_min`/`snr_max`.
    pub snr_unit: SnrUnit,
    /// Spacing of the points in that unit.
    pub spacing: Spacing,
    /// Model columns, by name.
    pub models: Vec<String>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            snr_min: 0.0,
            snr_max: 45.0,
            points: 181,
            snr_unit: SnrUnit::Db,
            spacing: Spacing::Linear,
            models: SeModel::ALL.iter().map(|m| m.name().to_string()).collect(),
        }
    }
}

/// Validated sweep: linear SNR values and the models to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Linear SNR values, strictly increasing.
    pub snr: Vec<f64>,
    /// Models, at least one.
    pub models: Vec<SeModel>,
}

impl SweepConfig {
    /// Checks the sweep and resolves it to linear SNR values.
    pub fn spec(&self) -> Result<SweepSpec> {
        let raw = grid(self.snr_min, self.snr_max, self.points, self.spacing)?;
        let snr: Vec<f64> = match self.snr_unit {
            SnrUnit::Db => raw.into_iter().map(db_to_linear).collect(),
            SnrUnit::Linear => raw,
        };
        if snr.iter().any(|s| s.is_nan() || *s <= 0.0) {
            return Err(Error::Config("sweep SNR values must be positive".into()));
        }
        if snr.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("sweep SNR grid must be strictly increasing".into()));
        }
        let models = self
            .models
            .iter()
            .map(|m| {
                SeModel::from_name(m).ok_or_else(|| Error::Config(format!("unknown model `{m}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if models.is_empty() {
            return Err(Error::Config("sweep needs at least one model".into()));
        }
        Ok(SweepSpec { snr, models })
    }
}

/// `simulate` settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    /// Information-bearing bins M.
    pub m_meaning: usize,
    /// Oversampling r = M′/M.
    pub oversampling: usize,
    /// z-steps.
    pub n_steps: usize,
    /// `strang` or `euler`.
    pub scheme: String,
    /// Whether to add noise.
    pub noise: bool,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            m_meaning: 32,
            oversampling: 4,
            n_steps: 2000,
            scheme: "strang".into(),
            noise: true,
        }
    }
}

impl SimulateConfig {
    /// Parsed scheme.
    pub fn scheme(&self) -> Result<Scheme> {
        Scheme::from_name(&self.scheme)
            .ok_or_else(|| Error::Config(format!("unknown scheme `{}`", self.scheme)))
    }
}

/// `mi-mc` settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MiSection {
    /// SNR in dB.
    pub snr_db: f64,
    /// γ̃ = γL·p.
    pub gamma_tilde: f64,
    /// Outer samples.
    pub n_outer: usize,
    /// Inner importance samples.
    pub n_inner: usize,
    /// Proposal width in units of √ql.
    pub proposal_scale: f64,
    /// `analytic` or `simulated`.
    pub source: String,
    /// Steps of the per-sample integrator in `simulated` mode.
    pub n_steps: usize,
}

impl Default for MiSection {
    fn default() -> Self {
        Self {
            snr_db: 30.0,
            gamma_tilde: 0.5,
            n_outer: 10_000,
            n_inner: 10_000,
            proposal_scale: DEFAULT_PROPOSAL_SCALE,
            source: "analytic".into(),
            n_steps: 200,
        }
    }
}

impl MiSection {
    /// Channel and estimator settings.
    pub fn resolve(&self) -> Result<(PerSampleChannel, MiConfig)> {
        let ch = PerSampleChannel::from_snr_gamma_tilde(db_to_linear(self.snr_db), self.gamma_tilde)
            .map_err(bad)?;
        let source = match self.source.as_str() {
            "analytic" => OutputSource::Analytic,
            "simulated" => OutputSource::Simulated {
                n_steps: self.n_steps,
            },
            other => return Err(Error::Config(format!("unknown source `{other}`"))),
        };
        let cfg = MiConfig {
            n_outer: self.n_outer,
            n_inner: self.n_inner,
            proposal_scale: self.proposal_scale,
            source,
            input_phase: 0.0,
        };
        cfg.validate(&ch).map_err(bad)?;
        Ok((ch, cfg))
    }
}

fn bad(e: fibercap_core::Error) -> Error {
    Error::Config(e.to_string())
}

impl Config {
    /// Parses TOML text.
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Reads and parses a file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    /// Canonical TOML of the effective configuration.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Hash of [`Config::to_toml`], recorded in output headers.
    pub fn hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.to_toml().hash(&mut h);
        h.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_reproduce_the_reference_link() {
        let c = Config::default();
        let d = fibercap_core::params::derive_dimensionless(&c.link.physical().unwrap()).unwrap();
        assert!((d.beta_tilde - 200.0).abs() < 1e-9);
        assert!((d.gamma_tilde - 0.6943).abs() < 1e-9);
    }

    #[test]
    fn partial_file_and_round_trip() {
        let c = Config::from_toml("[link]\nbeta_tilde = 800.0\n[sweep]\npoints = 3\n").unwrap();
        assert_eq!(c.link.beta_tilde, Some(800.0));
        assert_eq!(c.sweep.points, 3);
        let again = Config::from_toml(&c.to_toml()).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.hash(), c.hash());
        assert_ne!(Config::default().hash(), c.hash());
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(Config::from_toml("[link]\nbeta = 1.0\n").is_err());
        assert!(Config::from_toml("[gfun]\nmethods = [\"magic\"]\n").is_err());
        let mut s = SweepConfig {
            models: vec!["nope".into()],
            ..SweepConfig::default()
        };
        assert!(s.spec().is_err());
        s = SweepConfig {
            snr_min: 10.0,
            snr_max: 5.0,
            ..SweepConfig::default()
        };
        assert!(s.spec().is_err());
        assert!(grid(0.0, 1.0, 4, Spacing::Log).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(grid(0.0, 1.0, 3, Spacing::Linear).unwrap(), vec![0.0, 0.5, 1.0]);
        let g = grid(1.0, 100.0, 3, Spacing::Log).unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12);
    }
}
