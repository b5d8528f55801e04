use fibercap::mi::{estimate_mi, inner_bias_check};
use fibercap_core::channels::{nondispersive_penalty, PenaltyQuadrature};
use fibercap_core::persample::{estimate_mi as estimate_mi_serial, MiConfig, OutputSource, PerSampleChannel};

fn small() -> MiConfig {
    MiConfig { n_outer: 2000, n_inner: 1000, ..MiConfig::default() }
}

#[test]
fn parallel_matches_serial_bit_for_bit() {
    let ch = PerSampleChannel::from_snr_gamma_tilde(1e3, 0.5).unwrap();
    let a = estimate_mi(&ch, &small(), 3).unwrap();
    let b = estimate_mi_serial(&ch, &small(), 3).unwrap();
    assert_eq!(a.estimate, b.estimate);
}

#[test]
fn analytic_and_simulated_outputs_agree() {
    let ch = PerSampleChannel::from_snr_gamma_tilde(1e3, 0.5).unwrap();
    let a = estimate_mi(&ch, &small(), 8).unwrap().estimate;
    let cfg = MiConfig { source: OutputSource::Simulated { n_steps: 100 }, ..small() };
    let s = estimate_mi(&ch, &cfg, 9).unwrap().estimate;
    let sigma = (a.std_error.powi(2) + s.std_error.powi(2)).sqrt();
    assert!((a.mean - s.mean).abs() <= 3.0 * sigma, "{a:?} {s:?}");
}

#[test]
fn penalty_is_near_the_closed_form() {
    let ch = PerSampleChannel::from_snr_gamma_tilde(1e3, 0.5).unwrap();
    let r = estimate_mi(&ch, &MiConfig { n_outer: 10_000, n_inner: 2000, ..MiConfig::default() }, 4).unwrap();
    let mc = ch.snr().ln() - r.estimate.mean;
    let formula = nondispersive_penalty(0.5, PenaltyQuadrature::Auto).unwrap();
    let allowed = (0.1 * formula).max(3.0 * r.estimate.std_error);
    assert!((mc - formula).abs() <= allowed, "{mc} vs {formula}");
}

#[test]
fn doubling_inner_samples_barely_moves_the_estimate() {
    let ch = PerSampleChannel::from_snr_gamma_tilde(1e3, 0.5).unwrap();
    let check = inner_bias_check(&ch, &small(), 6).unwrap();
    assert!(check.passed(), "shift {}", check.shift());
}
