use fibercap_core::channels::{
    applicability_bound, crossover_snr, dispersive_se, evaluate, nondispersive_penalty,
    nondispersive_se_exact, nondispersive_se_expansion, ApplicabilityBound, ExpansionOrder,
    PenaltyQuadrature, SeModel,
};
use fibercap_core::params::PhysicalChannel;
use fibercap_core::specfun::g_eval;

#[test]
fn penalty_quadratures_agree() {
    for g in [0.01, 0.1, 0.5, 1.0, 3.0, 10.0] {
        let a = nondispersive_penalty(g, PenaltyQuadrature::Auto).unwrap();
        let b = nondispersive_penalty(g, PenaltyQuadrature::Adaptive(1e-12)).unwrap();
        assert!((a - b).abs() < 1e-9, "γ̃={g}: {a} vs {b}");
    }
    let p1 = nondispersive_penalty(1.0, PenaltyQuadrature::Auto).unwrap();
    assert!((p1 - 0.175_931_757_623_425).abs() < 1e-10);
}

#[test]
fn quartic_expansion_is_closer() {
    for g in [0.05, 0.1, 0.2] {
        let exact = nondispersive_se_exact(1e3, g, PenaltyQuadrature::Auto).unwrap();
        let q2 = nondispersive_se_expansion(1e3, g, ExpansionOrder::Quadratic).unwrap();
        let q4 = nondispersive_se_expansion(1e3, g, ExpansionOrder::Quartic).unwrap();
        assert!((exact - q4).abs() < (exact - q2).abs());
    }
}

#[test]
fn models_never_beat_the_linear_channel() {
    let g = g_eval(200.0).unwrap();
    for snr in [10.0, 1e2, 1e3, 1e4] {
        let gt = 6.943e-4 * snr;
        for m in SeModel::ALL {
            let p = evaluate(m, snr, gt, &g).unwrap();
            assert!(p.se_nats <= (1.0 + snr).ln() + 1e-15, "{m:?}");
        }
        assert!(dispersive_se(snr, gt, 200.0).unwrap() <= snr.ln());
    }
}

#[test]
fn more_dispersion_moves_the_crossover_up() {
    let base = PhysicalChannel::typical_link(1000.0).unwrap();
    let c200 = crossover_snr(&base.with_beta_tilde(200.0).unwrap()).unwrap();
    let c800 = crossover_snr(&base.with_beta_tilde(800.0).unwrap()).unwrap();
    assert!((c200.snr_db - 32.836).abs() < 0.01);
    assert!((c800.snr_db - 36.683).abs() < 0.01);
}

#[test]
fn applicability_bound_calibration() {
    let base = PhysicalChannel::typical_link(1000.0).unwrap();
    let b = applicability_bound(&base.with_beta_tilde(200.0).unwrap(), 0.62).unwrap();
    match b {
        ApplicabilityBound::Bounded { snr_db, .. } => assert!((snr_db - 30.0).abs() < 0.1),
        ApplicabilityBound::Unbounded => panic!("expected a bound"),
    }
    let lin = PhysicalChannel::from_noise_power(base.beta, 0.0, 1000.0, 1e11, 5.3e-7, 1000.0).unwrap();
    assert_eq!(applicability_bound(&lin, 0.62).unwrap(), ApplicabilityBound::Unbounded);
}
