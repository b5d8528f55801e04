use fibercap_core::persample::{
    conditional_covariance, conditional_pdf, estimate_mi, exact_map, rotated_coordinates,
    sample_conditional, MiConfig, PerSampleChannel,
};
use fibercap_core::quadrature::UnitLegendre;
use fibercap_core::rng::realization_rng;
use num_complex::Complex64;

fn normalization(ch: &PerSampleChannel, x: Complex64) -> f64 {
    let c = conditional_covariance(ch, x.norm_sqr());
    let rule = UnitLegendre::new(12);
    let axis = |var: f64| -> Vec<(f64, f64)> {
        let r = 12.0 * var.sqrt();
        let panels = 40;
        let h = 2.0 * r / panels as f64;
        let mut out = Vec::new();
        for p in 0..panels {
            for (t, w) in rule.nodes().iter().zip(rule.weights()) {
                out.push((-r + h * (p as f64 + t), h * w));
            }
        }
        out
    };
    let frame = Complex64::from_polar(1.0, x.arg() + ch.mu(x));
    let mut total = 0.0;
    for (u, wu) in axis(c[0][0]) {
        for (v, wv) in axis(c[1][1]) {
            let y = Complex64::new(x.norm() + u, v) * frame;
            total += wu * wv * conditional_pdf(y, x, ch);
        }
    }
    total
}

#[test]
fn density_is_normalized() {
    for mu in [0.0, 0.5, 1.0, 3.0] {
        let x = Complex64::new(3.0, 4.0);
        let ch = PerSampleChannel::new(25.0, 0.01, mu / 25.0).unwrap();
        let z = normalization(&ch, x);
        assert!((z - 1.0).abs() < 1e-8, "μ={mu}: {z}");
    }
}

#[test]
fn analytic_sampler_has_the_stated_covariance() {
    let ch = PerSampleChannel::new(1.0, 1.0, 2.0).unwrap();
    let x = Complex64::new(0.0, 1.0);
    let n = 200_000;
    let (mut suu, mut suv, mut svv) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let y = sample_conditional(x, &ch, &mut realization_rng(3, i));
        let (u, v) = rotated_coordinates(y, x, &ch);
        suu += u * u;
        suv += u * v;
        svv += v * v;
    }
    let c = conditional_covariance(&ch, 1.0);
    let n = n as f64;
    for (got, want) in [(suu / n, c[0][0]), (suv / n, c[0][1]), (svv / n, c[1][1])] {
        assert!((got - want).abs() < 0.02 * c[1][1], "{got} vs {want}");
    }
}

#[test]
fn noiseless_output_sits_at_the_density_peak() {
    let ch = PerSampleChannel::new(1.0, 0.01, 0.8).unwrap();
    let x = Complex64::new(0.6, -0.3);
    let y0 = exact_map(x, &ch);
    let peak = conditional_pdf(y0, x, &ch);
    for d in [Complex64::new(1e-3, 0.0), Complex64::new(0.0, 1e-3)] {
        assert!(conditional_pdf(y0 + d, x, &ch) < peak);
    }
}

#[test]
fn mi_is_invariant_under_input_phase() {
    let ch = PerSampleChannel::from_snr_gamma_tilde(1e3, 0.5).unwrap();
    let base = MiConfig::default();
    let a = estimate_mi(&ch, &base, 5).unwrap().estimate.mean;
    let b = estimate_mi(&ch, &MiConfig { input_phase: 1.234, ..base }, 5).unwrap().estimate.mean;
    assert!((a - b).abs() < 1e-12, "{a} vs {b}");
}

#[test]
fn linear_channel_mi_is_log_snr() {
    let ch = PerSampleChannel::from_snr_gamma_tilde(100.0, 0.0).unwrap();
    let r = estimate_mi(&ch, &MiConfig::default(), 9).unwrap().estimate;
    let allowed = (3.0 * r.std_error).max((101f64.ln() - 100f64.ln()).abs());
    assert!((r.mean - 100f64.ln()).abs() <= allowed, "{r:?}");
}

#[test]
fn standard_error_halves_with_four_times_the_samples() {
    let ch = PerSampleChannel::from_snr_gamma_tilde(1e3, 0.5).unwrap();
    let small = estimate_mi(&ch, &MiConfig { n_outer: 1000, ..MiConfig::default() }, 2).unwrap();
    let large = estimate_mi(&ch, &MiConfig { n_outer: 4000, ..MiConfig::default() }, 2).unwrap();
    let ratio = small.estimate.std_error / large.estimate.std_error;
    assert!((ratio - 2.0).abs() <= 0.4, "{ratio}");
}
