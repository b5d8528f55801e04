use std::f64::consts::PI;

use fibercap_core::grid::make_grid;
use fibercap_core::params::{derive_dimensionless, PhysicalChannel};
use fibercap_core::persample::{conditional_pdf, exact_map, PerSampleChannel};
use fibercap_core::perturbative::kernel_k;
use fibercap_core::specfun::{f_kernel, g_series, green0};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #[test]
    fn dimensionless_round_trip(
        beta_tilde in 0.0..2000.0f64,
        gamma_tilde in 1e-4..5.0f64,
        snr_db in 0.0..60.0f64,
    ) {
        let snr = 10f64.powf(snr_db / 10.0);
        let phys = PhysicalChannel::from_dimensionless(beta_tilde, gamma_tilde, snr, 1000.0, 1e11, 5.3e-7).unwrap();
        let d = derive_dimensionless(&phys).unwrap();
        prop_assert!((d.beta_tilde - beta_tilde).abs() <= 1e-9 * beta_tilde.max(1.0));
        prop_assert!((d.gamma_tilde - gamma_tilde).abs() <= 1e-12 * gamma_tilde.max(1.0));
        prop_assert!((d.snr - snr).abs() <= 1e-9 * snr);
        prop_assert!((d.p_ave - d.snr * d.p_noise).abs() <= 1e-12 * d.p_ave);
    }

    #[test]
    fn snr_scales_gamma_tilde_linearly(snr in 1.0..1e5f64, k in 1.0..10.0f64) {
        let a = derive_dimensionless(&PhysicalChannel::typical_link(snr).unwrap()).unwrap();
        let b = derive_dimensionless(&PhysicalChannel::typical_link(k * snr).unwrap()).unwrap();
        prop_assert!((b.gamma_tilde / a.gamma_tilde - k).abs() < 1e-9 * k);
        prop_assert_eq!(a.beta_tilde, b.beta_tilde);
    }

    #[test]
    fn kernel_is_even_and_bounded(mu in -200.0..200.0f64) {
        let f = f_kernel(mu);
        prop_assert_eq!(f, f_kernel(-mu));
        prop_assert!(f > 0.0 && f <= 1.0 + 1e-15);
    }

    #[test]
    fn g_is_even_and_in_unit_interval(beta in 0.0..120.0f64) {
        let g = g_series(beta, 12).unwrap().value;
        prop_assert_eq!(g, g_series(-beta, 12).unwrap().value);
        prop_assert!(g > 0.0 && g <= 1.0);
    }

    #[test]
    fn green_function_symmetric_nonpositive(a in 0.0..=1.0f64, b in 0.0..=1.0f64) {
        let g = green0(a, b).unwrap();
        prop_assert_eq!(g, green0(b, a).unwrap());
        prop_assert!(g <= 0.0);
    }

    #[test]
    fn exact_map_preserves_modulus(re in -50.0..50.0f64, im in -50.0..50.0f64, gl in -1.0..1.0f64) {
        let ch = PerSampleChannel::new(1.0, 1.0, gl).unwrap();
        let x = Complex64::new(re, im);
        prop_assert!((exact_map(x, &ch).norm() - x.norm()).abs() <= 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn pdf_is_phase_covariant(
        xr in -3.0..3.0f64, xi in -3.0..3.0f64,
        dr in -0.5..0.5f64, di in -0.5..0.5f64,
        alpha in -PI..PI,
        gl in 0.0..0.5f64,
    ) {
        let ch = PerSampleChannel::new(4.0, 0.1, gl).unwrap();
        let x = Complex64::new(xr, xi);
        let y = exact_map(x, &ch) + Complex64::new(dr, di);
        let rot = Complex64::from_polar(1.0, alpha);
        let p = conditional_pdf(y, x, &ch);
        let q = conditional_pdf(y * rot, x * rot, &ch);
        prop_assert!(p >= 0.0);
        prop_assert!((p - q).abs() <= 1e-9 * p.max(1e-300));
    }

    #[test]
    fn slot_inverts_signed_index(m in 2usize..40, r in 1usize..5, j in 0usize..200) {
        let g = make_grid(1.0, m, r).unwrap();
        let j = j % g.m_total;
        prop_assert_eq!(g.slot(g.signed_index(j)), j);
    }

    #[test]
    fn kernel_k_tends_to_z_over_l(im in -1e-7..1e-7f64, s in 0.0..1.0f64) {
        let k = kernel_k(Complex64::new(0.0, im), s);
        prop_assert!((k.re - s).abs() < 1e-12);
    }
}
