use lightcone::kernels::*;
use lightcone::spectra::MassSpectrum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use KernelOrder::{P0, P2};

#[test]
fn vanish_at_zero_momentum() {
    for p in [P0, P2] {
        assert_eq!(fhat_closed(1.0, p, 0.0).unwrap(), 0.0);
        assert_eq!(fhat_quadrature(1.0, p, 0.0).unwrap(), 0.0);
    }
}

#[test]
fn cusp_values() {
    // ∫₀¹ ln (1−2α)² dα = −2 and 12∫₀¹(α−α²) ln|1−2α| dα = −8/3
    assert!((fhat_quadrature(1.0, P2, 4.0).unwrap() + 2.0).abs() < 1e-6);
    assert!((fhat_quadrature(1.0, P0, 4.0).unwrap() + 8.0 / 3.0).abs() < 1e-6);
    assert!((fhat_closed(1.0, P2, 4.0).unwrap() + 2.0).abs() < 1e-12);
    assert!((fhat_closed(1.0, P0, 4.0).unwrap() + 8.0 / 3.0).abs() < 1e-12);
    // one-sided limits approach the cusp value like √|z − 1|
    for d in [1e-6, 1e-8, 1e-10] {
        for z in [1.0 - d, 1.0 + d] {
            assert!((g_closed(z, P0).unwrap() + 8.0 / 3.0).abs() < 10.0 * f64::sqrt(d));
            assert!((g_closed(z, P2).unwrap() + 2.0).abs() < 10.0 * f64::sqrt(d));
        }
    }
}

#[test]
fn closed_form_matches_quadrature_off_cusp() {
    for z in [-5.0, -2.0, -0.5, 0.3, 0.9, 1.1, 2.0, 5.0, -0.1, 0.2, 0.6, 50.0] {
        for p in [P0, P2] {
            let a = g_closed(z, p).unwrap();
            let b = fhat_quadrature(1.0, p, 4.0 * z).unwrap();
            assert!((a - b).abs() < 1e-8, "z = {z}, {p:?}: {a} vs {b}");
        }
    }
    // mass dependence enters only through z
    let a = fhat_closed(2.5, P0, 7.0).unwrap();
    let b = fhat_quadrature(2.5, P0, 7.0).unwrap();
    assert!((a - b).abs() < 1e-8);
}

#[test]
fn asymptotics() {
    let q2 = 1e8;
    let v = fhat_closed(1.0, P0, q2).unwrap();
    assert!((v - (-5.0 / 3.0 + q2.ln())).abs() < 1e-3);
    assert!((v - 16.7540).abs() < 1e-3);
    let h = 1e-6;
    let s0 = fhat_closed(1.0, P0, h).unwrap() / h;
    let s2 = fhat_closed(1.0, P2, h).unwrap() / h;
    assert!((s0 + 0.2).abs() < 1e-4);
    assert!((s2 + 1.0 / 6.0).abs() < 1e-4);
    assert!((fhat_closed(1.0, P0, 0.01).unwrap() + 0.002).abs() < 1e-5);
    // slope scales as 1/m²
    let s = fhat_closed(3.0, P0, h).unwrap() / h;
    assert!((s + 0.2 / 9.0).abs() < 1e-4 / 9.0);
}

#[test]
fn kernels_are_nonpositive_below_threshold_with_minimum_at_cusp() {
    for p in [P0, P2] {
        let vals: Vec<f64> = (0..=400)
            .map(|k| fhat_closed(1.0, p, 4.0 * k as f64 / 400.0).unwrap())
            .collect();
        assert!(vals.iter().all(|v| *v <= 0.0));
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        assert_eq!(min, *vals.last().unwrap());
        // and rises again beyond it
        assert!(fhat_closed(1.0, p, 4.4).unwrap() > min);
    }
}

#[test]
fn spectral_identity_examples() {
    assert!(spectral_identity_residual(-3.0, 4.0).unwrap() < 1e-6);
    assert!(spectral_identity_residual(9.0, 4.0).unwrap() < 1e-6);
    assert!(spectral_integral(0.0, 4.0).unwrap().abs() < 1e-7);
}

#[test]
fn spectral_identity_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let b: f64 = rng.gen_range(0.1..20.0);
        let q2: f64 = rng.gen_range(-60.0..60.0);
        if (q2 - b).abs() < 1e-3 {
            continue;
        }
        let r = spectral_identity_residual(q2, b).unwrap();
        assert!(r < 1e-6, "q2 = {q2}, b = {b}: {r}");
    }
}

#[test]
fn yukawa_values() {
    assert!((yukawa(1.0, 1.0) + (-1.0f64).exp() / (4.0 * PI)).abs() < 1e-16);
    assert!((yukawa(1.0, 1.0) + 0.0292764).abs() < 1e-5);
    assert!((yukawa(0.0, 2.0) + 1.0 / (8.0 * PI)).abs() < 1e-16);
    let y = yukawa(4.0, 10.0);
    assert!((y + (-20.0f64).exp() / (40.0 * PI)).abs() < 1e-25);
    assert!((y + 1.64e-11).abs() < 0.01e-11);
}

#[test]
fn moment_is_one_fifth() {
    for m in [1.0, 0.5, 3.0] {
        let v = uehling_moment(m).unwrap();
        assert!((v - 1.0 / (5.0 * m * m)).abs() < 1e-8 / (m * m));
    }
}

#[test]
fn spatial_integral_reproduces_uehling_coefficient() {
    let spec = MassSpectrum::new(vec![1.0, 2.0, 3.0]).unwrap();
    let (z, e2) = (1.0, 1.0);
    let c = uehling_coefficient(&spec, z, e2);
    assert!((c - 1.361111111 / (60.0 * PI * PI)).abs() < 1e-9);
    let v = static_correction_volume_integral(&spec, z, e2).unwrap();
    assert!((v + c).abs() < 1e-5 * c, "{v} vs {}", -c);
}

#[test]
fn correction_is_negative_and_linear_in_charge() {
    let spec = MassSpectrum::new(vec![1.0, 2.0, 3.0]).unwrap();
    for r in [0.01, 0.3, 1.0, 4.0] {
        let a = static_correction(&spec, 1.0, 0.3, r).unwrap();
        assert!(a < 0.0);
        let b = static_correction(&spec, 2.0, 0.3, r).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-14 * a.abs());
    }
    assert_eq!(static_correction(&spec, 0.0, 0.3, 1.0).unwrap(), 0.0);
    let scaled = spec.scaled(2.0).unwrap();
    let ratio = uehling_coefficient(&scaled, 1.0, 1.0) / uehling_coefficient(&spec, 1.0, 1.0);
    assert!((ratio - 0.25).abs() < 1e-14);
}
