use lightcone::fraction_algebra::*;
use lightcone::regularization::*;
use lightcone::spectra::MassSpectrum;
use lightcone::Error;
use num_complex::Complex64;
use std::f64::consts::PI;

use RegularizationModel::{Exponential, HardCutoff};

fn k() -> f64 {
    -1.0 / (16.0 * PI.powi(3))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn factor_values() {
    let v = eval_factor(Exponential, Factor::t(0, 0), 1.0, 1.0, 0.01).unwrap();
    assert!((v - Complex64::new(0.0, -100.0 / (16.0 * PI.powi(3)))).norm() < 1e-14);
    assert!((v.im + 0.201569).abs() < 1e-5);
    let vb = eval_factor(Exponential, Factor::tbar(0, 0), 1.0, 1.0, 0.01).unwrap();
    assert_eq!(vb, v.conj());
    // removable point of the cutoff profile
    let c = eval_factor(HardCutoff, Factor::t(0, 3), 1.0, 1.0, 0.01).unwrap();
    assert!((c - Complex64::new(0.0, -1.0 / (16.0 * PI.powi(3) * 0.01))).norm() < 1e-12);
    // φ moves by s/2 to first order, s = (t − r)/ε = 1e-9 here
    let near = eval_factor(HardCutoff, Factor::t(0, 3), 1.0 + 1e-11, 1.0, 0.01).unwrap();
    assert!((near - c).norm() < 1e-8 * c.norm());
    // the series and the closed form meet where the evaluation switches
    for f in [Factor::t(0, 0), Factor::t(-1, 0)] {
        for s0 in [-0.5, 0.5] {
            let lo = eval_factor(HardCutoff, f, 1.0 + s0 * (1.0 - 1e-13), 1.0, 1.0).unwrap();
            let hi = eval_factor(HardCutoff, f, 1.0 + s0 * (1.0 + 1e-13), 1.0, 1.0).unwrap();
            assert!((lo - hi).norm() < 1e-11 * lo.norm(), "{f:?} at {s0}");
        }
    }
}

#[test]
fn higher_factors_are_rejected() {
    for f in [Factor::t(1, 0), Factor::brace(0, 0), Factor::t(-2, 0)] {
        assert!(matches!(
            eval_factor(Exponential, f, 1.0, 1.0, 0.01),
            Err(Error::UnsupportedFactor(_))
        ));
    }
}

#[test]
fn cutoff_derivative_matches_difference_quotient() {
    // T^(−1) = −(2/r) ∂_t T^(0)
    let (r, eps) = (1.3, 0.02);
    for t in [1.3 + 0.001, 1.3 + 0.05, 1.3 - 0.2] {
        let h = 1e-6;
        let p = eval_factor(HardCutoff, Factor::t(0, 0), t + h, r, eps).unwrap();
        let m = eval_factor(HardCutoff, Factor::t(0, 0), t - h, r, eps).unwrap();
        let d = -(2.0 / r) * (p - m) / (2.0 * h);
        let tm1 = eval_factor(HardCutoff, Factor::t(-1, 0), t, r, eps).unwrap();
        assert!((d - tm1).norm() < 1e-6 * tm1.norm(), "{d} {tm1}");
    }
}

#[test]
fn constant_fraction_integrates_to_window_width() {
    let f = FractionSum::single(SimpleFraction::monomial(vec![Factor::t(0, 0)], vec![Factor::t(0, 0)]));
    let w = weak_eval(Exponential, &f, 1.0, &default_eps_grid(1.0)).unwrap();
    assert!((w.pole_coefficient - 2.0).norm() < 1e-12);
    assert!(w.log_coefficient.norm() < 1e-12);
}

#[test]
fn c1_exponential_matches_analytic_integrals() {
    let c1 = basic_fraction_c1();
    let eps = default_eps_grid(1.0);
    let lit = weak_eval(Exponential, &c1, 1.0, &eps).unwrap();
    let want = 72.0 * k() * k() * (0.5 + 3.0 * PI / 16.0);
    assert!((lit.pole_coefficient - want).norm() < 1e-9 * want.abs());
    assert!(lit.log_coefficient.norm() < 1e-9 * want.abs());
    let whole = weak_eval_with(Exponential, &c1, 1.0, &eps, Window::transversal()).unwrap();
    let want = 27.0 * PI * k() * k();
    assert!((whole.pole_coefficient - want).norm() < 1e-8 * want.abs());
}

#[test]
fn exponential_fractions_are_proportional_pointwise() {
    let cs = encode_basic_fractions();
    for &t in &[0.95, 0.999, 1.0, 1.003, 1.2] {
        let v: Vec<Complex64> = cs
            .iter()
            .map(|c| {
                c.eval(|f| eval_factor(Exponential, f, t, 1.0, 0.01)).unwrap()
            })
            .collect();
        let k3 = 96.0 * PI.powi(3);
        assert!((k3 * v[0] / v[1] - (-0.5)).norm() < 1e-10);
        assert!((k3 * v[2] / v[1] - (-2.0)).norm() < 1e-10);
        assert!((k3 * v[3] / v[1] - 2.0).norm() < 1e-10);
    }
}

#[test]
fn exponential_ratios() {
    let r = default_basic_ratios(Exponential).unwrap();
    assert!(rel(r.r0, -0.5) < 1e-4);
    assert!(rel(r.r2, -2.0) < 1e-4);
    assert!(rel(r.r3, 2.0) < 1e-4);
}

#[test]
fn cutoff_ratios_and_model_spread() {
    let c = default_basic_ratios(HardCutoff).unwrap();
    assert!(rel(c.r0, -0.75) < 1e-3, "{c:?}");
    assert!(rel(c.r2, -3.0) < 1e-3, "{c:?}");
    assert!(rel(c.r3, 3.0) < 1e-3, "{c:?}");
    let e = default_basic_ratios(Exponential).unwrap();
    for (a, b) in [(c.r0, e.r0), (c.r2, e.r2), (c.r3, e.r3)] {
        let q = a / b;
        assert!((2.0 / 3.0..=1.5).contains(&q));
    }
}

#[test]
fn printed_c0_weight_gives_a_different_ratio() {
    let eps = default_eps_grid(1.0);
    let c0 = weak_eval(Exponential, &basic_fraction_c0(C0Weight::Printed), 1.0, &eps).unwrap();
    let c1 = weak_eval(Exponential, &basic_fraction_c1(), 1.0, &eps).unwrap();
    let q = 96.0 * PI.powi(3) * c0.pole_coefficient / c1.pole_coefficient;
    assert!((q - Complex64::new(-7.0 / 6.0, 0.0)).norm() < 1e-9);
}

#[test]
fn pole_coefficients_do_not_depend_on_r_or_grid() {
    let c2 = basic_fraction_c2();
    let base = weak_eval(HardCutoff, &c2, 1.0, &default_eps_grid(1.0)).unwrap();
    for r in [0.5, 2.0] {
        let w = weak_eval(HardCutoff, &c2, r, &default_eps_grid(r)).unwrap();
        assert!((w.pole_coefficient - base.pole_coefficient).norm() < 1e-5 * base.pole_coefficient.norm());
    }
    let g = eps_grid(1e-5, 1e-3, 6).unwrap();
    let ratios_a = basic_ratios(Exponential, 1.0, &g).unwrap();
    let ratios_b = default_basic_ratios(Exponential).unwrap();
    assert!(rel(ratios_a.r0, ratios_b.r0) < 1e-5);
    assert!(rel(ratios_a.r2, ratios_b.r2) < 1e-5);
}

#[test]
fn field_constants_unit_triple() {
    let spec = MassSpectrum::new(vec![1.0, 2.0, 3.0]).unwrap();
    // direct-formula oracle with the exact sigma values
    let s3 = -(8.0 / 3.0) * 2f64.ln() + 4.5 * 3f64.ln();
    let sigma0 = 2.0 * 6f64.ln() - 3.0 * s3;
    let sigma2 = 3.0 * (8.0 * 2f64.ln() + 18.0 * 3f64.ln()) / 14.0 - 3.0 * s3;
    for (model, r0, r2, r3) in [(Exponential, -0.5, -2.0, 2.0), (HardCutoff, -0.75, -3.0, 3.0)] {
        let fc = field_constants(&spec, model).unwrap();
        let c0 = r0 - sigma0;
        let mass_term = r2 * 36.0 + r3 * 14.0 - 2.0 * sigma2 * 14.0;
        assert!(rel(fc.c0, c0) < 1e-3);
        assert!(rel(fc.m2, mass_term / c0) < 1e-3);
        assert!(rel(fc.e2, 12.0 * PI * PI / c0) < 1e-3);
    }
    let fc = field_constants(&spec, Exponential).unwrap();
    assert!(rel(fc.c0, 5.202572) < 1e-5);
    assert!(rel(fc.m2, 12.319) < 1e-4);
    assert!(rel(fc.e(), 4.771) < 1e-3);
    let fc = field_constants(&spec, HardCutoff).unwrap();
    assert!(rel(fc.c0, 4.952572) < 1e-5);
    assert!(rel(fc.m2, 8.499) < 1e-3);
}

#[test]
fn scaling_masses() {
    let a = field_constants(&MassSpectrum::new(vec![1.0, 2.0, 3.0]).unwrap(), Exponential).unwrap();
    let b = field_constants(&MassSpectrum::new(vec![5.0, 10.0, 15.0]).unwrap(), Exponential).unwrap();
    assert!(rel(b.e(), a.e()) < 1e-12);
    assert!(rel(b.m(), 5.0 * a.m()) < 1e-12);
}

#[test]
fn nonpositive_c0_is_reported() {
    let spec = MassSpectrum::new(vec![1.0, 2.0, 3.0]).unwrap();
    let bad = BasicRatios { r0: -100.0, r2: -2.0, r3: 2.0 };
    assert!(matches!(field_constants_with(&spec, bad), Err(Error::NonPositiveC0(_))));
}

#[test]
fn scan_properties() {
    let ratios = default_basic_ratios(Exponential).unwrap();
    let m2: Vec<f64> = (0..20).map(|i| 1.1 + 3.9 * i as f64 / 19.0).collect();
    let m3: Vec<f64> = (0..20).map(|i| 1.2 + 4.8 * i as f64 / 19.0).collect();
    let table = scan_with(ratios, &m2, &m3);
    assert_eq!(table.rows.len(), 400);
    for row in &table.rows {
        if row.error.is_none() {
            assert!(row.m_over_m1.unwrap() > 0.0);
            assert!(row.e.unwrap().is_finite());
        }
    }
    let close = scan_with(ratios, &[1.05], &[1.1]).rows[0].e.unwrap();
    let far = scan_with(ratios, &[3.0], &[5.0]).rows[0].e.unwrap();
    assert!(close > far);

    let single = scan_with(ratios, &[2.0], &[3.0]);
    let fc = field_constants_with(&MassSpectrum::new(vec![1.0, 2.0, 3.0]).unwrap(), ratios).unwrap();
    assert_eq!(single.rows[0].e, Some(fc.e()));
    let fc7 = field_constants_with(&MassSpectrum::new(vec![7.0, 14.0, 21.0]).unwrap(), ratios).unwrap();
    assert!(rel(fc7.e(), fc.e()) < 1e-9);
    assert!(rel(fc7.m() / 7.0, single.rows[0].m_over_m1.unwrap()) < 1e-9);
}
