use lightcone::axial::{
    classify, close_polygon, construct, feasibility_bound, smax, smax_oracle, verify_conditions,
    AxialCase, CHECKED_CONDITIONS,
};
use lightcone::gamma::mdot_real;
use lightcone::{Error, MassSpectrum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec123() -> MassSpectrum {
    MassSpectrum::new(vec![1.0, 2.0, 3.0]).unwrap()
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Spacelike `u` with `√(−⟨u,u⟩)` equal to `r`.
fn spacelike(rng: &mut ChaCha8Rng, r: f64) -> [f64; 4] {
    let dir: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let n = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    let rap: f64 = rng.gen_range(-0.8..0.8);
    [r * rap.sinh(), r * rap.cosh() * dir[0] / n, r * rap.cosh() * dir[1] / n, r * rap.cosh() * dir[2] / n]
}

fn timelike(rng: &mut ChaCha8Rng, r: f64) -> [f64; 4] {
    let dir: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let n = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
    let rap: f64 = rng.gen_range(-0.8..0.8);
    [r * rap.cosh(), r * rap.sinh() * dir[0] / n, r * rap.sinh() * dir[1] / n, r * rap.sinh() * dir[2] / n]
}

#[test]
fn smax_for_one_two_three() {
    let s = smax(&spec123()).unwrap();
    assert!((s - 4.5).abs() < 1e-14);
    assert!((feasibility_bound(&spec123()).unwrap() + (4.5f64 / 4.0).powi(2)).abs() < 1e-14);
}

#[test]
fn smax_matches_enumeration() {
    let spec = MassSpectrum::new(vec![1.0, 1.5, 2.0, 5.0]).unwrap();
    let a = smax(&spec).unwrap();
    let b = smax_oracle(&spec).unwrap();
    assert!((a - b).abs() < 1e-12 * b, "{a} vs {b}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn smax_oracle_agrees(raw in prop::collection::vec(0.1f64..10.0, 3..7), scale in 0.1f64..10.0) {
        let spec = match MassSpectrum::from_unsorted(raw) { Ok(s) => s, Err(_) => return Ok(()) };
        let a = smax(&spec).unwrap();
        prop_assert!((a - smax_oracle(&spec).unwrap()).abs() <= 1e-10 * a.max(1.0));
        let b = smax(&spec.scaled(scale).unwrap()).unwrap();
        prop_assert!((b - scale.powi(3) * a).abs() <= 1e-10 * b.max(1.0));
    }
}

#[test]
fn zero_gives_identity() {
    let sol = construct(&spec123(), [0.0; 4]).unwrap();
    assert_eq!(sol.case, AxialCase::Zero);
    assert_eq!(max_abs(&(sol.u_matrix.clone() - DMatrix::identity(12, 12))), 0.0);
    assert!(sol.max_residual() < 1e-14);
}

#[test]
fn classification() {
    assert_eq!(classify(&[1.0, 1.0, 0.0, 0.0]), AxialCase::Null);
    assert_eq!(classify(&[1.0, 0.5, 0.0, 0.0]), AxialCase::Timelike);
    assert_eq!(classify(&[0.5, 1.0, 0.0, 0.0]), AxialCase::Spacelike);
}

#[test]
fn infeasible_spacelike_is_rejected() {
    let err = construct(&spec123(), [0.0, 1.2, 0.0, 0.0]).unwrap_err();
    assert!(matches!(err, Error::Infeasible { .. }), "{err}");
    assert!(construct(&spec123(), [0.0, 1.12, 0.0, 0.0]).is_ok());
}

#[test]
fn random_feasible_u_satisfy_all_conditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spec = spec123();
    let bound = (-feasibility_bound(&spec).unwrap()).sqrt();
    for k in 0..60 {
        let r: f64 = rng.gen_range(0.01..0.99);
        let u = match k % 3 {
            0 => spacelike(&mut rng, r * bound),
            1 => timelike(&mut rng, 2.0 * r),
            _ => {
                let t: f64 = rng.gen_range(0.1..2.0);
                let phi: f64 = rng.gen_range(0.0..6.28);
                [t, t * phi.cos(), t * phi.sin(), 0.0]
            }
        };
        let sol = construct(&spec, u).unwrap();
        for key in CHECKED_CONDITIONS {
            let r = sol.residuals[key];
            assert!(r < 1e-9, "{key} = {r:e} for {u:?} ({:?})", sol.case);
        }
    }
}

#[test]
fn four_generations() {
    let spec = MassSpectrum::new(vec![1.0, 1.5, 2.0, 5.0]).unwrap();
    let bound = (-feasibility_bound(&spec).unwrap()).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for r in [0.1, 0.5, 0.95] {
        let sol = construct(&spec, spacelike(&mut rng, r * bound)).unwrap();
        assert!(sol.max_residual() < 1e-9, "{:?}", sol.residuals);
        let sol = construct(&spec, timelike(&mut rng, r * 10.0)).unwrap();
        assert!(sol.max_residual() < 1e-9, "{:?}", sol.residuals);
    }
}

#[test]
fn cubic_term_carries_the_axial_vector() {
    let sol = construct(&spec123(), [0.0, 0.4, 0.3, 0.0]).unwrap();
    let uu = mdot_real(&sol.u, &sol.u);
    assert!((sol.frak_s - 4.0 * (-uu).sqrt()).abs() < 1e-14);
    let s: f64 = spec123().masses().iter().zip(&sol.d).map(|(m, d)| m.powi(3) * d).sum();
    assert!((s - sol.frak_s).abs() < 1e-12);
    let sd: f64 = sol.d.iter().sum();
    let smd: f64 = spec123().masses().iter().zip(&sol.d).map(|(m, d)| m * d).sum();
    assert!(sd.abs() < 1e-14 && smd.abs() < 1e-14);
    for (t, d) in sol.tau.iter().zip(&sol.d) {
        assert!(d.abs() <= t / 2.0 + 1e-15);
    }
}

#[test]
fn generic_vector_condition_is_diagnostic_only() {
    let sol = construct(&spec123(), [0.5, 0.1, 0.2, 0.0]).unwrap();
    assert!(sol.residuals["slash_xi_generic"] > 1e-6);
    assert!(sol.residuals["slash_xi"] < 1e-10);
}

#[test]
fn corrupted_u_is_detected() {
    let spec = spec123();
    let mut sol = construct(&spec, [0.1, 0.5, 0.2, 0.0]).unwrap();
    sol.u_matrix[(1, 6)] += Complex64::new(1e-3, 0.0);
    let res = verify_conditions(&sol, &spec);
    let worst = CHECKED_CONDITIONS.iter().map(|k| res[*k]).fold(0.0, f64::max);
    assert!(worst > 1e-5, "{res:?}");
}

fn first_order_check(dir: [f64; 4]) {
    let spec = spec123();
    let u_at = |e: f64| {
        let sol = construct(&spec, dir.map(|x| x * e)).unwrap();
        sol.u_matrix - DMatrix::identity(12, 12)
    };
    let mut prev = f64::INFINITY;
    for e in [1e-2, 1e-3, 1e-4] {
        let a = u_at(e);
        let b = u_at(2.0 * e);
        let lin = max_abs(&a);
        let rem = max_abs(&(b - &a * Complex64::new(2.0, 0.0)));
        assert!(lin > 0.1 * e && lin < 100.0 * e, "‖U−1‖ = {lin} at {e}");
        let rel = rem / lin;
        assert!(rel < 50.0 * e, "remainder ratio {rel:e} at {e}");
        assert!(rel < prev || rel < 1e-12, "remainder ratio {rel:e} not decreasing");
        prev = rel;
    }
}

#[test]
fn first_order_spacelike() {
    first_order_check([0.1, 0.6, -0.3, 0.2]);
}

#[test]
fn first_order_timelike() {
    first_order_check([0.9, 0.2, -0.3, 0.1]);
}

#[test]
fn first_order_null() {
    first_order_check([1.0, 0.6, 0.8, 0.0]);
}

#[test]
fn polygon_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 200 {
        let k = rng.gen_range(3..9);
        let rho: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..2.0)).collect();
        let total: f64 = rho.iter().sum();
        let top = rho.iter().cloned().fold(0.0, f64::max);
        if top > total - top {
            assert!(close_polygon(&rho).is_err());
            continue;
        }
        let ang = close_polygon(&rho).unwrap();
        let s: Complex64 = rho.iter().zip(&ang).map(|(r, a)| Complex64::from_polar(*r, *a)).sum();
        assert!(s.norm() < 1e-12, "{s}");
        done += 1;
    }
}
