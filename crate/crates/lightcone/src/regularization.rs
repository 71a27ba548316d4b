//! Concrete regularization models, weak evaluation of simple fractions across
//! the light cone, the regularization-parameter ratios and the constants of
//! the effective field equation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraction_algebra::{encode_basic_fractions, Factor, FractionSum};
use crate::quad::{extrapolate_to_zero, integrate, QuadConfig};
use crate::spectra::{log_constants, solve_mixing, MassSpectrum};

/// `−1/(16π³)`, the common prefactor of `T^(0)` in both models.
fn kappa() -> f64 {
    -1.0 / (16.0 * PI.powi(3))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegularizationModel {
    /// Exponential factor `e^{−ε|k⁰|}` in momentum space.
    Exponential,
    /// Sharp cutoff at `|k⁰| = 1/ε`.
    HardCutoff,
}

impl RegularizationModel {
    pub fn name(&self) -> &'static str {
        match self {
            RegularizationModel::Exponential => "exp",
            RegularizationModel::HardCutoff => "cutoff",
        }
    }
}

/// Below this `|s|` the cutoff profile is evaluated by its power series.
const CUTOFF_SERIES_RADIUS: f64 = 0.5;
const CUTOFF_SERIES_TERMS: usize = 24;

/// `φ(s) = (1 − e^{−is})/s` and `φ'(s)`.
fn cutoff_profile(s: f64) -> (Complex64, Complex64) {
    let i = Complex64::i();
    if s.abs() < CUTOFF_SERIES_RADIUS {
        // φ(s) = Σ_j c_j s^j with c_j = −(−i)^{j+1}/(j+1)!
        let mut phi = Complex64::new(0.0, 0.0);
        let mut dphi = Complex64::new(0.0, 0.0);
        let mut c = i; // c_0
        let mut sp = 1.0; // s^j
        let mut sp_prev = 0.0; // s^{j−1}
        for j in 0..CUTOFF_SERIES_TERMS {
            phi += c * sp;
            if j > 0 {
                dphi += c * (j as f64) * sp_prev;
            }
            sp_prev = sp;
            sp *= s;
            c *= -i / (j as f64 + 2.0);
        }
        (phi, dphi)
    } else {
        let e = Complex64::new(0.0, -s).exp();
        let phi = (1.0 - e) / s;
        let dphi = (i * s * e - (1.0 - e)) / (s * s);
        (phi, dphi)
    }
}

/// `(T^(0), T^(−1))` of the model at `(t, r, ε)`, unconjugated.
pub fn model_pair(model: RegularizationModel, t: f64, r: f64, eps: f64) -> (Complex64, Complex64) {
    let k = kappa();
    match model {
        RegularizationModel::Exponential => {
            let d = Complex64::new(t - r, -eps);
            let t0 = k / (r * d);
            let tm1 = 2.0 * k / (r * r * d * d);
            (t0, tm1)
        }
        RegularizationModel::HardCutoff => {
            let s = (t - r) / eps;
            let (phi, dphi) = cutoff_profile(s);
            let t0 = k * phi / (r * eps);
            let tm1 = -2.0 * k * dphi / (r * r * eps * eps);
            (t0, tm1)
        }
    }
}

fn check_factor(f: Factor) -> Result<()> {
    if f.is_brace() || !(f.n == 0 || f.n == -1) {
        return Err(Error::UnsupportedFactor(f.to_string()));
    }
    Ok(())
}

fn pick(f: Factor, t0: Complex64, tm1: Complex64) -> Result<Complex64> {
    check_factor(f)?;
    let v = if f.n == 0 { t0 } else { tm1 };
    Ok(if f.conjugated { v.conj() } else { v })
}

/// Value of a single factor. The models replace every `T_[p]` by the same
/// function, so the decoration index does not enter.
pub fn eval_factor(model: RegularizationModel, f: Factor, t: f64, r: f64, eps: f64) -> Result<Complex64> {
    check_factor(f)?;
    if !(r > 0.0 && eps > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need r > 0 and eps > 0 (got r = {r}, eps = {eps})"
        )));
    }
    let (t0, tm1) = model_pair(model, t, r, eps);
    pick(f, t0, tm1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakValue {
    pub pole_coefficient: Complex64,
    pub log_coefficient: Complex64,
    pub fit_residual: f64,
}

/// Integration window across the light cone, in units of `ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    /// `t ∈ [r − ε, r + ε]`.
    Literal,
    /// The whole line across the cone: partial integrals over
    /// `|t − r| ≤ 2πNε` for each `N` in `periods`, extrapolated to `N → ∞`
    /// as a polynomial in `1/N`.
    Transversal { periods: [usize; 4] },
}

impl Window {
    pub fn transversal() -> Self {
        Window::Transversal {
            periods: [16, 32, 64, 128],
        }
    }
}

/// Geometric grid of `points` values between `lo` and `hi` (inclusive).
pub fn eps_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && points >= 2) {
        return Err(Error::InvalidArgument(format!(
            "eps grid needs 0 < lo < hi and at least two points (got {lo}, {hi}, {points})"
        )));
    }
    let q = (hi / lo).ln() / (points - 1) as f64;
    Ok((0..points).map(|k| lo * (q * k as f64).exp()).collect())
}

/// Eight points, `ε/r` from `1e-4` to `1e-2`.
pub fn default_eps_grid(r: f64) -> Vec<f64> {
    eps_grid(1e-4 * r, 1e-2 * r, 8).expect("valid default grid")
}

/// Fit threshold on the relative residual of the `a + b·log(εr)` model.
pub const FIT_THRESHOLD: f64 = 1e-6;

fn fraction_at(f: &FractionSum, model: RegularizationModel, t: f64, r: f64, eps: f64) -> Complex64 {
    let (t0, tm1) = model_pair(model, t, r, eps);
    // factors were validated before integration
    f.eval(|x| pick(x, t0, tm1)).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

fn validate_fraction(f: &FractionSum) -> Result<i32> {
    for term in &f.terms {
        for x in term.numerator().iter().chain(term.denominator()) {
            check_factor(*x)?;
        }
    }
    f.degree()?
        .ok_or_else(|| Error::InvalidArgument("cannot weakly evaluate the zero sum".into()))
}

/// `ε^{L−1}(ir)^L ∫ f dt` over the window, computed in the variable
/// `s = (t − r)/ε`.
fn normalized_integral(
    model: RegularizationModel,
    f: &FractionSum,
    degree: i32,
    r: f64,
    eps: f64,
    window: Window,
) -> Result<Complex64> {
    let norm = eps.powi(degree) * Complex64::new(0.0, r).powi(degree);
    let h = |s: f64| fraction_at(f, model, r + eps * s, r, eps) * norm;
    let scale = h(0.0).norm().max(h(1.0).norm()).max(1e-300);
    let cfg = QuadConfig::new(1e-15 * scale, 1e-12);
    match window {
        Window::Literal => Ok(integrate(h, -1.0, 1.0, &cfg)?.value),
        Window::Transversal { periods } => {
            let nmax = *periods.iter().max().unwrap();
            let p = 2.0 * PI;
            let mut partial = Vec::with_capacity(nmax);
            let mut acc = integrate(h, -p, p, &cfg)?.value;
            partial.push(acc);
            for k in 1..nmax {
                let a = k as f64 * p;
                acc += integrate(h, a, a + p, &cfg)?.value;
                acc += integrate(h, -a - p, -a, &cfg)?.value;
                partial.push(acc);
            }
            let hs: Vec<f64> = periods.iter().map(|&n| 1.0 / n as f64).collect();
            let vals: Vec<Complex64> = periods.iter().map(|&n| partial[n - 1]).collect();
            Ok(extrapolate_to_zero(&hs, &vals))
        }
    }
}

/// Least-squares fit of `E(ε)` against `a + b·log(εr)`.
fn fit_log_linear(xs: &[f64], ys: &[Complex64]) -> Result<WeakValue> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<Complex64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::FitFailure("eps grid has no spread".into()));
    }
    let sxy: Complex64 = xs.iter().zip(ys).map(|(x, y)| (y - my) * (x - mx)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let scale = ys.iter().map(|y| y.norm()).fold(0.0, f64::max).max(1e-300);
    let fit_residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - a - b * x).norm())
        .fold(0.0, f64::max)
        / scale;
    Ok(WeakValue {
        pole_coefficient: a,
        log_coefficient: b,
        fit_residual,
    })
}

/// Weak evaluation with the literal `[r − ε, r + ε]` window.
pub fn weak_eval(model: RegularizationModel, f: &FractionSum, r: f64, eps: &[f64]) -> Result<WeakValue> {
    weak_eval_with(model, f, r, eps, Window::Literal)
}

pub fn weak_eval_with(
    model: RegularizationModel,
    f: &FractionSum,
    r: f64,
    eps: &[f64],
    window: Window,
) -> Result<WeakValue> {
    let degree = validate_fraction(f)?;
    if !(r > 0.0) || eps.len() < 2 || eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidArgument(
            "weak evaluation needs r > 0 and a positive eps grid with at least two points".into(),
        ));
    }
    let ys = eps
        .iter()
        .map(|&e| normalized_integral(model, f, degree, r, e, window))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = eps.iter().map(|e| (e * r).ln()).collect();
    let w = fit_log_linear(&xs, &ys)?;
    if w.fit_residual > FIT_THRESHOLD {
        return Err(Error::FitFailure(format!(
            "relative residual {:e} exceeds {FIT_THRESHOLD:e}",
            w.fit_residual
        )));
    }
    Ok(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasicRatios {
    pub r0: f64,
    pub r2: f64,
    pub r3: f64,
}

/// Imaginary residue tolerated in the ratios before they are declared complex.
pub const RATIO_IMAG_TOL: f64 = 1e-6;

/// `96π³·(c₀/c₁, c₂/c₁, c₃/c₁)` from the transversal weak evaluation.
pub fn basic_ratios(model: RegularizationModel, r: f64, eps: &[f64]) -> Result<BasicRatios> {
    let cs = encode_basic_fractions();
    let vals = cs
        .par_iter()
        .map(|c| weak_eval_with(model, c, r, eps, Window::transversal()))
        .collect::<Result<Vec<_>>>()?;
    let c1 = vals[1].pole_coefficient;
    let k = 96.0 * PI.powi(3);
    let ratio = |c: Complex64| -> Result<f64> {
        let q = k * c / c1;
        if q.im.abs() > RATIO_IMAG_TOL * q.norm().max(1.0) {
            return Err(Error::FitFailure(format!(
                "ratio {q} has a non-negligible imaginary part"
            )));
        }
        Ok(q.re)
    };
    Ok(BasicRatios {
        r0: ratio(vals[0].pole_coefficient)?,
        r2: ratio(vals[2].pole_coefficient)?,
        r3: ratio(vals[3].pole_coefficient)?,
    })
}

pub fn default_basic_ratios(model: RegularizationModel) -> Result<BasicRatios> {
    basic_ratios(model, 1.0, &default_eps_grid(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldConstants {
    pub r0: f64,
    pub r2: f64,
    pub r3: f64,
    pub sigma0: f64,
    pub sigma2: f64,
    #[serde(rename = "C0")]
    pub c0: f64,
    pub mass_term: f64,
    pub e2: f64,
    #[serde(rename = "M2")]
    pub m2: f64,
}

impl FieldConstants {
    pub fn e(&self) -> f64 {
        self.e2.sqrt()
    }

    /// Bosonic mass; `NaN` if `M² < 0`.
    pub fn m(&self) -> f64 {
        self.m2.sqrt()
    }
}

/// Assembles the constants from precomputed ratios.
pub fn field_constants_with(spec: &MassSpectrum, ratios: BasicRatios) -> Result<FieldConstants> {
    let mix = solve_mixing(spec)?;
    let lc = log_constants(spec, &mix)?;
    let c0 = ratios.r0 - lc.sigma0;
    if !(c0 > 0.0) {
        return Err(Error::NonPositiveC0(c0));
    }
    let mass_term = ratios.r2 * spec.sum_m_squared() + ratios.r3 * spec.sum_m2()
        - 2.0 * lc.sigma2 * spec.sum_m2();
    Ok(FieldConstants {
        r0: ratios.r0,
        r2: ratios.r2,
        r3: ratios.r3,
        sigma0: lc.sigma0,
        sigma2: lc.sigma2,
        c0,
        mass_term,
        e2: 12.0 * PI * PI / c0,
        m2: mass_term / c0,
    })
}

pub fn field_constants(spec: &MassSpectrum, model: RegularizationModel) -> Result<FieldConstants> {
    field_constants_with(spec, default_basic_ratios(model)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub m2_over_m1: f64,
    pub m3_over_m1: f64,
    pub e: Option<f64>,
    pub m_over_m1: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub rows: Vec<ScanRow>,
    pub failures: usize,
}

/// One row per `(m₂/m₁, m₃/m₁)` in row-major order with `m₁ = 1`. The masses
/// of each row are sorted before use; the constants are symmetric in them.
pub fn scan_with(ratios: BasicRatios, m2: &[f64], m3: &[f64]) -> ScanTable {
    let grid: Vec<(f64, f64)> = m2
        .iter()
        .flat_map(|&a| m3.iter().map(move |&b| (a, b)))
        .collect();
    let rows: Vec<ScanRow> = grid
        .par_iter()
        .map(|&(a, b)| {
            let res = MassSpectrum::from_unsorted(vec![1.0, a, b])
                .and_then(|spec| field_constants_with(&spec, ratios));
            match res {
                Ok(fc) if fc.m2 >= 0.0 => ScanRow {
                    m2_over_m1: a,
                    m3_over_m1: b,
                    e: Some(fc.e()),
                    m_over_m1: Some(fc.m()),
                    error: None,
                },
                Ok(fc) => ScanRow {
                    m2_over_m1: a,
                    m3_over_m1: b,
                    e: Some(fc.e()),
                    m_over_m1: None,
                    error: Some(format!("negative M^2 = {}", fc.m2)),
                },
                Err(e) => ScanRow {
                    m2_over_m1: a,
                    m3_over_m1: b,
                    e: None,
                    m_over_m1: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let failures = rows.iter().filter(|r| r.error.is_some()).count();
    ScanTable { rows, failures }
}

pub fn scan(model: RegularizationModel, m2: &[f64], m3: &[f64]) -> Result<ScanTable> {
    Ok(scan_with(default_basic_ratios(model)?, m2, m3))
}
