//! Non-causal convolution kernels `f̂_[0]`, `f̂_[2]`, their spectral
//! representation, and the static vacuum-polarization correction to the
//! Coulomb potential.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{extrapolate_to_zero, integrate_real, integrate_real_breaks, QuadConfig};
use crate::spectra::MassSpectrum;

/// Kernel order; `P0` carries the weight `6(α − α²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KernelOrder {
    P0,
    P2,
}

impl KernelOrder {
    pub fn from_index(p: u32) -> Result<Self> {
        match p {
            0 => Ok(KernelOrder::P0),
            2 => Ok(KernelOrder::P2),
            _ => Err(Error::InvalidArgument(format!("kernel order must be 0 or 2 (got {p})"))),
        }
    }
}

fn check_mass(m: f64) -> Result<()> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidMass(m));
    }
    Ok(())
}

/// Direct quadrature of the Feynman-parameter integral
/// `∫₀¹ w(α) ln|1 − (α − α²) q²/m²| dα`, split at the zeros of the argument.
pub fn fhat_quadrature(m: f64, p: KernelOrder, q2: f64) -> Result<f64> {
    check_mass(m)?;
    let x = q2 / (m * m);
    if x == 0.0 {
        return Ok(0.0);
    }
    let weight = |a: f64| match p {
        KernelOrder::P0 => 6.0 * (a - a * a),
        KernelOrder::P2 => 1.0,
    };
    let cfg = QuadConfig::new(1e-14, 1e-13);
    if x < 4.0 {
        return integrate_real(|a| weight(a) * (1.0 - (a - a * a) * x).ln(), 0.0, 1.0, &cfg);
    }
    // 1 − x(α − α²) = x(α − r)(α − (1 − r)); the roots are break points and
    // distances to them are taken from the substitution below, exactly
    let root = (2.0 / x) / (1.0 + (1.0 - 4.0 / x).sqrt());
    let mut breaks = vec![0.0, root, 0.5, 1.0 - root, 1.0];
    breaks.dedup();
    let is_root = |b: f64| b == root || b == 1.0 - root;
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = b - a;
        // α = a + h(3t² − 2t³) flattens log singularities at both ends
        total += integrate_real(
            |t| {
                let jac = 6.0 * t * (1.0 - t) * h;
                if jac == 0.0 {
                    return 0.0;
                }
                let dl = h * t * t * (3.0 - 2.0 * t);
                let dr = h * (1.0 - t) * (1.0 - t) * (1.0 + 2.0 * t);
                let alpha = a + dl;
                let dist = |r: f64| {
                    if r == a && is_root(a) {
                        dl
                    } else if r == b && is_root(b) {
                        dr
                    } else {
                        (alpha - r).abs()
                    }
                };
                let arg = x * dist(root) * dist(1.0 - root);
                weight(alpha) * arg.ln() * jac
            },
            0.0,
            1.0,
            &cfg,
        )?;
    }
    Ok(total)
}

const SERIES_RADIUS: f64 = 0.25;

fn series(z: f64, p: KernelOrder) -> f64 {
    // coefficients in powers of 4z, built from factorial ratios
    let x = 4.0 * z;
    let mut sum = 0.0;
    let mut xk = 1.0;
    match p {
        KernelOrder::P2 => {
            // (k!)²/(2k+1)!
            let mut r = 1.0;
            for k in 1..80 {
                let kf = k as f64;
                xk *= x;
                r *= kf * kf / ((2.0 * kf) * (2.0 * kf + 1.0));
                let t = xk * r / kf;
                sum += t;
                if t.abs() < 1e-18 * sum.abs() {
                    break;
                }
            }
            -sum
        }
        KernelOrder::P0 => {
            // ((k+1)!)²/(2k+3)!, starting from 1/6 at k = 0
            let mut r = 1.0 / 6.0;
            for k in 1..80 {
                let kf = k as f64;
                xk *= x;
                r *= (kf + 1.0) * (kf + 1.0) / ((2.0 * kf + 2.0) * (2.0 * kf + 3.0));
                let t = xk * r / kf;
                sum += t;
                if t.abs() < 1e-18 * sum.abs() {
                    break;
                }
            }
            -6.0 * sum
        }
    }
}

/// Logarithm with its cut along the negative imaginary axis.
fn log_cut(w: Complex64) -> Complex64 {
    let mut a = w.arg();
    if a <= -PI / 2.0 {
        a += 2.0 * PI;
    }
    Complex64::new(w.norm().ln(), a)
}

fn assemble(z: f64, s: Complex64, bracket: Complex64, p: KernelOrder) -> Complex64 {
    match p {
        KernelOrder::P2 => -2.0 - s / z * bracket,
        KernelOrder::P0 => {
            -(3.0 + 5.0 * z) / (3.0 * z) + (1.0 + z - 2.0 * z * z) / (2.0 * z * s) * bracket
        }
    }
}

/// Boundary value of the closed-form kernel `g_[p]` at `z = q²/(4m²)` from
/// the upper half plane.
pub fn g_closed(z: f64, p: KernelOrder) -> Result<f64> {
    if !z.is_finite() {
        return Err(Error::InvalidArgument(format!("z must be finite (got {z})")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    if z == 1.0 {
        return Ok(match p {
            KernelOrder::P0 => -8.0 / 3.0,
            KernelOrder::P2 => -2.0,
        });
    }
    if z.abs() < SERIES_RADIUS {
        return Ok(series(z, p));
    }
    let v = if z < 0.0 {
        let s = (z * (z - 1.0)).sqrt();
        let l = (1.0 - 2.0 * z + 2.0 * s).ln();
        assemble(z, Complex64::new(s, 0.0), Complex64::new(l, 0.0), p)
    } else if z < 1.0 {
        // z(z−1) + i0·(2z−1): the root flips from +i to −i across z = 1/2
        let root = (z * (1.0 - z)).sqrt();
        let s = if z >= 0.5 {
            Complex64::new(0.0, root)
        } else {
            Complex64::new(0.0, -root)
        };
        let l = log_cut(1.0 - 2.0 * z + 2.0 * s);
        assemble(z, s, l, p)
    } else {
        // log(1 − 2z + 2s) − iπ = −ln(2z − 1 + 2s) on this side of the cut
        let s = (z * (z - 1.0)).sqrt();
        let b = -(2.0 * z - 1.0 + 2.0 * s).ln();
        assemble(z, Complex64::new(s, 0.0), Complex64::new(b, 0.0), p)
    };
    if v.im.abs() > 1e-9 * v.re.abs().max(1.0) {
        return Err(Error::BranchFailure { z, imag: v.im });
    }
    Ok(v.re)
}

/// Closed form of the kernel at `q²` for a fermion of mass `m`.
pub fn fhat_closed(m: f64, p: KernelOrder, q2: f64) -> Result<f64> {
    check_mass(m)?;
    g_closed(q2 / (4.0 * m * m), p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelPoint {
    pub q2: f64,
    pub value: f64,
}

/// Half-widths of the deleted neighbourhood, in units of `|q² − b|`.
const PP_WIDTHS: [f64; 3] = [1e-2, 1e-3, 1e-4];
const TAIL_FACTOR: f64 = 1e8;

/// Right-hand side of `ln|1 − q²/b| = ∫_b^∞ (PP 1/(q² − a) + 1/a) da`.
pub fn spectral_integral(q2: f64, b: f64) -> Result<f64> {
    if !(b > 0.0 && b.is_finite() && q2.is_finite()) {
        return Err(Error::InvalidArgument(format!("need b > 0 and finite q2 (got b = {b}, q2 = {q2})")));
    }
    if q2 == b {
        return Err(Error::InvalidArgument("q2 must differ from b".into()));
    }
    let upper = TAIL_FACTOR * b.max(q2.abs());
    let tail = (1.0 - q2 / upper).abs().ln();
    // a = e^y; the integrand picks up the Jacobian a
    let f = |y: f64| {
        let a = y.exp();
        a / (q2 - a) + 1.0
    };
    let cfg = QuadConfig::new(1e-14, 1e-13);
    let (lo, hi) = (b.ln(), upper.ln());
    if q2 <= b {
        return Ok(integrate_real(f, lo, hi, &cfg)? + tail);
    }
    let scale = (q2 - b).min(q2);
    let mut vals = Vec::new();
    for w in PP_WIDTHS {
        let h = w * scale;
        let left = integrate_real(f, lo, (q2 - h).ln(), &cfg)?;
        let right = integrate_real(f, (q2 + h).ln(), hi, &cfg)?;
        vals.push(Complex64::new(left + right, 0.0));
    }
    Ok(extrapolate_to_zero(&PP_WIDTHS, &vals).re + tail)
}

/// `|ln|1 − q²/b| − ∫_b^∞(…)|`.
pub fn spectral_identity_residual(q2: f64, b: f64) -> Result<f64> {
    let lhs = (1.0 - q2 / b).abs().ln();
    Ok((lhs - spectral_integral(q2, b)?).abs())
}

/// Yukawa potential `−e^{−√a r}/(4πr)`.
pub fn yukawa(a: f64, r: f64) -> f64 {
    -(-a.sqrt() * r).exp() / (4.0 * PI * r)
}

/// `∫ f(a) √(a − 4m²)(a + 2m²) a^{−5/2} da` over `a > 4m²`, computed with
/// `a = 4m²/sin²θ`, which turns the measure into
/// `cos²θ (2 + sin²θ)/sinθ dθ`.
fn spectral_weight_integral<F: FnMut(f64) -> f64>(m: f64, mut f: F) -> Result<f64> {
    let g = |th: f64| {
        let (s, c) = th.sin_cos();
        if s == 0.0 {
            return 0.0;
        }
        let val = f(4.0 * m * m / (s * s));
        if val == 0.0 {
            0.0
        } else {
            c * c * (2.0 + s * s) / s * val
        }
    };
    integrate_real(g, 0.0, PI / 2.0, &QuadConfig::new(1e-300, 1e-12))
}

/// `∫_{4m²}^∞ √(a − 4m²)(a + 2m²) a^{−7/2} da`, which equals `1/(5m²)`.
pub fn uehling_moment(m: f64) -> Result<f64> {
    check_mass(m)?;
    spectral_weight_integral(m, |a| 1.0 / a)
}

/// Static correction to the potential of a point charge `Z` at radius `r`.
pub fn static_correction(spec: &MassSpectrum, z: f64, e2: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("r must be positive (got {r})")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for &m in spec.masses() {
        sum += spectral_weight_integral(m, |a| yukawa(a, r))?;
    }
    Ok(z * e2 * e2 / (12.0 * PI * PI) * sum)
}

/// `Z e⁴/(60π²)·Σ m_β⁻²`.
pub fn uehling_coefficient(spec: &MassSpectrum, z: f64, e2: f64) -> f64 {
    z * e2 * e2 / (60.0 * PI * PI) * spec.masses().iter().map(|m| 1.0 / (m * m)).sum::<f64>()
}

/// `∫ correction(r)·4πr² dr` over `r > 0`, by nested quadrature.
pub fn static_correction_volume_integral(spec: &MassSpectrum, z: f64, e2: f64) -> Result<f64> {
    let m1 = spec.m_min();
    // e^{−2 m₁ r} is below 1e-40 past the last break
    let breaks: Vec<f64> = [0.0, 0.01, 0.1, 0.5, 2.0, 8.0, 25.0, 50.0]
        .iter()
        .map(|x| x / m1)
        .collect();
    let mut err = None;
    let v = integrate_real_breaks(
        |r| {
            if r == 0.0 {
                return 0.0;
            }
            match static_correction(spec, z, e2, r) {
                Ok(c) => 4.0 * PI * r * r * c,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            }
        },
        &breaks,
        &QuadConfig::new(1e-300, 1e-10),
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticProfile {
    pub r: Vec<f64>,
    pub coulomb: Vec<f64>,
    pub correction: Vec<f64>,
}

/// Coulomb potential `−Z e²/(4πr)` alongside the correction on a radius grid.
pub fn static_profile(spec: &MassSpectrum, z: f64, e2: f64, radii: &[f64]) -> Result<StaticProfile> {
    let correction = radii
        .iter()
        .map(|&r| static_correction(spec, z, e2, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(StaticProfile {
        r: radii.to_vec(),
        coulomb: radii.iter().map(|&r| -z * e2 / (4.0 * PI * r)).collect(),
        correction,
    })
}
