//! Constructive local axial transformation on `g` generations: given a
//! vector `u`, build `U = exp(−i𝔤γ⁵v̸)` whose partial traces leave the
//! vector and linear mass terms unchanged and produce a prescribed axial
//! term `8γ⁵u̸` in the cubic mass term.
//!
//! Matrices on `ℂ^g ⊗ ℂ⁴` use the generation-major layout `4β + s`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{gamma5, identity, kron, mdot_real, slash_real, to_dynamic, M4};
use crate::spectra::MassSpectrum;

type C = Complex64;
type CMat = DMatrix<C>;
type CVec = DVector<C>;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// `(g/4)·max_α (m_g − m_α)(m_α − m₁)(m₁ + m_α + m_g)` over interior `α`.
pub fn smax(spec: &MassSpectrum) -> Result<f64> {
    Ok(best_interior(spec)?.1)
}

fn best_interior(spec: &MassSpectrum) -> Result<(usize, f64)> {
    let g = spec.g();
    if g < 3 {
        return Err(Error::TooFewGenerations { min: 3, got: g });
    }
    let m = spec.masses();
    let (m1, mg) = (m[0], m[g - 1]);
    let mut best = (1, f64::NEG_INFINITY);
    for (a, &ma) in m.iter().enumerate().take(g - 1).skip(1) {
        let v = (mg - ma) * (ma - m1) * (m1 + ma + mg);
        if v > best.1 {
            best = (a, v);
        }
    }
    Ok((best.0, g as f64 / 4.0 * best.1))
}

/// Lower bound on `⟨u,u⟩` for a realizable spacelike `u`: `−(𝔖_max/4)²`.
pub fn feasibility_bound(spec: &MassSpectrum) -> Result<f64> {
    Ok(-(smax(spec)? / 4.0).powi(2))
}

/// Maximum of `Σ m³d` over `Σd = 0`, `Σ m d = 0`, `Σ|d| = g/2` by
/// enumerating all three-index supports and both signs.
pub fn smax_oracle(spec: &MassSpectrum) -> Result<f64> {
    let g = spec.g();
    if g < 3 {
        return Err(Error::TooFewGenerations { min: 3, got: g });
    }
    let m = spec.masses();
    let mut best = f64::NEG_INFINITY;
    for i in 0..g {
        for j in i + 1..g {
            for k in j + 1..g {
                let d = [m[k] - m[j], m[i] - m[k], m[j] - m[i]];
                let l1: f64 = d.iter().map(|x| x.abs()).sum();
                let s: f64 = [i, j, k].iter().zip(&d).map(|(&b, x)| m[b].powi(3) * x).sum();
                let val = (s * g as f64 / (2.0 * l1)).abs();
                best = best.max(val);
            }
        }
    }
    Ok(best)
}

/// Coefficients supported on `{1, α, g}` with `Σd = Σ m d = 0` and
/// `Σ m³d = target`.
fn three_support(spec: &MassSpectrum, target: f64) -> Result<Vec<f64>> {
    let (a, _) = best_interior(spec)?;
    let m = spec.masses();
    let g = spec.g();
    let mut d = vec![0.0; g];
    d[0] = m[g - 1] - m[a];
    d[a] = m[0] - m[g - 1];
    d[g - 1] = m[a] - m[0];
    let s: f64 = m.iter().zip(&d).map(|(m, d)| m.powi(3) * d).sum();
    for x in d.iter_mut() {
        *x *= target / s;
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxialCase {
    Zero,
    Null,
    Timelike,
    Spacelike,
}

/// How the spacelike phases were closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Closure {
    /// Moduli adjusted through `τ`; all phases zero.
    Moduli,
    /// Two opposite small phases on the largest components.
    SmallPhase,
    /// Sorted sign assignment and a final triangle.
    Polygon,
}

#[derive(Debug, Clone)]
pub struct AxialSolution {
    pub case: AxialCase,
    pub u: [f64; 4],
    pub v: [f64; 4],
    /// `Σ m³d`
    pub frak_s: f64,
    pub tau: Vec<f64>,
    pub d: Vec<f64>,
    pub l: CVec,
    pub m: CVec,
    pub n: CVec,
    /// Positive definite (timelike) or unitary (spacelike) `V`.
    pub v_matrix: CMat,
    /// Hermitian generator `𝔤` where it is computed explicitly.
    pub generator: Option<CMat>,
    pub u_matrix: CMat,
    pub closure: Option<Closure>,
    pub residuals: BTreeMap<String, f64>,
}

/// Tolerance for classifying `⟨u,u⟩` as zero, relative to `Σ u_μ²`.
pub const NULL_TOL: f64 = 1e-12;

pub fn classify(u: &[f64; 4]) -> AxialCase {
    let e2: f64 = u.iter().map(|x| x * x).sum();
    if e2 == 0.0 {
        return AxialCase::Zero;
    }
    let uu = mdot_real(u, u);
    if uu.abs() <= NULL_TOL * e2 {
        AxialCase::Null
    } else if uu > 0.0 {
        AxialCase::Timelike
    } else {
        AxialCase::Spacelike
    }
}

fn ones(g: usize) -> CVec {
    CVec::from_element(g, c(1.0))
}

fn diag_pow(spec: &MassSpectrum, k: i32) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(
        spec.g(),
        spec.masses().iter().map(|m| c(m.powi(k))),
    ))
}

/// Applies `f` to the eigenvalues of a Hermitian matrix.
fn hermitian_fn<F: Fn(f64) -> f64>(a: &CMat, f: F) -> CMat {
    let h = (a + a.adjoint()) * c(0.5);
    let eig = h.symmetric_eigen();
    let q = &eig.eigenvectors;
    let fd = CVec::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|&x| c(f(x))));
    q * CMat::from_diagonal(&fd) * q.adjoint()
}

fn min_eigenvalue(a: &CMat) -> f64 {
    let h = (a + a.adjoint()) * c(0.5);
    h.symmetric_eigen().eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Constructs the transformation for `u`.
pub fn construct(spec: &MassSpectrum, u: [f64; 4]) -> Result<AxialSolution> {
    let g = spec.g();
    if g < 3 {
        return Err(Error::TooFewGenerations { min: 3, got: g });
    }
    if u.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("u must be finite".into()));
    }
    let l = ones(g);
    let mut sol = match classify(&u) {
        AxialCase::Zero => AxialSolution {
            case: AxialCase::Zero,
            u,
            v: [0.0; 4],
            frak_s: 0.0,
            tau: vec![1.0; g],
            d: vec![0.0; g],
            l: l.clone(),
            m: l.clone(),
            n: l,
            v_matrix: CMat::identity(g, g),
            generator: Some(CMat::zeros(g, g)),
            u_matrix: CMat::identity(4 * g, 4 * g),
            closure: None,
            residuals: BTreeMap::new(),
        },
        AxialCase::Null => construct_null(spec, u)?,
        AxialCase::Timelike => construct_timelike(spec, u)?,
        AxialCase::Spacelike => construct_spacelike(spec, u)?,
    };
    sol.residuals = verify_conditions(&sol, spec);
    Ok(sol)
}

fn construct_null(spec: &MassSpectrum, u: [f64; 4]) -> Result<AxialSolution> {
    let g = spec.g();
    let d = three_support(spec, 4.0)?;
    let l = ones(g);
    let dv = CVec::from_iterator(g, d.iter().map(|&x| c(x)));
    // 𝔤 = (i/g)(l dᵀ − d lᵀ) is Hermitian with ⟨l|[D_k, 𝔤]|l⟩ = −2iΣ m^k d
    let gen = (&l * dv.transpose() - &dv * l.transpose()) * C::new(0.0, 1.0 / g as f64);
    let g5v = gamma5() * slash_real(&u);
    // (γ⁵u̸)² = 0, so the exponential series stops after the linear term
    let u_matrix = CMat::identity(4 * g, 4 * g) - kron(&gen, &g5v) * C::new(0.0, 1.0);
    Ok(AxialSolution {
        case: AxialCase::Null,
        u,
        v: u,
        frak_s: 4.0,
        tau: vec![1.0; g],
        d,
        l: l.clone(),
        m: l.clone(),
        n: l,
        v_matrix: CMat::identity(g, g),
        generator: Some(gen),
        u_matrix,
        closure: None,
        residuals: BTreeMap::new(),
    })
}

/// `V = Y'(X'†Y')⁻¹Y'† + c zz† + P⊥` with `V l = n`, `V m = l`, written in the
/// difference basis `(l, m − l)` ↦ `(n, l − n)` so that `m, n → l` stays
/// well conditioned.
struct BorderedGram {
    v0: CMat,
    z: CVec,
    complement: CMat,
}

impl BorderedGram {
    fn new(l: &CVec, m: &CVec, n: &CVec) -> Result<Self> {
        let g = l.len();
        let dm = m - l;
        let dn = n - l;
        let sm = dm.norm();
        let sn = dn.norm();
        if sm == 0.0 || sn == 0.0 {
            return Err(Error::Singular("frame vectors coincide".into()));
        }
        let x = CMat::from_columns(&[l.clone(), &dm / c(sm)]);
        let y = CMat::from_columns(&[n.clone(), (-&dn) / c(sm)]);
        let mut xy = x.adjoint() * &y;
        xy = (&xy + xy.adjoint()) * c(0.5);
        let inv = xy
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("bordered Gram block is singular".into()))?;
        if min_eigenvalue(&xy) <= 0.0 {
            return Err(Error::Singular("bordered Gram block is not positive".into()));
        }
        let v0 = &y * inv * y.adjoint();
        let basis = CMat::from_columns(&[l / c(l.norm()), &dm / c(sm), &dn / c(sn)]);
        let q = basis.qr().q();
        let z = q.column(2).into_owned();
        let complement = CMat::identity(g, g) - &q * q.adjoint();
        Ok(BorderedGram { v0, z, complement })
    }

    fn v(&self, cz: f64) -> CMat {
        &self.v0 + &self.z * self.z.adjoint() * c(cz) + &self.complement
    }

    /// `d/dc ‖log V‖²_F / 2 = z† V⁻¹ log V z`.
    fn slope(&self, t: f64) -> f64 {
        let v = self.v(t.exp());
        let f = hermitian_fn(&v, |x| x.ln() / x);
        (self.z.adjoint() * f * &self.z)[(0, 0)].re
    }

    /// The `c > 0` minimizing `‖log V‖_F`, by bisection on the slope in `ln c`.
    fn best_c(&self) -> f64 {
        let (mut lo, mut hi) = (-60.0f64, 60.0f64);
        while self.slope(lo) > 0.0 && lo > -700.0 {
            lo -= 60.0;
        }
        while self.slope(hi) < 0.0 && hi < 700.0 {
            hi += 60.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.slope(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi)).exp()
    }
}

/// Hermitian matrix from `g²` real parameters: diagonal, then real and
/// imaginary parts of the upper triangle.
fn hermitian_from(x: &[f64], g: usize) -> CMat {
    let mut h = CMat::zeros(g, g);
    let mut k = g;
    for i in 0..g {
        h[(i, i)] = c(x[i]);
        for j in i + 1..g {
            let z = C::new(x[k], x[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

/// The three real conditions on `V = e^𝔤` in the timelike case:
/// `⟨n|n⟩ − ⟨m|m⟩`, `Im⟨n|Ym⟩` and `Σ m³d − 𝔖` with `d = Im(n̄m)/2`.
fn timelike_conditions(spec: &MassSpectrum, gen: &CMat, target: f64) -> [f64; 3] {
    let g = spec.g();
    let l = ones(g);
    let n = hermitian_fn(gen, f64::exp) * &l;
    let m = hermitian_fn(gen, |x| (-x).exp()) * &l;
    let mass = spec.masses();
    let mut ym = 0.0;
    let mut s3 = 0.0;
    for b in 0..g {
        let p = n[b].conj() * m[b];
        ym += mass[b] * p.im;
        s3 += mass[b].powi(3) * p.im / 2.0;
    }
    [n.norm_squared() - m.norm_squared(), ym, s3 - target]
}

/// Minimum-norm Newton iteration for `𝔤` starting from `x`; the first step
/// from zero is linear in the target, so the result is analytic in `u`.
fn newton_generator(spec: &MassSpectrum, x: &mut Vec<f64>, target: f64) -> bool {
    let g = spec.g();
    let np = g * g;
    let scale = target.abs().max(spec.sum_m3() * 1e-300);
    let f = |x: &[f64]| timelike_conditions(spec, &hermitian_from(x, g), target);
    let norm = |r: &[f64; 3]| r[0].abs().max(r[1].abs() / spec.m_max()).max(r[2].abs() / spec.sum_m3());
    let mut r = f(x);
    for _ in 0..60 {
        if norm(&r) <= 1e-15 * (1.0 + scale / spec.sum_m3()) {
            return true;
        }
        let h = 1e-7 * (1.0 + x.iter().fold(0.0f64, |a, v| a.max(v.abs())));
        let mut jac = DMatrix::<f64>::zeros(3, np);
        for k in 0..np {
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[k] += h;
            xm[k] -= h;
            let (fp, fm) = (f(&xp), f(&xm));
            for i in 0..3 {
                jac[(i, k)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let rhs = DVector::from_column_slice(&r);
        let step = match jac.svd(true, true).solve(&rhs, 1e-14) {
            Ok(s) => s,
            Err(_) => return false,
        };
        // damped step
        let mut t = 1.0;
        let old = norm(&r);
        loop {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a - t * s).collect();
            let rt = f(&trial);
            if norm(&rt) < old || t < 1e-6 {
                *x = trial;
                r = rt;
                break;
            }
            t *= 0.5;
        }
        if !x.iter().all(|v| v.is_finite()) {
            return false;
        }
    }
    norm(&r) <= 1e-13 * (1.0 + scale / spec.sum_m3())
}

/// Solves for `𝔤` directly, with continuation in `𝔖` if the direct
/// iteration does not converge.
fn timelike_generator(spec: &MassSpectrum, target: f64) -> Option<CMat> {
    let g = spec.g();
    for steps in [1usize, 4, 16, 64] {
        let mut x = vec![0.0; g * g];
        let ok = (1..=steps).all(|k| newton_generator(spec, &mut x, target * k as f64 / steps as f64));
        if ok {
            return Some(hermitian_from(&x, g));
        }
    }
    None
}

fn construct_timelike(spec: &MassSpectrum, u: [f64; 4]) -> Result<AxialSolution> {
    let g = spec.g();
    let norm = mdot_real(&u, &u).sqrt();
    let v = u.map(|x| x / norm);
    let frak_s = 4.0 * norm;
    let l = ones(g);

    let (vm, gen) = match timelike_generator(spec, frak_s) {
        Some(gen) => (hermitian_fn(&gen, f64::exp), gen),
        None => {
            let vm = bordered_gram_v(spec, frak_s)?;
            let gen = hermitian_fn(&vm, f64::ln);
            (vm, gen)
        }
    };
    let vinv = hermitian_fn(&gen, |x| (-x).exp());
    let nv = &vm * &l;
    let mv = &vinv * &l;
    let prod: Vec<C> = (0..g).map(|b| nv[b].conj() * mv[b]).collect();
    let tau = prod.iter().map(|p| p.re).collect();
    let d = prod.iter().map(|p| p.im / 2.0).collect();

    let cosh = (&vm + &vinv) * c(0.5);
    let sinh = (&vm - &vinv) * c(0.5);
    let g5v = gamma5() * slash_real(&v);
    let u_matrix = kron(&cosh, &identity()) - kron(&sinh, &g5v) * C::new(0.0, 1.0);
    Ok(AxialSolution {
        case: AxialCase::Timelike,
        u,
        v,
        frak_s,
        tau,
        d,
        l,
        m: mv,
        n: nv,
        v_matrix: vm,
        generator: Some(gen),
        u_matrix,
        closure: None,
        residuals: BTreeMap::new(),
    })
}

/// Fallback: prescribe `n̄_β m_β = 1 + 2id_β` and build `V` from the
/// bordered Gram matrix on `span{l, m, n}`.
fn bordered_gram_v(spec: &MassSpectrum, frak_s: f64) -> Result<CMat> {
    let g = spec.g();
    let mass = spec.masses();
    let d = three_support(spec, frak_s)?;
    let l = ones(g);
    // m = w with Σ d/w = 0 makes ⟨l|n⟩ real; Cauchy–Schwarz then gives the
    // strict inequality ⟨m|l⟩⟨l|n⟩ > g²
    let dmax = d.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let eta = (2.0 * dmax).min(0.5);
    let mg = spec.m_max();
    let w: Vec<f64> = mass.iter().map(|m| 1.0 / (1.0 + eta * m / mg)).collect();
    let mut mv = CVec::from_iterator(g, w.iter().map(|&x| c(x)));
    let mut nv = CVec::from_iterator(g, w.iter().zip(&d).map(|(&w, &d)| C::new(1.0, -2.0 * d) / w));
    // equal norms by m → λm, n → n/λ
    let lam = (nv.norm() / mv.norm()).sqrt();
    mv *= c(lam);
    nv /= c(lam);
    let bg = BorderedGram::new(&l, &mv, &nv)?;
    Ok(bg.v(bg.best_c()))
}

fn closure_mismatch(tau: &[f64], d: &[f64]) -> f64 {
    tau.iter()
        .zip(d)
        .map(|(t, d)| (t + 2.0 * d).max(0.0).sqrt() - (t - 2.0 * d).max(0.0).sqrt())
        .sum()
}

/// Tries `τ = base + κ e` with `e_β = d_β² − mean(d²)` so that
/// `Σ|n| = Σ|m|` with all phases zero.
fn moduli_closure(base: &[f64], d: &[f64]) -> Option<Vec<f64>> {
    let g = d.len() as f64;
    let mean = d.iter().map(|x| x * x).sum::<f64>() / g;
    let e: Vec<f64> = d.iter().map(|x| x * x - mean).collect();
    let tau_of = |k: f64| -> Vec<f64> { base.iter().zip(&e).map(|(b, e)| b + k * e).collect() };
    let admissible = |t: &[f64]| t.iter().zip(d).all(|(t, d)| *t >= 2.0 * d.abs());
    let r = |k: f64| closure_mismatch(&tau_of(k), d);
    if r(0.0) == 0.0 {
        return Some(base.to_vec());
    }
    // secant iteration from κ = 0, 1
    let (mut k0, mut k1) = (0.0, 1.0);
    let (mut r0, mut r1) = (r(k0), r(k1));
    for _ in 0..60 {
        if r1 == 0.0 || (k1 - k0).abs() < 1e-16 * k1.abs().max(1.0) {
            break;
        }
        if r1 == r0 {
            break;
        }
        let k2 = k1 - r1 * (k1 - k0) / (r1 - r0);
        k0 = k1;
        r0 = r1;
        k1 = k2;
        r1 = r(k1);
    }
    let t = tau_of(k1);
    let scale = d.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1e-300);
    (admissible(&t) && r1.abs() <= 1e-13 * g * scale.max(1.0)).then_some(t)
}

/// Closes `Σ ρ_k e^{iφ_k} = 0` for moduli satisfying the polygon inequality:
/// signs for all but the two largest moduli, then a triangle for those two.
/// Returns the angles in the input order.
pub fn close_polygon(rho: &[f64]) -> Result<Vec<f64>> {
    let k = rho.len();
    if k < 2 {
        return Err(Error::PreconditionViolation("need at least two moduli".into()));
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| rho[a].total_cmp(&rho[b]));
    let a = rho[order[k - 1]];
    let b = rho[order[k - 2]];
    let (lower, upper) = (a - b, a + b);
    let mut angles = vec![0.0; k];
    let mut s = 0.0;
    let mut inside = s >= lower;
    for &idx in &order[..k - 2] {
        let r = rho[idx];
        if !inside {
            s += r;
            inside = s >= lower;
        } else if s + r <= upper {
            s += r;
        } else {
            s -= r;
            angles[idx] = std::f64::consts::PI;
        }
    }
    let slack = 1e-12 * upper.max(1e-300);
    if s < lower - slack || s > upper + slack {
        return Err(Error::PreconditionViolation(format!(
            "moduli violate the polygon inequality (sum {s}, needed [{lower}, {upper}])"
        )));
    }
    // a e^{iφa} + b e^{iφb} = −s
    let (ia, ib) = (order[k - 1], order[k - 2]);
    if s == 0.0 {
        angles[ia] = 0.0;
        angles[ib] = std::f64::consts::PI;
        return Ok(angles);
    }
    let cosx = ((a * a + s * s - b * b) / (2.0 * a * s)).clamp(-1.0, 1.0);
    let phi_a = std::f64::consts::PI + cosx.acos();
    let za = C::from_polar(a, phi_a);
    let zb = c(-s) - za;
    angles[ia] = phi_a;
    angles[ib] = zb.arg();
    Ok(angles)
}

/// Two opposite phases on the two largest moduli that lower their real sum by
/// `excess`; `None` if that needs more than the pair can give.
fn small_phase(rho: &[f64], excess: f64) -> Option<Vec<f64>> {
    let k = rho.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| rho[a].total_cmp(&rho[b]));
    let (ib, ia) = (order[k - 1], order[k - 2]);
    let (ra, rb) = (rho[ia], rho[ib]);
    if ra <= 0.0 || excess > 2.0 * ra {
        return None;
    }
    let target = ra + rb - excess;
    let real = |th: f64| ra * th.cos() + (rb * rb - (ra * th.sin()).powi(2)).max(0.0).sqrt();
    let (mut lo, mut hi) = (0.0f64, std::f64::consts::PI);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if real(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let th = 0.5 * (lo + hi);
    let mut angles = vec![0.0; k];
    angles[ia] = th;
    angles[ib] = -(ra * th.sin() / rb).clamp(-1.0, 1.0).asin();
    Some(angles)
}

/// Unitary map sending unit `a` to unit `b`: a phase on `a` makes `⟨a|b⟩`
/// real and non-negative, followed by the rotation in their plane. Acts as
/// the identity on vectors orthogonal to both.
fn rotation(a: &CVec, b: &CVec) -> CMat {
    let g = a.len();
    let ab = a.dotc(b);
    let theta = if ab.norm() > 0.0 { ab.arg() } else { 0.0 };
    let ph = C::from_polar(1.0, theta);
    let p = CMat::identity(g, g) + a * a.adjoint() * (ph - c(1.0));
    let a2 = a * ph;
    let cr = a2.dotc(b).re;
    let s = &a2 + b;
    let r = CMat::identity(g, g) - &s * s.adjoint() / c(1.0 + cr) + b * a2.adjoint() * c(2.0);
    r * p
}

fn construct_spacelike(spec: &MassSpectrum, u: [f64; 4]) -> Result<AxialSolution> {
    let g = spec.g();
    let gf = g as f64;
    let uu = mdot_real(&u, &u);
    let bound = feasibility_bound(spec)?;
    if uu < bound {
        return Err(Error::Infeasible { uu, bound });
    }
    let norm = (-uu).sqrt();
    let v = u.map(|x| x / norm);
    let frak_s = 4.0 * norm;
    let smax = smax(spec)?;
    let d = three_support(spec, smax)?
        .into_iter()
        .map(|x| x * frak_s / smax)
        .collect::<Vec<_>>();

    let l1: f64 = d.iter().map(|x| x.abs()).sum();
    let base: Vec<f64> = if d.iter().all(|x| x.abs() <= 0.5) {
        vec![1.0; g]
    } else {
        d.iter().map(|x| 2.0 * x.abs() + (gf - 2.0 * l1) / gf).collect()
    };

    let (tau, closure) = match moduli_closure(&base, &d) {
        Some(t) => (t, Closure::Moduli),
        None => (base, Closure::SmallPhase),
    };
    let rn: Vec<f64> = tau.iter().zip(&d).map(|(t, d)| (t + 2.0 * d).max(0.0).sqrt()).collect();
    let rm: Vec<f64> = tau.iter().zip(&d).map(|(t, d)| (t - 2.0 * d).max(0.0).sqrt()).collect();

    // phases making Σ n = Σ conj(m)
    let (pn, pm, closure) = if closure == Closure::Moduli {
        (vec![0.0; g], vec![0.0; g], Closure::Moduli)
    } else {
        let excess = rn.iter().sum::<f64>() - rm.iter().sum::<f64>();
        let attempt = if excess >= 0.0 {
            small_phase(&rn, excess).map(|a| (a, vec![0.0; g]))
        } else {
            small_phase(&rm, -excess).map(|a| (vec![0.0; g], a.iter().map(|x| -x).collect()))
        };
        match attempt {
            Some((a, b)) => (a, b, Closure::SmallPhase),
            None => {
                // n_β and −conj(m_β) as one closed polygon
                let rho: Vec<f64> = rn.iter().chain(&rm).cloned().collect();
                let ang = close_polygon(&rho)?;
                let pn = ang[..g].to_vec();
                // −conj(m) = ρ e^{iφ}  ⇒  m = ρ e^{i(π − φ)}
                let pm = ang[g..].iter().map(|x| std::f64::consts::PI - x).collect();
                (pn, pm, Closure::Polygon)
            }
        }
    };
    let mut nv = CVec::from_iterator(g, rn.iter().zip(&pn).map(|(r, p)| C::from_polar(*r, *p)));
    let mut mv = CVec::from_iterator(g, rm.iter().zip(&pm).map(|(r, p)| C::from_polar(*r, *p)));
    // common phase making ⟨m|n⟩ real and positive
    let mn = mv.dotc(&nv);
    let psi = if mn.norm() > 0.0 { 0.5 * mn.arg() } else { 0.0 };
    mv *= C::from_polar(1.0, psi);
    nv *= C::from_polar(1.0, -psi);

    let l = ones(g);
    let sg = gf.sqrt();
    let lh = &l / c(sg);
    let v1 = rotation(&(&mv / c(sg)), &lh);
    let lt = &v1 * &l;
    let perp = |x: &CVec| x - &lh * lh.dotc(x);
    let (a, b) = (perp(&lt), perp(&nv));
    let v2 = if a.norm() < 1e-14 * sg || b.norm() < 1e-14 * sg {
        CMat::identity(g, g)
    } else {
        rotation(&(&a / c(a.norm())), &(&b / c(b.norm())))
    };
    let vm = v2 * v1;
    let cos = (&vm + vm.adjoint()) * c(0.5);
    let sin = (&vm - vm.adjoint()) * C::new(0.0, -0.5);
    let g5v = gamma5() * slash_real(&v);
    let u_matrix = kron(&cos, &identity()) - kron(&sin, &g5v) * C::new(0.0, 1.0);
    Ok(AxialSolution {
        case: AxialCase::Spacelike,
        u,
        v,
        frak_s,
        tau,
        d,
        l,
        m: mv,
        n: nv,
        v_matrix: vm,
        generator: None,
        u_matrix,
        closure: Some(closure),
        residuals: BTreeMap::new(),
    })
}

/// `Σ_{α,β}` of the 4×4 blocks, i.e. `(l ⊗ 1)† M (l ⊗ 1)`.
pub fn partial_trace(m: &CMat) -> M4 {
    let g = m.nrows() / 4;
    let mut out = M4::zeros();
    for a in 0..g {
        for b in 0..g {
            for i in 0..4 {
                for j in 0..4 {
                    out[(i, j)] += m[(4 * a + i, 4 * b + j)];
                }
            }
        }
    }
    out
}

/// Max-norm of the least-squares remainder of `r` against `basis`, relative
/// to `max(1, ‖r‖)`.
pub fn fit_residual(r: &M4, basis: &[M4]) -> f64 {
    let scale = r.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
    if basis.is_empty() {
        return r.iter().map(|z| z.norm()).fold(0.0, f64::max) / scale;
    }
    let a = CMat::from_fn(16, basis.len(), |k, j| basis[j][(k / 4, k % 4)]);
    let y = CVec::from_fn(16, |k, _| r[(k / 4, k % 4)]);
    let coef = match a.clone().svd(true, true).solve(&y, 1e-13) {
        Ok(x) => x,
        Err(_) => return f64::INFINITY,
    };
    let rem = y - a * coef;
    rem.iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
}

fn frame_family(v: &[f64; 4], case: AxialCase, rng: &mut ChaCha8Rng) -> Vec<[f64; 4]> {
    let vv = mdot_real(v, v);
    let mut out = Vec::new();
    for _ in 0..4 {
        let xi: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let p = match case {
            AxialCase::Null => {
                // project along an auxiliary null w with ⟨v,w⟩ ≠ 0
                let w = [v[0], -v[1], -v[2], -v[3]];
                let vw = mdot_real(v, &w);
                let k = mdot_real(&xi, v) / vw;
                std::array::from_fn(|i| xi[i] - k * w[i])
            }
            AxialCase::Zero => xi,
            _ => {
                let k = mdot_real(&xi, v) / vv;
                std::array::from_fn(|i| xi[i] - k * v[i])
            }
        };
        out.push(p);
    }
    if matches!(case, AxialCase::Timelike | AxialCase::Spacelike | AxialCase::Null) {
        out.push(*v);
    }
    out
}

/// Recomputes every partial-trace condition from `U` alone.
///
/// Keys: `slash_xi` (vector term proportional to `ξ̸` for `ξ ⊥ v` and
/// `ξ = v`), `mass_linear` (linear mass term proportional to the identity),
/// `mass_cubic` (cubic mass term equal to `c·1 + 8γ⁵u̸`), `mass_quadratic`
/// (`m²ÚξY²Ù⁻¹ = c ξ̸ + C iγ⁵⟨ξ,v⟩ − γ⁵[ξ̸,v̸]Σm²d`), and the diagnostic
/// `slash_xi_generic` for ξ with components both along and across `v`.
/// `frame_vectors` and `v_matrix` check `m = V⁻¹l`, `n = Vl` and the
/// positivity or unitarity of `V`.
pub fn verify_conditions(sol: &AxialSolution, spec: &MassSpectrum) -> BTreeMap<String, f64> {
    let g = spec.g();
    let mut res = BTreeMap::new();
    let u = &sol.u_matrix;
    let uinv = match u.clone().try_inverse() {
        Some(x) => x,
        None => {
            res.insert("invertible".into(), f64::INFINITY);
            return res;
        }
    };
    let conj = |a: &CMat| -> M4 { partial_trace(&(u * a * &uinv)) };
    let id4 = identity();
    let g5 = gamma5();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let family = frame_family(&sol.v, sol.case, &mut rng);
    let sum_m2d: f64 = spec.masses().iter().zip(&sol.d).map(|(m, d)| m * m * d).sum();
    let vslash = slash_real(&sol.v);

    let mut cc0 = 0.0f64;
    let mut c6 = 0.0f64;
    for xi in &family {
        let xs = slash_real(xi);
        let r = conj(&kron(&CMat::identity(g, g), &xs));
        cc0 = cc0.max(fit_residual(&r, &[xs]));
        let r2 = conj(&kron(&diag_pow(spec, 2), &xs)) + g5 * (xs * vslash - vslash * xs) * c(sum_m2d);
        let xv = mdot_real(xi, &sol.v);
        let basis = if xv.abs() > 1e-14 {
            vec![xs, g5 * C::new(0.0, xv)]
        } else {
            vec![xs]
        };
        c6 = c6.max(fit_residual(&r2, &basis));
    }
    res.insert("slash_xi".into(), cc0);
    res.insert("mass_quadratic".into(), c6);

    let r1 = conj(&kron(&diag_pow(spec, 1), &id4));
    res.insert("mass_linear".into(), fit_residual(&r1, &[id4]));
    let r3 = conj(&kron(&diag_pow(spec, 3), &id4)) - g5 * slash_real(&sol.u) * c(8.0);
    res.insert("mass_cubic".into(), fit_residual(&r3, &[id4]));

    let mut generic = 0.0f64;
    for _ in 0..4 {
        let xi: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let xs = slash_real(&xi);
        let r = conj(&kron(&CMat::identity(g, g), &xs));
        generic = generic.max(fit_residual(&r, &[xs]));
    }
    res.insert("slash_xi_generic".into(), generic);

    let vm = &sol.v_matrix;
    let fv = match vm.clone().try_inverse() {
        Some(vi) => {
            let e1 = (&vi * &sol.l - &sol.m).camax();
            let e2 = (vm * &sol.l - &sol.n).camax();
            e1.max(e2) / sol.l.camax().max(1.0)
        }
        None => f64::INFINITY,
    };
    res.insert("frame_vectors".into(), fv);
    let vstruct = match sol.case {
        AxialCase::Timelike => {
            let herm = (vm - vm.adjoint()).camax();
            if min_eigenvalue(vm) > 0.0 {
                herm
            } else {
                f64::INFINITY
            }
        }
        AxialCase::Spacelike => (vm.adjoint() * vm - CMat::identity(g, g)).camax(),
        _ => (vm - CMat::identity(g, g)).camax(),
    };
    res.insert("v_matrix".into(), vstruct);
    res
}

/// Conditions that are thresholded; `slash_xi_generic` is informational.
pub const CHECKED_CONDITIONS: [&str; 6] = [
    "slash_xi",
    "mass_linear",
    "mass_cubic",
    "mass_quadratic",
    "frame_vectors",
    "v_matrix",
];

impl AxialSolution {
    /// Largest of the thresholded residuals.
    pub fn max_residual(&self) -> f64 {
        CHECKED_CONDITIONS
            .iter()
            .filter_map(|k| self.residuals.get(*k))
            .cloned()
            .fold(0.0, f64::max)
    }
}

pub fn u_as_dynamic(m: &M4) -> CMat {
    to_dynamic(m)
}
