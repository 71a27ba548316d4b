//! Spectral analysis of 4×4 closed chains and the vacuum surrogate in which
//! `ξ`, `ξ̄`, `z`, `z̄` and the factors `T` are independent complex data.

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::{chiral_projectors, identity, max_norm4, mdot, slash, spin_adjoint, M4};
use crate::regularization::FieldConstants;

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Tolerance of the `A = γ⁰A†γ⁰` gate.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: [C; 4],
    /// `pairing[k]` is the index whose conjugate is matched with `λ_k`.
    pub pairing: [usize; 4],
    pub max_distance: f64,
}

/// Eigenvalues of a 4×4 complex matrix from its complex Schur form.
pub fn eigenvalues4(a: &M4) -> Result<[C; 4]> {
    let ev = a
        .clone_owned()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Singular("Schur decomposition did not triangularize".into()))?;
    Ok([ev[0], ev[1], ev[2], ev[3]])
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| (0..4).filter(|&j| p[j] == i).count() == 1) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Matches `λ_k` with `conj(λ_{π(k)})` over all permutations minimizing the
/// largest distance.
pub fn conjugate_pairing(a: &M4, tol: f64) -> Result<SpectrumReport> {
    let asym = max_norm4(&(a - spin_adjoint(a)));
    if asym > tol.max(SYMMETRY_TOL) * max_norm4(a).max(1.0) {
        return Err(Error::PreconditionViolation(format!(
            "matrix is not symmetric with respect to the spin scalar product (defect {asym:e})"
        )));
    }
    let ev = eigenvalues4(a)?;
    let mut best = ([0, 1, 2, 3], f64::INFINITY);
    for p in permutations4() {
        let dist = (0..4).map(|k| (ev[k] - ev[p[k]].conj()).norm()).fold(0.0, f64::max);
        if dist < best.1 {
            best = (p, dist);
        }
    }
    Ok(SpectrumReport {
        eigenvalues: ev,
        pairing: best.0,
        max_distance: best.1,
    })
}

/// Coefficients `c₀ … c₄` of `det(λ − M) = Σ c_k λ^{4−k}` by Faddeev–LeVerrier.
pub fn char_poly(m: &M4) -> [C; 5] {
    let mut coef = [C::new(0.0, 0.0); 5];
    coef[0] = c(1.0, 0.0);
    let mut mk = M4::zeros();
    for k in 1..=4 {
        mk = m * (mk + identity() * coef[k - 1]);
        coef[k] = -mk.trace() / c(k as f64, 0.0);
    }
    coef
}

/// Largest difference between the characteristic polynomial coefficients of
/// `BC` and `CB`, relative to `max(1, max |c_k|)`.
pub fn same_spectrum(b: &M4, cm: &M4) -> f64 {
    let p = char_poly(&(b * cm));
    let q = char_poly(&(cm * b));
    let scale = p.iter().chain(&q).map(|z| z.norm()).fold(1.0, f64::max);
    p.iter().zip(&q).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainSurrogate {
    pub xi: [C; 4],
    pub xibar: [C; 4],
    pub tm1: C,
    pub tm1bar: C,
    pub t0: C,
    pub t0bar: C,
    pub g: u32,
}

/// Tolerance for the contraction rule `(ξ − ξ̄)² = 0`, relative to `|ξ|²`.
pub const CONTRACTION_TOL: f64 = 1e-10;

impl ChainSurrogate {
    /// Validates the contraction rule `ξ·ξ̄ = (z + z̄)/2`, i.e. `ξ − ξ̄` null,
    /// which the projector identities rely on.
    pub fn new(xi: [C; 4], xibar: [C; 4], tm1: C, tm1bar: C, t0: C, t0bar: C, g: u32) -> Result<Self> {
        if g == 0 {
            return Err(Error::InvalidArgument("g must be positive".into()));
        }
        let diff: [C; 4] = std::array::from_fn(|i| xi[i] - xibar[i]);
        let scale = xi.iter().chain(&xibar).map(|z| z.norm_sqr()).sum::<f64>().max(1e-300);
        let defect = mdot(&diff, &diff).norm();
        if defect > CONTRACTION_TOL * scale {
            return Err(Error::PreconditionViolation(format!(
                "xi - xibar must be null (defect {defect:e})"
            )));
        }
        Ok(ChainSurrogate { xi, xibar, tm1, tm1bar, t0, t0bar, g })
    }

    /// `ξ = a + ib`, `ξ̄ = a − ib` with `b` real and null, and `T̄ = conj T`.
    pub fn physical(a: [f64; 4], b_spatial: [f64; 3], tm1: C, t0: C, g: u32) -> Result<Self> {
        let n = b_spatial.iter().map(|x| x * x).sum::<f64>().sqrt();
        let b = [n, b_spatial[0], b_spatial[1], b_spatial[2]];
        let xi = std::array::from_fn(|i| c(a[i], b[i]));
        let xibar = std::array::from_fn(|i| c(a[i], -b[i]));
        Self::new(xi, xibar, tm1, tm1.conj(), t0, t0.conj(), g)
    }

    /// Random surrogate with `ξ̄ = conj ξ` and conjugate factors.
    pub fn random_physical(rng: &mut impl Rng, g: u32) -> Self {
        loop {
            let a: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let b: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let tm1 = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let t0 = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if let Ok(s) = Self::physical(a, b, tm1, t0, g) {
                if s.well_separated() {
                    return s;
                }
            }
        }
    }

    /// Random surrogate with `ξ̄ = ξ − n` for a complex null `n` and
    /// independent factors.
    pub fn random_independent(rng: &mut impl Rng, g: u32) -> Self {
        let mut cplx = || c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        loop {
            let xi: [C; 4] = std::array::from_fn(|_| cplx());
            let dir: [f64; 3] = std::array::from_fn(|_| cplx().re);
            let nd = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
            let alpha = cplx();
            let n = [alpha, alpha * dir[0] / nd, alpha * dir[1] / nd, alpha * dir[2] / nd];
            let xibar = std::array::from_fn(|i| xi[i] - n[i]);
            let (a, b, d, e) = (cplx(), cplx(), cplx(), cplx());
            if let Ok(s) = Self::new(xi, xibar, a, b, d, e, g) {
                if s.well_separated() {
                    return s;
                }
            }
        }
    }

    pub fn z(&self) -> C {
        mdot(&self.xi, &self.xi)
    }

    pub fn zbar(&self) -> C {
        mdot(&self.xibar, &self.xibar)
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        let close = |a: C, b: C| (a - b.conj()).norm() <= tol * a.norm().max(1.0);
        (0..4).all(|i| close(self.xibar[i], self.xi[i]))
            && close(self.tm1bar, self.tm1)
            && close(self.t0bar, self.t0)
    }

    /// `|z − z̄|` not small against `|z|, |z̄|`, so random trials stay away
    /// from the degenerate limit.
    fn well_separated(&self) -> bool {
        let (z, zb) = (self.z(), self.zbar());
        (z - zb).norm() > 0.05 * z.norm().max(zb.norm()).max(0.1)
    }

    fn check_z(&self) -> Result<C> {
        let (z, zb) = (self.z(), self.zbar());
        let dz = (z - zb).norm();
        if dz < 1e-10 * z.norm().max(zb.norm()) || dz == 0.0 {
            return Err(Error::DegenerateZ(dz));
        }
        Ok(z - zb)
    }

    pub fn xi_slash(&self) -> M4 {
        slash(&self.xi)
    }

    pub fn xibar_slash(&self) -> M4 {
        slash(&self.xibar)
    }

    /// `F_± = (1 ± [ξ̸, ξ̸̄]/(z − z̄))/2`.
    pub fn projectors(&self) -> Result<(M4, M4)> {
        let dz = self.check_z()?;
        let (x, xb) = (self.xi_slash(), self.xibar_slash());
        let k = (x * xb - xb * x) / dz;
        let half = c(0.5, 0.0);
        Ok(((identity() + k) * half, (identity() - k) * half))
    }
}

/// Residuals of the vacuum projector identities.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectorChecks {
    pub idempotent: f64,
    pub orthogonal: f64,
    pub complete: f64,
    /// `|tr F_± − 2|` together with the third singular value gap.
    pub rank: f64,
    /// `‖ξ̸ξ̸̄ − z F₊ − z̄ F₋‖`
    pub decomposition: f64,
    /// `‖F₊* − F₋‖`; only meaningful for `ξ̄ = conj ξ`.
    pub adjoint_swap: Option<f64>,
}

impl ProjectorChecks {
    pub fn worst(&self) -> f64 {
        [self.idempotent, self.orthogonal, self.complete, self.rank, self.decomposition]
            .into_iter()
            .chain(self.adjoint_swap)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct VacuumSpectrum {
    pub lambda_plus: C,
    pub lambda_minus: C,
    pub f_plus: M4,
    pub f_minus: M4,
    pub checks: ProjectorChecks,
}

fn rank_defect(f: &M4) -> f64 {
    let sv = f.clone_owned().svd(false, false).singular_values;
    let mut s: Vec<f64> = sv.iter().cloned().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    // two singular values of order one, two zero
    let tr = (f.trace() - c(2.0, 0.0)).norm();
    tr.max(s[2] / s[0].max(1e-300))
}

pub fn vacuum_spectrum(s: &ChainSurrogate) -> Result<VacuumSpectrum> {
    let (fp, fm) = s.projectors()?;
    let g2 = (s.g as f64).powi(2);
    let lambda_plus = s.t0 * s.tm1bar * g2;
    let lambda_minus = s.tm1 * s.t0bar * g2;
    let id = identity();
    let (z, zb) = (s.z(), s.zbar());
    let scale = z.norm().max(zb.norm()).max(1.0);
    let checks = ProjectorChecks {
        idempotent: max_norm4(&(fp * fp - fp)).max(max_norm4(&(fm * fm - fm))),
        orthogonal: max_norm4(&(fp * fm)).max(max_norm4(&(fm * fp))),
        complete: max_norm4(&(fp + fm - id)),
        rank: rank_defect(&fp).max(rank_defect(&fm)),
        decomposition: max_norm4(&(s.xi_slash() * s.xibar_slash() - fp * z - fm * zb)) / scale,
        adjoint_swap: s.is_physical(1e-12).then(|| max_norm4(&(spin_adjoint(&fp) - fm))),
    };
    Ok(VacuumSpectrum {
        lambda_plus,
        lambda_minus,
        f_plus: fp,
        f_minus: fm,
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Chirality {
    L,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabeledEigenvalue {
    pub chirality: Chirality,
    pub sign: Sign,
    pub value: C,
}

/// Tolerance on the spread of the four moduli.
pub const MODULI_TOL: f64 = 1e-12;

/// `ν_L = conj(ν_R) = e^{−i(Λ_L − Λ_R)}`.
pub fn chiral_phases(lambda_l: f64, lambda_r: f64) -> (C, C) {
    let nu_l = C::from_polar(1.0, -(lambda_l - lambda_r));
    (nu_l, nu_l.conj())
}

/// `λ^{L/R}_± = ν_{L/R} λ_±`; fails if the four moduli differ, which
/// happens when the conjugate factors are not complex conjugates.
pub fn chiral_spectrum(s: &ChainSurrogate, lambda_l: f64, lambda_r: f64) -> Result<[LabeledEigenvalue; 4]> {
    let vac = vacuum_spectrum(s)?;
    let (nu_l, nu_r) = chiral_phases(lambda_l, lambda_r);
    let out = [
        LabeledEigenvalue { chirality: Chirality::L, sign: Sign::Plus, value: nu_l * vac.lambda_plus },
        LabeledEigenvalue { chirality: Chirality::L, sign: Sign::Minus, value: nu_l * vac.lambda_minus },
        LabeledEigenvalue { chirality: Chirality::R, sign: Sign::Plus, value: nu_r * vac.lambda_plus },
        LabeledEigenvalue { chirality: Chirality::R, sign: Sign::Minus, value: nu_r * vac.lambda_minus },
    ];
    let spread = moduli_spread(&out);
    if spread > MODULI_TOL {
        return Err(Error::PreconditionViolation(format!(
            "eigenvalue moduli differ by {spread:e}; conjugate factors must be complex conjugates"
        )));
    }
    Ok(out)
}

/// Relative spread of `|λ|` over the labeled eigenvalues.
pub fn moduli_spread(ev: &[LabeledEigenvalue]) -> f64 {
    let mods: Vec<f64> = ev.iter().map(|e| e.value.norm()).collect();
    let hi = mods.iter().cloned().fold(0.0, f64::max);
    let lo = mods.iter().cloned().fold(f64::INFINITY, f64::min);
    (hi - lo) / hi.max(1e-300)
}

/// `(χ_L ν_L + χ_R ν_R) ξ̸ξ̸̄` whose eigenvalues are `ν_c z` and `ν_c z̄`.
pub fn chiral_chain_matrix(s: &ChainSurrogate, lambda_l: f64, lambda_r: f64) -> M4 {
    let (nu_l, nu_r) = chiral_phases(lambda_l, lambda_r);
    let (chi_l, chi_r) = chiral_projectors();
    (chi_l * nu_l + chi_r * nu_r) * s.xi_slash() * s.xibar_slash()
}

/// Scalar prefactor of `iξ̸` in the vacuum `Q`: `(1 − 4μ) g³ T⁽⁰⁾ T⁽⁻¹⁾ T̄⁽⁻¹⁾`.
pub fn q_factor(s: &ChainSurrogate, mu: f64) -> C {
    let one_minus = 1.0 - 4.0 * mu;
    if one_minus == 0.0 {
        return C::new(0.0, 0.0);
    }
    s.t0 * s.tm1 * s.tm1bar * (s.g as f64).powi(3) * one_minus
}

/// Matrix elements `F^{cc'}_{ss'}(B)` in the double null spinor frame.
#[derive(Debug, Clone)]
pub struct NullFrameComponents {
    /// Row `(c, s)`, column `(c', s')`, with index `2·c + s` for
    /// `L = 0, R = 1` and `+ = 0, − = 1`.
    pub entries: Matrix4<C>,
}

impl NullFrameComponents {
    pub fn get(&self, c: Chirality, cp: Chirality, s: Sign, sp: Sign) -> C {
        self.entries[(frame_index(c, s), frame_index(cp, sp))]
    }
}

pub fn frame_index(c: Chirality, s: Sign) -> usize {
    2 * (c == Chirality::R) as usize + (s == Sign::Minus) as usize
}

/// Checks `v·ξ = v·ξ̄ = 0`, `v·v = 1` and `conj v = −v`.
pub fn check_frame_vector(s: &ChainSurrogate, v: &[C; 4]) -> Result<()> {
    let tol = 1e-10;
    let scale = s.xi.iter().chain(&s.xibar).map(|z| z.norm()).fold(1.0, f64::max);
    if mdot(v, &s.xi).norm() > tol * scale || mdot(v, &s.xibar).norm() > tol * scale {
        return Err(Error::BadFrameVector("v must be orthogonal to xi and xibar".into()));
    }
    if (mdot(v, v) - c(1.0, 0.0)).norm() > tol {
        return Err(Error::BadFrameVector("v must have <v,v> = 1".into()));
    }
    if v.iter().any(|z| z.re.abs() > tol) {
        return Err(Error::BadFrameVector("v must be purely imaginary".into()));
    }
    Ok(())
}

/// The eight trace formulas for `c = L` and their images under `L ↔ R`.
pub fn null_frame_components(b: &M4, s: &ChainSurrogate, v: &[C; 4]) -> Result<NullFrameComponents> {
    check_frame_vector(s, v)?;
    let (f0p, _) = s.projectors()?;
    let z = s.z();
    let x = s.xi_slash();
    let vs = slash(v);
    let (chi_l, chi_r) = chiral_projectors();
    let mut entries = Matrix4::zeros();
    use Chirality::*;
    use Sign::*;
    for (c0, c1, chi) in [(L, R, chi_l), (R, L, chi_r)] {
        let tr = |m: M4| (m * chi * b).trace();
        let mut put = |cp: Chirality, s0: Sign, s1: Sign, val: C| {
            entries[(frame_index(c0, s0), frame_index(cp, s1))] = val;
        };
        put(c0, Plus, Plus, tr(f0p));
        put(c1, Plus, Plus, tr(f0p * vs));
        put(c0, Plus, Minus, tr(x * f0p * vs));
        put(c1, Plus, Minus, tr(x * f0p));
        put(c0, Minus, Plus, tr(f0p * vs * x) / z);
        put(c1, Minus, Plus, tr(f0p * x) / z);
        put(c0, Minus, Minus, tr(x * f0p * x) / z);
        put(c1, Minus, Minus, tr(x * f0p * vs * x) / z);
    }
    Ok(NullFrameComponents { entries })
}

/// `C₀ j − (mass term) A − 12π² J`, componentwise.
pub fn el_residual(fc: &FieldConstants, j: &[f64; 4], a: &[f64; 4], big_j: &[f64; 4]) -> [f64; 4] {
    let k = 12.0 * std::f64::consts::PI.powi(2);
    std::array::from_fn(|i| fc.c0 * j[i] - fc.mass_term * a[i] - k * big_j[i])
}

/// The current `J` for which the residual vanishes.
pub fn solve_current(fc: &FieldConstants, j: &[f64; 4], a: &[f64; 4]) -> [f64; 4] {
    let k = 12.0 * std::f64::consts::PI.powi(2);
    std::array::from_fn(|i| (fc.c0 * j[i] - fc.mass_term * a[i]) / k)
}

/// Random matrix symmetric with respect to the spin scalar product,
/// `A = P P*` with Gaussian-like entries of order one.
pub fn random_symmetric_chain(rng: &mut impl Rng) -> M4 {
    let p = M4::from_fn(|_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let a = p * spin_adjoint(&p);
    // remove rounding asymmetry
    (a + spin_adjoint(&a)) * c(0.5, 0.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestLine {
    pub property: String,
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn trial_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(k);
    r
}

fn worst_of<F: Fn(u64) -> f64 + Send + Sync>(trials: usize, f: F) -> f64 {
    (0..trials as u64).into_par_iter().map(f).reduce(|| 0.0, f64::max)
}

/// Randomized check of every chain property; per-trial generators are derived
/// from `seed` so the report is reproducible.
pub fn chain_selftest(trials: usize, seed: u64) -> Vec<SelftestLine> {
    let line = |name: &str, worst: f64, tol: f64| SelftestLine {
        property: name.to_string(),
        worst,
        tolerance: tol,
        pass: worst <= tol,
    };
    let pairing = worst_of(trials, |k| {
        let mut rng = trial_rng(seed, 4 * k);
        let a = random_symmetric_chain(&mut rng);
        conjugate_pairing(&a, 1e-12).map(|r| r.max_distance).unwrap_or(f64::INFINITY)
    });
    let similar = worst_of(trials, |k| {
        let mut rng = trial_rng(seed, 4 * k + 1);
        let mut m = || M4::from_fn(|_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let (b, cm) = (m(), m());
        same_spectrum(&b, &cm)
    });
    let projectors = worst_of(trials, |k| {
        let mut rng = trial_rng(seed, 4 * k + 2);
        let s = if k % 2 == 0 {
            ChainSurrogate::random_physical(&mut rng, 3)
        } else {
            ChainSurrogate::random_independent(&mut rng, 3)
        };
        vacuum_spectrum(&s).map(|v| v.checks.worst()).unwrap_or(f64::INFINITY)
    });
    let chiral = worst_of(trials, |k| {
        let mut rng = trial_rng(seed, 4 * k + 3);
        let s = ChainSurrogate::random_physical(&mut rng, 3);
        let (ll, lr) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        match chiral_spectrum(&s, ll, lr) {
            Ok(ev) => moduli_spread(&ev),
            Err(_) => f64::INFINITY,
        }
    });
    let q = worst_of(trials, |k| {
        let mut rng = trial_rng(seed, 4 * k);
        let s = ChainSurrogate::random_independent(&mut rng, 3);
        q_factor(&s, 0.25).norm()
    });
    vec![
        line("conjugate_pairing", pairing, 1e-9),
        line("same_spectrum", similar, 1e-9),
        line("vacuum_projectors", projectors, 1e-11),
        line("chiral_moduli", chiral, 1e-12),
        line("q_factor_quarter", q, 0.0),
    ]
}
