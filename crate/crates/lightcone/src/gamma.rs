//! Dirac matrices in the Dirac representation, signature `(+,−,−,−)`, and
//! small helpers for Minkowski vectors and generation-space Kronecker
//! products.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

pub type C = Complex64;
pub type M4 = Matrix4<C>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// `γ⁰ … γ³`.
pub fn gammas() -> [M4; 4] {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    #[rustfmt::skip]
    let g0 = M4::new(
        l, o, o, o,
        o, l, o, o,
        o, o, -l, o,
        o, o, o, -l,
    );
    #[rustfmt::skip]
    let g1 = M4::new(
        o, o, o, l,
        o, o, l, o,
        o, -l, o, o,
        -l, o, o, o,
    );
    #[rustfmt::skip]
    let g2 = M4::new(
        o, o, o, -i,
        o, o, i, o,
        o, i, o, o,
        -i, o, o, o,
    );
    #[rustfmt::skip]
    let g3 = M4::new(
        o, o, l, o,
        o, o, o, -l,
        -l, o, o, o,
        o, l, o, o,
    );
    [g0, g1, g2, g3]
}

/// `γ⁵ = iγ⁰γ¹γ²γ³`.
pub fn gamma5() -> M4 {
    let g = gammas();
    g[0] * g[1] * g[2] * g[3] * c(0.0, 1.0)
}

pub fn identity() -> M4 {
    M4::identity()
}

/// Left and right chiral projectors `(1 ∓ γ⁵)/2`.
pub fn chiral_projectors() -> (M4, M4) {
    let g5 = gamma5();
    let id = identity();
    ((id - g5) * c(0.5, 0.0), (id + g5) * c(0.5, 0.0))
}

/// `v̸ = γ^μ v_μ` for a vector given by its contravariant components.
pub fn slash(v: &[C; 4]) -> M4 {
    let g = gammas();
    g[0] * v[0] - g[1] * v[1] - g[2] * v[2] - g[3] * v[3]
}

pub fn slash_real(v: &[f64; 4]) -> M4 {
    slash(&to_complex(v))
}

pub fn to_complex(v: &[f64; 4]) -> [C; 4] {
    [c(v[0], 0.0), c(v[1], 0.0), c(v[2], 0.0), c(v[3], 0.0)]
}

/// Bilinear Minkowski product (no complex conjugation).
pub fn mdot(a: &[C; 4], b: &[C; 4]) -> C {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

pub fn mdot_real(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

/// Spin adjoint `γ⁰ A† γ⁰`.
pub fn spin_adjoint(a: &M4) -> M4 {
    let g0 = gammas()[0];
    g0 * a.adjoint() * g0
}

/// `a ⊗ b` with `a` acting on generations and `b` on spinor indices, so the
/// row index is `4β + s`.
pub fn kron(a: &DMatrix<C>, b: &M4) -> DMatrix<C> {
    a.kronecker(&DMatrix::from_iterator(4, 4, b.iter().copied()))
}

pub fn to_dynamic(m: &M4) -> DMatrix<C> {
    DMatrix::from_iterator(4, 4, m.iter().copied())
}

/// Max-norm of a dynamic matrix.
pub fn max_norm(m: &DMatrix<C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_norm4(m: &M4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
