//! Simple fractions in the regularized factors `T^(n)_[p]`: degree grading,
//! the derivation `∇`, the contraction rule for `z·T^(n)`, and an
//! integration-by-parts equivalence test.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

/// Lower decoration of a factor: `[p]` or the curly-brace class `{p}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Decoration {
    Bracket(u8),
    Brace(u8),
}

/// A regularized factor `T^(n)_[p]`, possibly complex conjugated.
///
/// Field order fixes the canonical sort key `(conjugated, n, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Factor {
    pub conjugated: bool,
    pub n: i32,
    pub p: Decoration,
}

impl Factor {
    pub fn t(n: i32, p: u8) -> Self {
        Factor {
            conjugated: false,
            n,
            p: Decoration::Bracket(p),
        }
    }

    pub fn tbar(n: i32, p: u8) -> Self {
        Factor {
            conjugated: true,
            n,
            p: Decoration::Bracket(p),
        }
    }

    pub fn brace(n: i32, p: u8) -> Self {
        Factor {
            conjugated: false,
            n,
            p: Decoration::Brace(p),
        }
    }

    pub fn degree(&self) -> i32 {
        1 - self.n
    }

    pub fn conj(self) -> Self {
        Factor {
            conjugated: !self.conjugated,
            ..self
        }
    }

    pub fn shifted(self, dn: i32) -> Self {
        Factor {
            n: self.n + dn,
            ..self
        }
    }

    pub fn is_brace(&self) -> bool {
        matches!(self.p, Decoration::Brace(_))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = match self.p {
            Decoration::Bracket(p) => p.to_string(),
            Decoration::Brace(p) => format!("{{{p}}}"),
        };
        if self.conjugated {
            write!(f, "T({},{},bar)", self.n, p)
        } else {
            write!(f, "T({},{})", self.n, p)
        }
    }
}

/// Scalar coefficient `q·π^k` with rational `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Coef {
    pub q: Ratio<i64>,
    pub pi_power: i32,
}

impl Coef {
    pub fn int(n: i64) -> Self {
        Coef {
            q: Ratio::from_integer(n),
            pi_power: 0,
        }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Coef {
            q: Ratio::new(n, d),
            pi_power: 0,
        }
    }

    pub fn with_pi(self, k: i32) -> Self {
        Coef {
            pi_power: self.pi_power + k,
            ..self
        }
    }

    pub fn value(&self) -> f64 {
        (*self.q.numer() as f64 / *self.q.denom() as f64) * std::f64::consts::PI.powi(self.pi_power)
    }

    pub fn is_zero(&self) -> bool {
        *self.q.numer() == 0
    }

    pub fn neg(self) -> Self {
        Coef { q: -self.q, ..self }
    }

    pub fn mul(self, o: Coef) -> Self {
        Coef {
            q: self.q * o.q,
            pi_power: self.pi_power + o.pi_power,
        }
    }
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)?;
        if self.pi_power != 0 {
            write!(f, "*pi^{}", self.pi_power)?;
        }
        Ok(())
    }
}

/// Quotient of two commuting monomials in the factors, times a coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleFraction {
    pub coef: Coef,
    numerator: Vec<Factor>,
    denominator: Vec<Factor>,
}

impl SimpleFraction {
    pub fn new(coef: Coef, mut numerator: Vec<Factor>, mut denominator: Vec<Factor>) -> Self {
        numerator.sort();
        denominator.sort();
        SimpleFraction {
            coef,
            numerator,
            denominator,
        }
    }

    pub fn monomial(numerator: Vec<Factor>, denominator: Vec<Factor>) -> Self {
        Self::new(Coef::int(1), numerator, denominator)
    }

    pub fn numerator(&self) -> &[Factor] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[Factor] {
        &self.denominator
    }

    pub fn degree(&self) -> i32 {
        self.numerator.iter().map(Factor::degree).sum::<i32>()
            - self.denominator.iter().map(Factor::degree).sum::<i32>()
    }

    pub fn conj(&self) -> Self {
        Self::new(
            self.coef,
            self.numerator.iter().map(|f| f.conj()).collect(),
            self.denominator.iter().map(|f| f.conj()).collect(),
        )
    }

    pub fn scaled(&self, c: Coef) -> Self {
        SimpleFraction {
            coef: self.coef.mul(c),
            ..self.clone()
        }
    }

    pub fn times(&self, other: &SimpleFraction) -> Self {
        let mut num = self.numerator.clone();
        num.extend_from_slice(&other.numerator);
        let mut den = self.denominator.clone();
        den.extend_from_slice(&other.denominator);
        Self::new(self.coef.mul(other.coef), num, den)
    }

    /// Cancels factors common to numerator and denominator.
    pub fn normalized(&self) -> Self {
        let mut num = Vec::new();
        let mut den = self.denominator.clone();
        for f in &self.numerator {
            if let Some(pos) = den.iter().position(|g| g == f) {
                den.remove(pos);
            } else {
                num.push(*f);
            }
        }
        Self::new(self.coef, num, den)
    }

    fn key(&self) -> (Vec<Factor>, Vec<Factor>, i32) {
        (
            self.numerator.clone(),
            self.denominator.clone(),
            self.coef.pi_power,
        )
    }

    fn shape(&self) -> (Vec<Factor>, Vec<Factor>) {
        (self.numerator.clone(), self.denominator.clone())
    }

    /// Numerical value given an evaluator for single factors.
    pub fn eval<F: FnMut(Factor) -> Result<Complex64>>(&self, mut ev: F) -> Result<Complex64> {
        let mut v = Complex64::new(self.coef.value(), 0.0);
        for f in &self.numerator {
            v *= ev(*f)?;
        }
        for f in &self.denominator {
            v /= ev(*f)?;
        }
        Ok(v)
    }
}

impl fmt::Display for SimpleFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coef)?;
        for x in &self.numerator {
            write!(f, "*{x}")?;
        }
        for x in &self.denominator {
            write!(f, "/{x}")?;
        }
        Ok(())
    }
}

/// Formal linear combination of simple fractions.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FractionSum {
    pub terms: Vec<SimpleFraction>,
}

impl FractionSum {
    pub fn zero() -> Self {
        FractionSum { terms: Vec::new() }
    }

    pub fn from_terms(terms: Vec<SimpleFraction>) -> Self {
        let mut s = FractionSum { terms };
        s.merge();
        s
    }

    pub fn single(f: SimpleFraction) -> Self {
        Self::from_terms(vec![f])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Combines terms with identical monomials and π power, dropping zeros.
    fn merge(&mut self) {
        let mut acc: BTreeMap<(Vec<Factor>, Vec<Factor>, i32), Ratio<i64>> = BTreeMap::new();
        let mut order = Vec::new();
        for t in &self.terms {
            let k = t.key();
            if !acc.contains_key(&k) {
                order.push(k.clone());
            }
            *acc.entry(k).or_insert(Ratio::from_integer(0)) += t.coef.q;
        }
        self.terms = order
            .into_iter()
            .filter_map(|k| {
                let q = acc[&k];
                (*q.numer() != 0).then(|| {
                    SimpleFraction::new(
                        Coef {
                            q,
                            pi_power: k.2,
                        },
                        k.0,
                        k.1,
                    )
                })
            })
            .collect();
    }

    pub fn normalized(&self) -> Self {
        Self::from_terms(self.terms.iter().map(SimpleFraction::normalized).collect())
    }

    pub fn add(&self, other: &FractionSum) -> Self {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        Self::from_terms(t)
    }

    pub fn neg(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|t| t.scaled(Coef::int(-1))).collect())
    }

    pub fn sub(&self, other: &FractionSum) -> Self {
        self.add(&other.neg())
    }

    pub fn scaled(&self, c: Coef) -> Self {
        Self::from_terms(self.terms.iter().map(|t| t.scaled(c)).collect())
    }

    pub fn times(&self, f: &SimpleFraction) -> Self {
        Self::from_terms(self.terms.iter().map(|t| t.times(f)).collect())
    }

    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms.iter().map(SimpleFraction::conj).collect())
    }

    /// `self − conj(self)`, the "(… − c.c.)" pattern.
    pub fn minus_cc(&self) -> Self {
        self.sub(&self.conj())
    }

    /// Degree of a homogeneous sum (`None` for the empty sum).
    pub fn degree(&self) -> Result<Option<i32>> {
        let mut ds: Vec<i32> = self.terms.iter().map(SimpleFraction::degree).collect();
        ds.sort();
        ds.dedup();
        match ds.len() {
            0 => Ok(None),
            1 => Ok(Some(ds[0])),
            _ => Err(Error::Inhomogeneous(ds)),
        }
    }

    pub fn eval<F: FnMut(Factor) -> Result<Complex64>>(&self, mut ev: F) -> Result<Complex64> {
        let mut s = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            s += t.eval(&mut ev)?;
        }
        Ok(s)
    }
}

impl fmt::Display for FractionSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

pub fn degree(f: &SimpleFraction) -> i32 {
    f.degree()
}

/// `∇` extended to fractions by the Leibniz and quotient rules.
pub fn nabla(f: &SimpleFraction) -> FractionSum {
    let mut out = Vec::new();
    for i in 0..f.numerator.len() {
        let mut num = f.numerator.clone();
        num[i] = num[i].shifted(-1);
        out.push(SimpleFraction::new(f.coef, num, f.denominator.clone()));
    }
    for j in 0..f.denominator.len() {
        let mut num = f.numerator.clone();
        num.push(f.denominator[j].shifted(-1));
        let mut den = f.denominator.clone();
        den.push(f.denominator[j]);
        out.push(SimpleFraction::new(f.coef.neg(), num, den));
    }
    FractionSum::from_terms(out)
}

pub fn nabla_sum(s: &FractionSum) -> FractionSum {
    s.terms
        .iter()
        .fold(FractionSum::zero(), |acc, t| acc.add(&nabla(t)))
}

/// Right-hand side of `z^(n)_[p] T^(n)_[p] = −4 (n T^(n+1)_[p] + T^(n+2)_{p})`.
pub fn contract_z(n: i32, p: u8) -> FractionSum {
    let mut terms = Vec::new();
    if n != 0 {
        terms.push(SimpleFraction::new(
            Coef::int(-4 * n as i64),
            vec![Factor::t(n + 1, p)],
            vec![],
        ));
    }
    terms.push(SimpleFraction::new(
        Coef::int(-4),
        vec![Factor::brace(n + 2, p)],
        vec![],
    ));
    FractionSum::from_terms(terms)
}

/// Upper bound on the number of generating fractions in [`ibp_equivalent`].
pub const IBP_GENERATOR_CAP: usize = 200;

fn unit_monomial(f: &SimpleFraction) -> SimpleFraction {
    SimpleFraction::new(Coef::int(1), f.numerator.clone(), f.denominator.clone()).normalized()
}

fn shifts(f: &SimpleFraction, target_degree: i32) -> Vec<SimpleFraction> {
    let mut out = Vec::new();
    for i in 0..f.numerator.len() {
        let mut num = f.numerator.clone();
        num[i] = num[i].shifted(1);
        out.push(SimpleFraction::monomial(num, f.denominator.clone()));
    }
    for j in 0..f.denominator.len() {
        let mut den = f.denominator.clone();
        den[j] = den[j].shifted(-1);
        out.push(SimpleFraction::monomial(f.numerator.clone(), den));
    }
    out.into_iter()
        .map(|g| g.normalized())
        .filter(|g| g.degree() == target_degree)
        .collect()
}

/// Decides whether `a − b` lies in the span of `∇`-images of a finite
/// generating set of fractions of one degree lower.
///
/// The generating set is grown from the monomial support of `a − b` by
/// shifting single factors, then once more from the support of the
/// generated images, up to [`IBP_GENERATOR_CAP`] fractions. A `false`
/// answer means no certificate was found within that set.
pub fn ibp_equivalent(a: &FractionSum, b: &FractionSum) -> Result<bool> {
    let (da, db) = (a.degree()?, b.degree()?);
    if let (Some(x), Some(y)) = (da, db) {
        if x != y {
            return Err(Error::DegreeMismatch(x, y));
        }
    }
    let diff = a.sub(b).normalized();
    let Some(l) = diff.degree()? else {
        return Ok(true);
    };

    let mut gens: Vec<SimpleFraction> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut frontier: Vec<SimpleFraction> = diff.terms.clone();
    for _layer in 0..2 {
        let mut next = Vec::new();
        for t in &frontier {
            for g in shifts(t, l - 1) {
                if gens.len() >= IBP_GENERATOR_CAP {
                    break;
                }
                if seen.insert(g.shape()) {
                    next.extend(nabla(&g).normalized().terms.iter().map(unit_monomial));
                    gens.push(g);
                }
            }
        }
        frontier = next;
    }
    if gens.is_empty() {
        return Ok(false);
    }

    // monomial basis over everything that appears
    let images: Vec<FractionSum> = gens.iter().map(|g| nabla(g).normalized()).collect();
    let mut basis: BTreeMap<(Vec<Factor>, Vec<Factor>), usize> = BTreeMap::new();
    for s in images.iter().chain(std::iter::once(&diff)) {
        for t in &s.terms {
            let n = basis.len();
            basis.entry(t.shape()).or_insert(n);
        }
    }
    let rows = basis.len();
    let mut m = DMatrix::<f64>::zeros(rows, images.len());
    for (k, s) in images.iter().enumerate() {
        for t in &s.terms {
            m[(basis[&t.shape()], k)] += t.coef.value();
        }
    }
    let mut rhs = DVector::<f64>::zeros(rows);
    for t in &diff.terms {
        rhs[basis[&t.shape()]] += t.coef.value();
    }
    let svd = m.clone().svd(true, true);
    let x = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Singular(e.to_string()))?;
    let resid = (&m * x - &rhs).norm();
    Ok(resid <= 1e-9 * rhs.norm().max(1e-300))
}

/// Which `c₀` encoding to use; see [`basic_fraction_c0`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum C0Weight {
    /// Mixed term weight `2·3²`, consistent with the evaluated field equations.
    Reconciled,
    /// Mixed term weight `2·3`.
    Printed,
}

fn t(n: i32, p: u8) -> Factor {
    Factor::t(n, p)
}

fn tb(n: i32, p: u8) -> Factor {
    Factor::tbar(n, p)
}

/// `(1/T̄^(0)_[0]) · [inner − c.c.]` with the prefactor left unconjugated.
fn over_tbar0_minus_cc(inner: FractionSum) -> FractionSum {
    inner
        .minus_cc()
        .times(&SimpleFraction::monomial(vec![], vec![tb(0, 0)]))
}

pub fn basic_fraction_c0(weight: C0Weight) -> FractionSum {
    let mixed = match weight {
        C0Weight::Reconciled => 18,
        C0Weight::Printed => 6,
    };
    let inner = FractionSum::from_terms(vec![
        SimpleFraction::new(Coef::int(27), vec![t(0, 0), t(0, 0), tb(0, 0), tb(-1, 0)], vec![]),
        SimpleFraction::new(
            Coef::int(-mixed),
            vec![t(0, 1), t(0, 2), tb(0, 0), tb(-1, 0)],
            vec![],
        ),
    ]);
    over_tbar0_minus_cc(inner).scaled(Coef::ratio(1, 6))
}

pub fn basic_fraction_c1() -> FractionSum {
    FractionSum::from_terms(vec![
        SimpleFraction::new(Coef::int(-9), vec![t(-1, 0), tb(-1, 0), t(0, 0)], vec![tb(0, 0)]),
        SimpleFraction::new(Coef::int(9), vec![t(-1, 0), tb(-1, 0), tb(0, 0)], vec![tb(0, 0)]),
    ])
}

pub fn basic_fraction_c2() -> FractionSum {
    let inner = FractionSum::single(SimpleFraction::new(
        Coef::int(-6),
        vec![t(-1, 0), t(0, 0), tb(0, 1), tb(0, 1)],
        vec![],
    ));
    over_tbar0_minus_cc(inner)
}

pub fn basic_fraction_c3() -> FractionSum {
    let inner = FractionSum::single(SimpleFraction::new(
        Coef::int(-6),
        vec![t(0, 1), t(0, 2), tb(0, 0), tb(-1, 0)],
        vec![],
    ));
    over_tbar0_minus_cc(inner)
}

/// The four basic fractions `c₀ … c₃` (reconciled `c₀`).
pub fn encode_basic_fractions() -> [FractionSum; 4] {
    [
        basic_fraction_c0(C0Weight::Reconciled),
        basic_fraction_c1(),
        basic_fraction_c2(),
        basic_fraction_c3(),
    ]
}

/// Mass- and log-dependent scalar weights multiplying parts of the encoded
/// `N` fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Weight {
    One,
    /// `m² Ŷ² = (Σ m)²`
    YHatSquared,
    /// `m² Ý Ỳ = Σ m²`
    YAcuteYGrave,
    /// `m Ŷ Σ m² d`
    MYHatSumM2d,
    /// `Σ m³ d`
    SumM3d,
    /// `s₀ − s₃`
    S0MinusS3,
    /// `(s₂ − s₃) · m² Ý Ỳ`
    S2MinusS3TimesYAcuteYGrave,
    /// `m Ŷ Σ m² d · m² Ý Ỳ`
    MYHatSumM2dTimesYAcuteYGrave,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EncodedFraction {
    pub name: &'static str,
    pub parts: Vec<(Weight, FractionSum)>,
}

/// Encodings of `N₁ … N₆` with `g = 3`. Parts are kept separate by their
/// mass weight so that they can be evaluated or compared individually.
pub fn encode_n_fractions() -> Vec<EncodedFraction> {
    let g = 3i64;
    let one = |c: i64, num: Vec<Factor>| SimpleFraction::new(Coef::int(c), num, vec![]);
    let tm1tb_cc = |c: Coef| {
        // (T^(-1) T̄^(-1) (T^(0) − T̄^(0))) / T̄^(0)
        FractionSum::from_terms(vec![
            SimpleFraction::new(c, vec![t(-1, 0), tb(-1, 0), t(0, 0)], vec![tb(0, 0)]),
            SimpleFraction::new(c.neg(), vec![t(-1, 0), tb(-1, 0), tb(0, 0)], vec![tb(0, 0)]),
        ])
    };

    let n1 = over_tbar0_minus_cc(FractionSum::from_terms(vec![
        one(1, vec![t(0, 0), t(0, 0), tb(0, 0), tb(-1, 0)]),
        one(-2, vec![t(1, 0), t(-1, 0), tb(0, 0), tb(-1, 0)]),
    ]))
    .scaled(Coef::ratio(g * g * g, 6));

    let n2a = over_tbar0_minus_cc(FractionSum::single(one(
        1,
        vec![t(-1, 0), t(0, 0), tb(0, 1), tb(0, 1)],
    )))
    .scaled(Coef::int(-2 * g));
    let n2b = over_tbar0_minus_cc(FractionSum::single(one(
        1,
        vec![t(-1, 0), t(1, 2), tb(-1, 0), tb(0, 0)],
    )))
    .scaled(Coef::int(-2 * g * g));

    let n3 = over_tbar0_minus_cc(FractionSum::single(one(1, vec![t(-1, 0), tb(0, 0), tb(-1, 0)])))
        .scaled(Coef::ratio(g * g, 8).with_pi(-1));

    let n4a = over_tbar0_minus_cc(FractionSum::single(one(
        1,
        vec![t(0, 1), t(0, 2), tb(-1, 0), tb(0, 0)],
    )))
    .scaled(Coef::int(-2 * g));
    let n4b = over_tbar0_minus_cc(FractionSum::single(one(
        1,
        vec![t(1, 3), t(-1, 0), tb(-1, 0), tb(0, 0)],
    )))
    .scaled(Coef::int(2 * g * g));

    let n5a = over_tbar0_minus_cc(FractionSum::single(one(
        1,
        vec![t(0, 0), t(0, 0), tb(0, 0), tb(-1, 0)],
    )))
    .scaled(Coef::ratio(g * g * g, 6));
    let n5b = over_tbar0_minus_cc(FractionSum::single(one(
        1,
        vec![t(0, 2), t(0, 1), tb(0, 0), tb(-1, 0)],
    )))
    .scaled(Coef::ratio(-g, 3));
    let n5c = tm1tb_cc(Coef::ratio(g * g * g, 3));

    let n6a = over_tbar0_minus_cc(FractionSum::single(one(
        1,
        vec![t(-1, 0), t(0, 0), tb(0, 1), tb(0, 1)],
    )))
    .scaled(Coef::int(-2 * g));
    let n6b = over_tbar0_minus_cc(FractionSum::single(one(
        1,
        vec![t(0, 2), t(0, 1), tb(0, 0), tb(-1, 0)],
    )))
    .scaled(Coef::int(-2 * g));
    let n6c = tm1tb_cc(Coef::int(2 * g * g));

    vec![
        EncodedFraction {
            name: "N1",
            parts: vec![(Weight::One, n1)],
        },
        EncodedFraction {
            name: "N2",
            parts: vec![(Weight::YHatSquared, n2a), (Weight::YAcuteYGrave, n2b)],
        },
        EncodedFraction {
            name: "N3",
            parts: vec![(Weight::One, n3)],
        },
        EncodedFraction {
            name: "N4",
            parts: vec![(Weight::MYHatSumM2d, n4a), (Weight::SumM3d, n4b)],
        },
        EncodedFraction {
            name: "N5",
            parts: vec![
                (Weight::One, n5a),
                (Weight::MYHatSumM2d, n5b),
                (Weight::S0MinusS3, n5c),
            ],
        },
        EncodedFraction {
            name: "N6",
            parts: vec![
                (Weight::YHatSquared, n6a),
                (Weight::MYHatSumM2dTimesYAcuteYGrave, n6b),
                (Weight::S2MinusS3TimesYAcuteYGrave, n6c),
            ],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render() {
        let f = SimpleFraction::new(Coef::int(-9), vec![t(-1, 0), tb(-1, 0)], vec![tb(0, 0)]);
        assert_eq!(f.to_string(), "-9*T(-1,0)*T(-1,0,bar)/T(0,0,bar)");
        assert_eq!(Factor::brace(2, 0).to_string(), "T(2,{0})");
    }

    #[test]
    fn cancellation() {
        let f = SimpleFraction::monomial(vec![t(1, 0), t(0, 0)], vec![t(1, 0)]);
        assert_eq!(f.normalized(), SimpleFraction::monomial(vec![t(0, 0)], vec![]));
    }

    #[test]
    fn c1_layout() {
        let c1 = basic_fraction_c1();
        assert_eq!(c1.terms.len(), 2);
        let lead = &c1.terms[0];
        assert_eq!(lead.coef, Coef::int(-9));
        let mut want = vec![t(-1, 0), tb(-1, 0), t(0, 0)];
        want.sort();
        assert_eq!(lead.numerator(), &want[..]);
    }
}
