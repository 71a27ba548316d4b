//! Mass spectra, the mixing-coefficient system and the logarithmic mass constants.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};

/// Minimal admissible gap between neighbouring masses, relative to `m_g`.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MassSpectrum {
    masses: Vec<f64>,
}

impl MassSpectrum {
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() {
            return Err(Error::TooFewGenerations { min: 1, got: 0 });
        }
        for &m in &masses {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::InvalidMass(m));
            }
        }
        for i in 1..masses.len() {
            if masses[i] <= masses[i - 1] {
                if masses[i] == masses[i - 1] {
                    return Err(Error::DegenerateMasses {
                        i,
                        j: i + 1,
                        mi: masses[i - 1],
                        mj: masses[i],
                        threshold: DEGENERACY_THRESHOLD,
                    });
                }
                return Err(Error::Unordered {
                    i,
                    j: i + 1,
                    mi: masses[i - 1],
                    mj: masses[i],
                });
            }
        }
        let mg = *masses.last().unwrap();
        for i in 1..masses.len() {
            if masses[i] - masses[i - 1] < DEGENERACY_THRESHOLD * mg {
                return Err(Error::DegenerateMasses {
                    i,
                    j: i + 1,
                    mi: masses[i - 1],
                    mj: masses[i],
                    threshold: DEGENERACY_THRESHOLD,
                });
            }
        }
        Ok(MassSpectrum { masses })
    }

    /// Sorts the input first; useful for scans over mass ratios.
    pub fn from_unsorted(mut masses: Vec<f64>) -> Result<Self> {
        masses.sort_by(f64::total_cmp);
        Self::new(masses)
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn g(&self) -> usize {
        self.masses.len()
    }

    pub fn scaled(&self, l: f64) -> Result<Self> {
        Self::new(self.masses.iter().map(|m| m * l).collect())
    }

    /// `Σ m_β`
    pub fn sum_m(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// `Σ m_β²`
    pub fn sum_m2(&self) -> f64 {
        self.masses.iter().map(|m| m * m).sum()
    }

    /// `(Σ m_β)²`
    pub fn sum_m_squared(&self) -> f64 {
        self.sum_m().powi(2)
    }

    pub fn sum_m3(&self) -> f64 {
        self.masses.iter().map(|m| m * m * m).sum()
    }

    pub fn m_min(&self) -> f64 {
        self.masses[0]
    }

    pub fn m_max(&self) -> f64 {
        *self.masses.last().unwrap()
    }

    fn require_three(&self) -> Result<()> {
        if self.g() != 3 {
            return Err(Error::WrongGenerationCount {
                expected: 3,
                got: self.g(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingCoefficients {
    pub d: Vec<f64>,
    /// `[Σd, Σ m d, Σ m³ d − 1]`
    pub residuals: [f64; 3],
    /// Max relative deviation between the linear solve and the closed form.
    pub closed_form_deviation: f64,
    /// `(Σ m)·(Σ m² d)`, which equals one for three generations.
    pub yhat_m2d: f64,
}

/// Closed-form mixing coefficients `d_β = 1 / [(Σm) Π_{α≠β}(m_β − m_α)]`.
pub fn mixing_closed_form(spec: &MassSpectrum) -> Result<Vec<f64>> {
    spec.require_three()?;
    let m = spec.masses();
    let s = spec.sum_m();
    Ok((0..3)
        .map(|b| {
            let prod: f64 = (0..3).filter(|&a| a != b).map(|a| m[b] - m[a]).product();
            1.0 / (s * prod)
        })
        .collect())
}

pub fn mixing_residuals(spec: &MassSpectrum, d: &[f64]) -> [f64; 3] {
    let m = spec.masses();
    let s0: f64 = d.iter().sum();
    let s1: f64 = m.iter().zip(d).map(|(m, d)| m * d).sum();
    let s3: f64 = m.iter().zip(d).map(|(m, d)| m * m * m * d).sum();
    [s0, s1, s3 - 1.0]
}

pub fn solve_mixing(spec: &MassSpectrum) -> Result<MixingCoefficients> {
    spec.require_three()?;
    // solve in units of m_g; d scales as m⁻³
    let mg = spec.m_max();
    let m: Vec<f64> = spec.masses().iter().map(|x| x / mg).collect();
    let a = Matrix3::new(
        1.0,
        1.0,
        1.0,
        m[0],
        m[1],
        m[2],
        m[0].powi(3),
        m[1].powi(3),
        m[2].powi(3),
    );
    let rhs = Vector3::new(0.0, 0.0, 1.0);
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("mixing system is singular".into()))?;
    let d: Vec<f64> = sol.iter().map(|x| x / mg.powi(3)).collect();
    let m = spec.masses();
    let closed = mixing_closed_form(spec)?;
    let scale = closed.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let closed_form_deviation = d
        .iter()
        .zip(&closed)
        .map(|(x, y)| (x - y).abs() / scale)
        .fold(0.0, f64::max);
    let m2d: f64 = m.iter().zip(&d).map(|(m, d)| m * m * d).sum();
    Ok(MixingCoefficients {
        residuals: mixing_residuals(spec, &d),
        yhat_m2d: spec.sum_m() * m2d,
        closed_form_deviation,
        d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogConstants {
    pub s3: f64,
    pub s0_const: f64,
    pub s2_const: f64,
    pub sigma0: f64,
    pub sigma2: f64,
}

pub fn log_constants(spec: &MassSpectrum, mix: &MixingCoefficients) -> Result<LogConstants> {
    spec.require_three()?;
    let m = spec.masses();
    let c = 32.0 * PI.powi(3);
    let s3 = m
        .iter()
        .zip(&mix.d)
        .map(|(m, d)| d * m.powi(3) * (m * m).ln())
        .sum::<f64>()
        / c;
    let s0_const = m.iter().map(|m| (m * m).ln()).sum::<f64>() / (3.0 * c);
    let s2_const = m.iter().map(|m| m * m * (m * m).ln()).sum::<f64>() / (c * spec.sum_m2());
    // σ0, σ2 in terms of ℓ_β = ln(m_β²/m_g²): the ln m_g² pieces cancel
    // through Σ m³d = 1, which keeps the result exactly scale invariant
    let mg2 = spec.m_max().powi(2);
    let ell: Vec<f64> = m.iter().map(|x| (x * x / mg2).ln()).collect();
    let dm3l: f64 = m.iter().zip(&mix.d).zip(&ell).map(|((m, d), l)| d * m.powi(3) * l).sum();
    let sigma0 = ell.iter().sum::<f64>() - 3.0 * dm3l;
    let sigma2 = 3.0 * m.iter().zip(&ell).map(|(m, l)| m * m * l).sum::<f64>() / spec.sum_m2() - 3.0 * dm3l;
    Ok(LogConstants {
        s3,
        s0_const,
        s2_const,
        sigma0,
        sigma2,
    })
}
