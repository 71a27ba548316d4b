//! Numerical and light-symbolic toolkit for the continuum limit of causal
//! fermion systems: mixing coefficients and mass constants, simple fractions
//! in the regularized light-cone factors, regularization parameters, the
//! non-causal kernels, the local axial transformation and closed-chain
//! spectra.

pub mod axial;
pub mod chains;
pub mod error;
pub mod fraction_algebra;
pub mod gamma;
pub mod kernels;
pub mod quad;
pub mod regularization;
pub mod spectra;

pub use error::{Error, ErrorClass, Result};
pub use spectra::MassSpectrum;
