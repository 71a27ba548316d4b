use thiserror::Error;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Domain,
    Numerical,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("masses must be finite and positive (got {0})")]
    InvalidMass(f64),
    #[error("masses must be strictly increasing: m{i} = {mi} is not below m{j} = {mj}")]
    Unordered { i: usize, j: usize, mi: f64, mj: f64 },
    #[error("degenerate masses: m{i} = {mi} and m{j} = {mj} are closer than {threshold:e} * m_g")]
    DegenerateMasses {
        i: usize,
        j: usize,
        mi: f64,
        mj: f64,
        threshold: f64,
    },
    #[error("this operation needs exactly {expected} generations, got {got}")]
    WrongGenerationCount { expected: usize, got: usize },
    #[error("this operation needs at least {min} generations, got {got}")]
    TooFewGenerations { min: usize, got: usize },
    #[error("factor {0} cannot be evaluated numerically")]
    UnsupportedFactor(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(i32, i32),
    #[error("inhomogeneous fraction sum (degrees {0:?})")]
    Inhomogeneous(Vec<i32>),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("fit failed: {0}")]
    FitFailure(String),
    #[error("branch failure: imaginary part {imag:e} at z = {z}")]
    BranchFailure { z: f64, imag: f64 },
    #[error("C0 = {0} is not positive, the coupling is undefined")]
    NonPositiveC0(f64),
    #[error("u is infeasible: <u,u> = {uu} is below the bound {bound}")]
    Infeasible { uu: f64, bound: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("z and zbar are too close (|z - zbar| = {0:e})")]
    DegenerateZ(f64),
    #[error("frame vector violates the null-frame conditions: {0}")]
    BadFrameVector(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("linear algebra failure: {0}")]
    Singular(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            InvalidArgument(_) => ErrorClass::Usage,
            InvalidMass(_)
            | Unordered { .. }
            | DegenerateMasses { .. }
            | WrongGenerationCount { .. }
            | TooFewGenerations { .. }
            | UnsupportedFactor(_)
            | DegreeMismatch(..)
            | Inhomogeneous(_)
            | NonPositiveC0(_)
            | Infeasible { .. }
            | PreconditionViolation(_)
            | DegenerateZ(_)
            | BadFrameVector(_) => ErrorClass::Domain,
            QuadratureFailure(_) | FitFailure(_) | BranchFailure { .. } | Singular(_) => {
                ErrorClass::Numerical
            }
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
