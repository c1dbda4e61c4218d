//! Error type shared across the library.

use std::fmt;

/// Errors produced by construction, factorization, and analysis routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix dimensions are incompatible with the requested operation.
    Dimension(String),
    /// Text input (CSV cell, complex literal, spectrum file) failed to parse.
    Parse(String),
    /// A multiset of eigenvalues is not closed under negation and conjugation.
    Closure(String),
    /// A collection that must have even size (or an even dimension) does not.
    Parity(String),
    /// Columns expected to be linearly independent are numerically dependent.
    Rank(String),
    /// A requested value is not an eigenvalue of the given matrix.
    NotAnEigenvalue(String),
    /// An eigenpair failed its residual check.
    EigenResidual(String),
    /// An iterative method exhausted its iteration budget.
    NonConvergence(String),
    /// An argument lies outside the mathematical domain of the operation.
    Domain(String),
    /// A structural hypothesis (Hamiltonian form, symmetry) does not hold.
    Structure(String),
    /// The operation is capped at a maximum dimension and the input exceeds it.
    SizeCap(String),
    /// A bracketing search could not enclose the quantity it was asked to locate.
    Bracket(String),
    /// Two routes to the same quantity disagreed beyond tolerance.
    Inconsistency(String),
    /// Underlying file I/O failed.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(m) => write!(f, "dimension error: {m}"),
            Error::Parse(m) => write!(f, "parse error: {m}"),
            Error::Closure(m) => write!(f, "closure violation: {m}"),
            Error::Parity(m) => write!(f, "parity violation: {m}"),
            Error::Rank(m) => write!(f, "rank deficiency: {m}"),
            Error::NotAnEigenvalue(m) => write!(f, "not an eigenvalue: {m}"),
            Error::EigenResidual(m) => write!(f, "eigenpair residual too large: {m}"),
            Error::NonConvergence(m) => write!(f, "iteration did not converge: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Structure(m) => write!(f, "structure violation: {m}"),
            Error::SizeCap(m) => write!(f, "size cap exceeded: {m}"),
            Error::Bracket(m) => write!(f, "bracketing failure: {m}"),
            Error::Inconsistency(m) => write!(f, "internal consistency check failed: {m}"),
            Error::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 1 for domain or numerical failures,
    /// 2 for I/O and parse failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) => 2,
            _ => 1,
        }
    }
}
