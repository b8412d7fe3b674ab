use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("paired symbol violates the compatibility condition: {0}")]
    NotInAlgebraA(String),
    #[error("symbol is not elliptic: {0}")]
    NotElliptic(String),
    #[error("Fock truncation too small: {0}")]
    FockTruncationTooSmall(String),
    #[error("expansion depth too shallow: valid down to hdeg {valid}, need {needed}")]
    DepthTooShallow { valid: i32, needed: i32 },
    #[error("symbol carries no evaluable closure")]
    MissingClosure,
    #[error("remainder fit did not converge: {0}")]
    NonConvergentRemainder(String),
    #[error("nonzero residue {0} in strict mode")]
    NonzeroResidue(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureNotConverged(String),
    #[error("finite-difference stencil leaves the grid")]
    BoundaryStencil,
    #[error("chart overlap mismatch: {0}")]
    ChartOverlapMismatch(String),
    #[error("matrix is not in sp(2n): {0}")]
    NotSymplecticLieAlgebra(String),
    #[error("matrix field is not unitary: {0}")]
    NotUnitary(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
