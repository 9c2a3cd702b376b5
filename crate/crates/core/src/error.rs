use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown molecule `{0}`")]
    UnknownMolecule(String),

    #[error("invalid {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("degenerate spectrum: confinement radicand is zero, no discrete level spacing")]
    DegenerateSpectrum,

    #[error("negative confinement radicand {0} (no bound states under this B^2 sign)")]
    NegativeRadicand(f64),

    #[error("centrifugal index is complex: 1/16 - gamma/4 = {0} < 0")]
    ComplexIndex(f64),

    #[error("inverse temperature must be positive, got {0}")]
    NonPositiveBeta(f64),

    #[error("deformation parameter q = {0} outside [0, 1]")]
    DeformationOutOfRange(f64),

    #[error("invalid beta grid: {0}")]
    InvalidGrid(String),

    #[error("integration failed: {0}")]
    IntegrationFailure(String),

    #[error("NU coefficient {name} = {value} is negative, square root is complex")]
    ComplexCoefficient { name: &'static str, value: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("eigenvalue bisection did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("molecule file line {line}: {message}")]
    MoleculeFile { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
