//! Error types shared by every module.

use thiserror::Error;

/// Errors produced by model construction, phase arithmetic and propagator
/// evaluation.
///
/// The variants are grouped by how a front end should treat them: input
/// validation ([`Error::is_validation`]), genuine mathematical singularities
/// ([`Error::is_singularity`]) and internal invariant breaches.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A divisibility precondition ("sufficiently divisible N") failed.
    #[error("divisibility error: {0}")]
    Divisibility(String),

    /// Exact phase arithmetic would overflow machine integers.
    #[error("phase overflow: {0}")]
    PhaseOverflow(String),

    /// The requested time makes the model degenerate (t = 0 collapses the
    /// space to a point).
    #[error("singular time: {0}")]
    SingularTime(String),

    /// A trigonometric factor vanishes (sin(ωt) = 0 or cos(ωt/2) = 0).
    #[error("singularity: {0}")]
    Singularity(String),

    /// A requested shift does not land on the sample grid.
    #[error("grid error: {0}")]
    Grid(String),

    /// Vector length or scaling constant does not match the model.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Pointwise operator ratio is undefined because the test function
    /// vanishes at the requested grid point.
    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    /// An internal consistency assertion failed; indicates a bug, not bad
    /// input.
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by inadmissible input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Divisibility(_)
                | Error::PhaseOverflow(_)
                | Error::Grid(_)
                | Error::DimensionMismatch(_)
                | Error::UndefinedRatio(_)
        )
    }

    /// True for mathematical singularities of the underlying formulas.
    pub fn is_singularity(&self) -> bool {
        matches!(self, Error::SingularTime(_) | Error::Singularity(_))
    }

    /// Prefix the message with context (used by sweep evaluation to name the
    /// failing N).
    pub(crate) fn with_context(self, context: &str) -> Error {
        macro_rules! prefix {
            ($variant:ident, $msg:expr) => {
                Error::$variant(format!("{context}: {}", $msg))
            };
        }
        match self {
            Error::Domain(m) => prefix!(Domain, m),
            Error::Divisibility(m) => prefix!(Divisibility, m),
            Error::PhaseOverflow(m) => prefix!(PhaseOverflow, m),
            Error::SingularTime(m) => prefix!(SingularTime, m),
            Error::Singularity(m) => prefix!(Singularity, m),
            Error::Grid(m) => prefix!(Grid, m),
            Error::DimensionMismatch(m) => prefix!(DimensionMismatch, m),
            Error::UndefinedRatio(m) => prefix!(UndefinedRatio, m),
            Error::Internal(m) => prefix!(Internal, m),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
