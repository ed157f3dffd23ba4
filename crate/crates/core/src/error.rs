use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building or analyzing a configuration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported dimension {0}, this model only uses 2 (qubit) and 4 (pair)")]
    InvalidDimension(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not Hermitian: max |A - A†| entry {defect:.3e} exceeds {tol:.1e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("trace deviates from 1 by {0:.3e}")]
    TraceNotOne(f64),

    #[error("matrix has eigenvalue {0:.3e} below the positivity floor")]
    NotPositive(f64),

    #[error("state vector norm deviates from 1 by {0:.3e}")]
    NotNormalized(f64),

    #[error("non-finite value in input")]
    NonFinite,

    #[error("{name} = {value} outside {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("Bloch vector norm {0} exceeds 1")]
    BlochNormExceeded(f64),

    #[error("detector overlap magnitude {0} exceeds 1")]
    OverlapExceeded(f64),

    #[error("visibility {0} leaves no distinguishable pointer components to measure")]
    DegenerateVisibility(f64),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error(
        "discord {0:.3e} fell below the numerical floor; optimizer exceeded the mutual information"
    )]
    NegativeDiscord(f64),
}
