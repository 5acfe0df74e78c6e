use thiserror::Error;

/// Errors produced by validation gates and structure detectors.
///
/// Each validation variant carries the violated quantity so callers (and the
/// CLI) can report how far an input is from being acceptable.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dim(String),

    #[error("not Hermitian: max |m - m†| entry is {max_asym:.3e}")]
    NotHermitian { max_asym: f64 },

    #[error("not positive semidefinite: smallest eigenvalue is {min_eig:.3e}")]
    NotPsd { min_eig: f64 },

    #[error("trace is {trace:.12}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("columns are not orthonormal: max |v†v - 1| entry is {max_dev:.3e}")]
    NotIsometric { max_dev: f64 },

    #[error("Kraus completeness violated: max |Σ M†M - 1| entry is {max_dev:.3e}")]
    NotTracePreserving { max_dev: f64 },

    #[error("entropy bound not saturated: gap is {gap:.6e}")]
    NotSaturating { gap: f64 },

    #[error("product-pure structure not found: best residual is {residual:.6e}")]
    StructureNotFound { residual: f64 },

    #[error("block weights sum to {sum:.12}, expected 1")]
    BadWeights { sum: f64 },

    #[error("block embeddings not mutually orthogonal: max overlap is {max_overlap:.3e}")]
    NonOrthogonalEmbeddings { max_overlap: f64 },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
