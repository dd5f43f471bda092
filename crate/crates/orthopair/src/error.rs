//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by algebra, module, and operator computations.
#[derive(Debug, Error)]
pub enum Error {
    /// A descriptor was empty or contained a zero block size.
    #[error("invalid algebra descriptor: {0}")]
    InvalidDescriptor(String),

    /// Two elements of different algebras were combined.
    #[error("operands live over different algebras")]
    InvalidOperand,

    /// Two module elements from different module spaces were combined.
    #[error("module elements live in different spaces")]
    SpaceMismatch,

    /// A Hermitian input was required but the deviation exceeded tolerance.
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// A positive (semi-)definite input was required.
    #[error("matrix is not positive (minimal eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    /// Two Hilbert-space vectors were expected in the same block.
    #[error("vectors live in different blocks ({0} vs {1})")]
    BlockMismatch(usize, usize),

    /// A unit vector was required but the zero vector was given.
    #[error("zero vector cannot be normalized")]
    ZeroVector,

    /// A block index outside the descriptor was used.
    #[error("block index {index} out of range (algebra has {blocks} blocks)")]
    BlockOutOfRange { index: usize, blocks: usize },

    /// θ-orthogonality is only defined for θ in [0, 1).
    #[error("theta {0} outside [0, 1)")]
    InvalidTheta(f64),

    /// The Gram element ⟨x, x⟩ is numerically singular.
    #[error("gram element is singular (minimal eigenvalue {min_eigenvalue:.3e})")]
    SingularGram { min_eigenvalue: f64 },

    /// The element does not satisfy the minimal-projection axioms.
    #[error("not a minimal projection: {0}")]
    NotMinimalProjection(String),

    /// A linear map failed the module-linearity reconstruction check.
    #[error(
        "map is not module-linear (basis element {basis_index}, discrepancy {discrepancy:.3e})"
    )]
    NotALinear {
        basis_index: usize,
        discrepancy: f64,
    },

    /// A matrix or operator inverse does not exist at working precision.
    #[error("operator is singular (smin {smin:.3e} vs norm {norm:.3e})")]
    Singular { smin: f64, norm: f64 },

    /// No sample with the required projection mass was found.
    #[error("no sample with sufficient projection mass found in {attempts} draws")]
    DegenerateSample { attempts: usize },

    /// Per-projection scalars disagree beyond tolerance; the pair cannot be preserving.
    #[error("per-projection scalars inconsistent (spread {spread:.3e} > {tolerance:.3e})")]
    InconsistentGamma { spread: f64, tolerance: f64 },

    /// An unknown suite name was requested.
    #[error("unknown suite '{name}'; available: {available}")]
    UnknownSuite { name: String, available: String },

    /// A serialized file did not match the expected schema.
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
