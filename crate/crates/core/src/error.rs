//! Error type shared by every module of the crate.

use std::path::PathBuf;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Shapes of two operands (or an operand and a declared shape) disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A scalar or structural argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Requested factorization rank does not satisfy `1 <= r <= min(n1, n2)`.
    #[error("rank {rank} out of range for {n1}x{n2} frontal slices")]
    RankOutOfRange { rank: usize, n1: usize, n2: usize },

    /// The inverse DFT of a supposedly conjugate-symmetric tensor produced a
    /// significant imaginary part, i.e. some Fourier-domain computation broke
    /// the symmetry that guarantees a real result.
    #[error(
        "inverse DFT entry ({i},{j},{k}) has imaginary residue {residue:.3e} above tolerance {tol:.3e}; \
         Fourier-domain data is corrupted"
    )]
    ImaginaryResidue {
        i: usize,
        j: usize,
        k: usize,
        residue: f64,
        tol: f64,
    },

    /// A probe budget cannot be laid out on the requested tensor dimensions.
    #[error("invalid sampling budget: {0}")]
    InvalidBudget(String),

    /// A solver iterate stopped being finite.
    #[error("non-finite value encountered at solver iteration {iter}")]
    NonFinite { iter: usize },

    /// An operation that needs a nonzero tensor received an all-zero one.
    #[error("zero tensor passed to {0}")]
    ZeroTensor(&'static str),

    /// Malformed on-disk data; `line` is 1-based within `path`.
    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
