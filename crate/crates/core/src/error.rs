use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("requested {requested} digits exceeds the configured cap of {cap}")]
    PrecisionCap { requested: u32, cap: u32 },

    #[error("Catalan constant self-check failed: methods agree on only {agreed} of {wanted} digits")]
    SelfCheck { agreed: u32, wanted: u32 },

    #[error("numerical breakdown at n = {n}: denominator below tolerance")]
    Breakdown { n: u64 },

    #[error("degenerate convergent at depth {depth}")]
    DegenerateConvergent { depth: u64 },

    #[error("no rational reconstruction within bound and tolerance")]
    NoReconstruction,

    #[error("degenerate lattice basis: rows are linearly dependent")]
    DegenerateBasis,

    #[error("insufficient precision or no relation (precision {precision} digits)")]
    NoRelation { precision: u32 },

    #[error("denominator beta + gamma*G vanishes numerically")]
    VanishingDenominator,

    #[error("no published parameters for kappa = {0}; use bootstrap")]
    MissingParams(u32),

    #[error("identity degenerate at c = {0}")]
    DegenerateIdentity(i64),

    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("no recurrence of the requested shape annihilates the data")]
    NoRecurrence,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: rho {rho} does not equal alpha/gamma")]
    RhoMismatch {
        path: PathBuf,
        line: usize,
        rho: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
