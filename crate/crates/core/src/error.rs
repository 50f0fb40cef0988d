use thiserror::Error;

use crate::catalog::AdeType;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("leading coefficient {leading} is not a unit")]
    NonUnitLeadingCoefficient { leading: String },

    #[error("{degree}-th root is not integral (coefficient {index} needs a non-exact division)")]
    InexactRoot { degree: u32, index: usize },

    #[error("offset {offset} has a denominator that does not divide 24")]
    InvalidOffset { offset: String },

    #[error("offsets {left} and {right} differ by a non-integer")]
    IncompatibleOffsets { left: String, right: String },

    #[error("Laurent polynomial is not palindromic in y")]
    NotPalindromic,

    #[error("coefficient of q^{d} has a nonzero t^{power} component ({value})")]
    BasisOffsetViolation {
        d: usize,
        power: usize,
        value: String,
    },

    #[error("group order {group_order} is not divisible by stabilizer order {stabilizer_order}")]
    DivisibilityViolation {
        group_order: u32,
        stabilizer_order: u32,
    },

    #[error("no local factor available for {0}")]
    MissingLocalFactor(AdeType),

    #[error("inconsistent derivation: {0}")]
    InconsistentDerivation(String),

    #[error("Im(tau) = {im} is outside the convergence domain")]
    ConvergenceDomain { im: f64 },

    #[error("|f(tau)| = {modulus:e} is too small to divide by")]
    NumericallySingular { modulus: f64 },

    #[error("no element of Gamma0({level}) found within bound {bound}")]
    EmptySample { level: u64, bound: i64 },

    #[error("unknown catalog row {0}")]
    UnknownRow(u8),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable name used in CLI error envelopes and FFI status mapping.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonUnitLeadingCoefficient { .. } => "NonUnitLeadingCoefficient",
            Error::InexactRoot { .. } => "InexactRoot",
            Error::InvalidOffset { .. } => "InvalidOffset",
            Error::IncompatibleOffsets { .. } => "IncompatibleOffsets",
            Error::NotPalindromic => "NotPalindromic",
            Error::BasisOffsetViolation { .. } => "BasisOffsetViolation",
            Error::DivisibilityViolation { .. } => "DivisibilityViolation",
            Error::MissingLocalFactor(_) => "MissingLocalFactor",
            Error::InconsistentDerivation(_) => "InconsistentDerivation",
            Error::ConvergenceDomain { .. } => "ConvergenceDomain",
            Error::NumericallySingular { .. } => "NumericallySingular",
            Error::EmptySample { .. } => "EmptySample",
            Error::UnknownRow(_) => "UnknownRow",
            Error::Parse(_) => "Parse",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
