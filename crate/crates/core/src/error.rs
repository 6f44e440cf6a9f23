use thiserror::Error;

use crate::arith::Enclosure;

/// One failed certification attempt, kept for `RetryCapExceeded` reports.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FailedAttempt {
    pub l: u32,
    pub n: Option<u32>,
    pub w_omega_abs: Option<Enclosure>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("q is not admissible: {0}")]
    QNotAdmissible(String),
    #[error("P(q^n) = 0 at n = {n}")]
    PRootAtQPower { n: u32 },
    #[error("condition 1 violated: alpha_{j} / alpha_{k} = q^{exponent}")]
    Condition1Violated { j: usize, k: usize, exponent: i64 },
    #[error("condition 2 violated: alpha_{j} = P(0) * q^{n}")]
    Condition2Violated { j: usize, n: u32 },
    #[error("malformed spec: {0}")]
    MalformedSpec(String),
    #[error("cannot separate gamma from 1/M within the precision cap of {cap} bits")]
    UndecidableAtCap { cap: u32 },
    #[error("precision cap of {cap} bits exceeded: {what}")]
    PrecisionCapExceeded { cap: u32, what: String },
    #[error("domain violation: need n >= S*l = {min_n}, got l = {l}, n = {n}")]
    DomainViolation { l: u32, n: u32, min_n: u32 },
    #[error("omega is the zero vector")]
    ZeroOmega,
    #[error("A is the zero vector")]
    ZeroVector,
    #[error("gamma < 1/M does not hold; the measure is not applicable to this spec")]
    NotApplicable,
    #[error("no certificate within the retry cap ({} attempts)", attempts.len())]
    RetryCapExceeded { attempts: Vec<FailedAttempt> },
    #[error("exhaustive scan needs 1 + dS <= 3, got {dim}; use the random strategy")]
    DimensionTooLargeForExhaustive { dim: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::QNotAdmissible(_) => "QNotAdmissible",
            Error::PRootAtQPower { .. } => "PRootAtQPower",
            Error::Condition1Violated { .. } => "Condition1Violated",
            Error::Condition2Violated { .. } => "Condition2Violated",
            Error::MalformedSpec(_) => "MalformedSpec",
            Error::UndecidableAtCap { .. } => "UndecidableAtCap",
            Error::PrecisionCapExceeded { .. } => "PrecisionCapExceeded",
            Error::DomainViolation { .. } => "DomainViolation",
            Error::ZeroOmega => "ZeroOmega",
            Error::ZeroVector => "ZeroVector",
            Error::NotApplicable => "NotApplicable",
            Error::RetryCapExceeded { .. } => "RetryCapExceeded",
            Error::DimensionTooLargeForExhaustive { .. } => "DimensionTooLargeForExhaustive",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Parse(_) => "Parse",
        }
    }

    /// Cap events: the answer may exist but was not reached within limits.
    pub fn is_undecided(&self) -> bool {
        matches!(
            self,
            Error::UndecidableAtCap { .. }
                | Error::PrecisionCapExceeded { .. }
                | Error::RetryCapExceeded { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
