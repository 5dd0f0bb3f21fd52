use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which limit a computation ran into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Capacity {
    pub what: &'static str,
    pub limit: String,
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (limit: {})", self.what, self.limit)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension {0} is outside the supported range 1..=24")]
    InvalidDimension(u32),
    #[error("vertex id {id} is out of range for d = {d}")]
    VertexOutOfRange { id: u64, d: u32 },
    #[error("vertex sets of dimension {left} and {right} cannot be combined")]
    DimensionMismatch { left: u32, right: u32 },
    #[error("set meets both parity classes")]
    MixedParity,
    #[error("capacity exceeded: {0}")]
    CapacityExceeded(Capacity),
    #[error("exact integer overflow in {0}")]
    Overflow(&'static str),
    #[error("profile table lacks the feature required for {0}")]
    FeatureMissing(&'static str),
    #[error("malformed profile file: {0}")]
    Format(String),
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumMismatch { stored: u32, computed: u32 },
    #[error("input set is empty")]
    EmptyInput,
    #[error("input set is not 2-linked")]
    NotTwoLinked,
    #[error("set is not in the preimage of the approximation pair")]
    NotInPreimage,
    #[error("gamma = {0} is not in the open interval (0, 1)")]
    InvalidGamma(f64),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("certificate case {found} does not match the case {expected} implied by the pair")]
    CaseMismatch { expected: u8, found: u8 },
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn capacity(what: &'static str, limit: impl fmt::Display) -> Self {
        Error::CapacityExceeded(Capacity {
            what,
            limit: limit.to_string(),
        })
    }

    /// Capacity and overflow failures, as opposed to bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            Error::CapacityExceeded(_) | Error::Overflow(_) | Error::InvalidDimension(_)
        )
    }
}
