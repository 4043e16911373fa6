//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no tap set shipped for LFSR width {0} (supported: 4, 8, 16, 18, 24, 32, 64)")]
    UnsupportedLfsrWidth(u32),
    #[error("LFSR state 0x{state:x} invalid for width {width}: {reason}")]
    InvalidLfsrState { width: u32, state: u64, reason: &'static str },
    #[error("p-bit reference voltage must be positive and finite, got {0}")]
    InvalidReferenceVoltage(f64),
    #[error("block index {index} out of range for plan with {count} blocks")]
    BlockIndexOutOfRange { index: u64, count: u64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("sample count must be at least 1")]
    EmptyRun,
    #[error("sample count {0} too large for 64-bit cycle accounting")]
    RunTooLarge(u64),
    #[error("collector cannot accumulate this sample kind ({0})")]
    CollectorMismatch(&'static str),
    #[error("collectors have different geometry and cannot merge: {0}")]
    GeometryMismatch(&'static str),
    #[error("64-bit tally overflow")]
    TallyOverflow,
    #[error("value must be finite, got {0}")]
    NonFiniteValue(f64),
    #[error("group '{0}' is empty")]
    EmptyGroup(&'static str),
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("no samples accumulated")]
    NoSamples,
    #[error("node index {0} out of range")]
    UnknownNode(usize),
    #[error("subset of {0} nodes too large to tabulate (limit 20)")]
    SubsetTooLarge(usize),
    #[error("subset not configured on this collector: {0:?}")]
    SubsetNotConfigured(Vec<usize>),
    #[error("enumeration of {0} cases exceeds the oracle limit")]
    EnumerationTooLarge(u128),
    #[error("instance needs at least {needed} items, got {got}")]
    TooFewItems { needed: usize, got: usize },
    #[error("temperature must be positive, got {0}")]
    InvalidTemperature(f64),
    #[error("annealing schedule needs at least 10 steps, got {0}")]
    ScheduleTooShort(u64),
    #[error("empty result set")]
    EmptyResults,
    #[error("DP table of {0} cells exceeds the oracle limit")]
    DpTableTooLarge(u128),
    #[error("exhaustive search limited to 20 items, got {0}")]
    ExhaustiveTooLarge(usize),
    #[error("io error: {0}")]
    Io(String),
    #[error("json error: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
