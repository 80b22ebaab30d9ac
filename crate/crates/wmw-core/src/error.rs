use std::fmt;

/// Which of the two samples a data error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleId {
    X,
    Y,
}

impl fmt::Display for SampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleId::X => write!(f, "x"),
            SampleId::Y => write!(f, "y"),
        }
    }
}

/// Errors raised by validation, variance estimation, and the enumeration oracle.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty sample: {which}")]
    EmptySample { which: SampleId },

    #[error("non-finite value in sample {which} at index {index}")]
    NonFiniteValue { which: SampleId, index: usize },

    #[error("sample too small: {what} requires {needed}, have {have}")]
    TooSmall {
        what: &'static str,
        needed: usize,
        have: usize,
    },

    #[error("ties present: BC requires continuous data")]
    TiesPresent,

    #[error("enumeration too large: {outcomes} outcomes exceed the guard of {guard}")]
    TooLarge { outcomes: u128, guard: u128 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
