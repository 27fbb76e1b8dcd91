use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An order `k` outside `0..=max` for a vector of length `m`.
    OrderOutOfRange { k: usize, max: usize },
    IndexOutOfRange { index: usize, len: usize },
    InvalidVector(&'static str),
    /// A quantity the caller promised to be nonzero/positive was not.
    Precondition(String),
    OutOfDomain { r: f64, r_max: f64 },
    Singular { r: f64 },
    InvalidSpace(String),
    SamplingExhausted { attempts: usize },
    OracleTooLarge { m: usize },
    Incompatible(String),
    DegenerateNode { index: usize },
    Unsupported(String),
    /// A theorem hypothesis failed at a specific sample.
    HypothesisViolation { what: String, sample: Option<usize> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OrderOutOfRange { k, max } => write!(f, "order {k} out of range 0..={max}"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::InvalidVector(why) => write!(f, "invalid curvature vector: {why}"),
            Error::Precondition(why) => write!(f, "precondition violated: {why}"),
            Error::OutOfDomain { r, r_max } => write!(f, "radius {r} outside [0, {r_max})"),
            Error::Singular { r } => write!(f, "warping function vanishes at r = {r}"),
            Error::InvalidSpace(why) => write!(f, "cannot construct space: {why}"),
            Error::SamplingExhausted { attempts } => {
                write!(f, "rejection sampler gave up after {attempts} attempts")
            }
            Error::OracleTooLarge { m } => write!(f, "oracle refuses dimension {m} (max 6)"),
            Error::Incompatible(why) => write!(f, "incompatible surface/space: {why}"),
            Error::DegenerateNode { index } => {
                write!(f, "induced metric is singular at node {index}")
            }
            Error::Unsupported(why) => write!(f, "unsupported: {why}"),
            Error::HypothesisViolation { what, sample: Some(i) } => {
                write!(f, "hypothesis violated at sample {i}: {what}")
            }
            Error::HypothesisViolation { what, sample: None } => write!(f, "hypothesis violated: {what}"),
        }
    }
}

impl core::error::Error for Error {}
