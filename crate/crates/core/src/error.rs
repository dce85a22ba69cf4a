use thiserror::Error;

/// Errors raised by the sampling toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its admissible range.
    #[error("{name} = {value} is out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// Invalid counts or an unrecognised name.
    #[error("{0}")]
    Invalid(String),

    /// The lower-bound closed form has a negative square-root argument.
    #[error("lower bound undefined for n = {n}: square-root argument {radicand} is negative")]
    Domain { n: u64, radicand: f64 },

    /// Sample size grows without bound, e.g. a preliminary rate at or above ACR.
    #[error("{0}")]
    Unbounded(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfRange {
            name,
            value,
            expected: "a probability in [0, 1]",
        })
    }
}
