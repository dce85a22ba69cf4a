//! Exact binomial probabilities and seeded Monte Carlo runs used as ground
//! truth for the normal approximations elsewhere in the crate.

mod binomial;
mod simulate;

pub use binomial::{ln_factorial, BinomialSpec};
pub use simulate::{
    exact_coverage, simulate_inspections, validate_coverage, validate_test_errors, Metric, ValidationReport,
    ValidationScenario, DEFAULT_TRIALS,
};
