//! Sample sizes and conformity checks for market surveillance sampling.
//!
//! Inspecting `n` items from a product population and counting `d`
//! non-conforming ones gives a binomial experiment. This crate answers the
//! questions an inspector asks of it:
//!
//! * how large a sample must be so the one-sided lower confidence bound on
//!   the conformity rate lies within a chosen width of the estimate
//!   ([`interval`]);
//! * whether the observed sample shows the conformity rate to be below the
//!   acceptable rate for the product's risk class, how likely the test is to
//!   detect a bad population, and how large a sample reaches a target power
//!   ([`hypothesis`]);
//! * which of the two sizes to use, and how to size a pilot sample first
//!   ([`planner`]).
//!
//! Every normal approximation can be checked against exact binomial sums
//! and seeded Monte Carlo runs in [`oracle`].
//!
//! ```
//! use conformity::{interval, ConfidenceSpec};
//!
//! let lc = ConfidenceSpec::new(0.80)?;
//! let spec = interval::IntervalSizingSpec::new(0.1, None, lc)?;
//! assert_eq!(interval::sample_size_interval(&spec), 93);
//! # Ok::<(), conformity::Error>(())
//! ```

pub mod error;
pub mod hypothesis;
pub mod interval;
pub mod normal;
pub mod oracle;
pub mod planner;

pub use error::{Error, Result};
pub use hypothesis::{Acr, Pairing, RiskClass};
pub use interval::SampleOutcome;
pub use normal::ConfidenceSpec;

// The guide's code blocks run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/normal.md")]
    mod normal {}
    #[doc = include_str!("../../../book/src/interval.md")]
    mod interval {}
    #[doc = include_str!("../../../book/src/hypothesis.md")]
    mod hypothesis {}
    #[doc = include_str!("../../../book/src/planning.md")]
    mod planning {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
