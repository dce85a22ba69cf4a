//! Point estimate, one-sided lower confidence bound and sample size from
//! the accepted interval width.
//!
//! The lower bound is the continuity-corrected Wilson score limit:
//!
//! ```text
//! f_L = [(2nf + z² − 1) − z·sqrt(z² − (2 + 1/n) + 4f(n + 1 − nf))] / (2(n + z²))
//! ```
//!
//! and the sample size for width `w` is the smallest integer
//!
//! ```text
//! n ≥ k·z²/w² + 2/w − 2z² + (z + 2)/k
//! ```
//!
//! with `k` taken from the piecewise table in [`coefficient_k`].

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::normal::ConfidenceSpec;

/// Largest accepted interval width; the coefficient table is not defined
/// beyond it.
pub const MAX_WIDTH: f64 = 0.6;

/// Inspected items `n` and non-conforming items `d` found among them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleOutcome {
    n: u64,
    d: u64,
}

impl SampleOutcome {
    pub fn new(n: u64, d: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("n must be at least 1".into()));
        }
        if d > n {
            return Err(Error::Invalid(format!("d exceeds n ({d} > {n})")));
        }
        Ok(Self { n, d })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Observed conformity rate `1 - d/n`.
    pub fn point_estimate(&self) -> f64 {
        1.0 - self.d as f64 / self.n as f64
    }
}

/// Observed conformity rate with its one-sided lower confidence bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConformityEstimate {
    pub point: f64,
    pub lower_bound: f64,
    pub confidence: ConfidenceSpec,
}

/// Lower confidence bound on the real conformity rate.
///
/// With every item non-conforming the bound is the natural floor 0. For any
/// other outcome a negative square-root argument is reported as
/// [`Error::Domain`] rather than clamped.
pub fn lower_bound(outcome: SampleOutcome, confidence: &ConfidenceSpec) -> Result<ConformityEstimate> {
    let point = outcome.point_estimate();
    let lower_bound = if outcome.d == outcome.n {
        0.0
    } else {
        let n = outcome.n as f64;
        let z = confidence.z();
        let z2 = z * z;
        let radicand = z2 - (2.0 + 1.0 / n) + 4.0 * point * (n + 1.0 - n * point);
        if radicand < 0.0 {
            return Err(Error::Domain {
                n: outcome.n,
                radicand,
            });
        }
        let raw = ((2.0 * n * point + z2 - 1.0) - z * radicand.sqrt()) / (2.0 * (n + z2));
        assert!(
            raw < point,
            "lower bound {raw} not below point estimate {point} (n = {}, d = {})",
            outcome.n,
            outcome.d
        );
        raw.max(0.0)
    };
    Ok(ConformityEstimate {
        point,
        lower_bound,
        confidence: *confidence,
    })
}

fn check_width(width: f64) -> Result<f64> {
    if width > 0.0 && width <= MAX_WIDTH {
        Ok(width)
    } else {
        Err(Error::OutOfRange {
            name: "width",
            value: width,
            expected: "a width in (0, 0.6]",
        })
    }
}

/// Variance factor `k` for the sample-size formula.
///
/// Without a preliminary rate `k = 1`. The boundary `f_p = 0.3` falls in the
/// `k = 1` band, which leaves a jump against the band below it.
pub fn coefficient_k(width: f64, preliminary_rate: Option<f64>) -> Result<f64> {
    let w = check_width(width)?;
    let Some(fp) = preliminary_rate else {
        return Ok(1.0);
    };
    let fp = check_probability("preliminary rate", fp)?;
    let half = w / 2.0;
    let k = if fp < half || fp > 1.0 - half {
        4.0 * w * (1.0 - w)
    } else if fp < 0.3 {
        4.0 * (fp + half) * (1.0 - fp - half)
    } else if fp <= 0.7 {
        1.0
    } else {
        4.0 * (fp - half) * (1.0 - fp + half)
    };
    Ok(k)
}

/// Inputs for sizing a sample by the accepted width of the lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalSizingSpec {
    width: f64,
    preliminary_rate: Option<f64>,
    confidence: ConfidenceSpec,
}

impl IntervalSizingSpec {
    pub fn new(width: f64, preliminary_rate: Option<f64>, confidence: ConfidenceSpec) -> Result<Self> {
        check_width(width)?;
        if let Some(fp) = preliminary_rate {
            check_probability("preliminary rate", fp)?;
        }
        Ok(Self {
            width,
            preliminary_rate,
            confidence,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn preliminary_rate(&self) -> Option<f64> {
        self.preliminary_rate
    }

    pub fn confidence(&self) -> &ConfidenceSpec {
        &self.confidence
    }

    pub fn coefficient(&self) -> f64 {
        coefficient_k(self.width, self.preliminary_rate).expect("validated on construction")
    }

    /// Real-valued right-hand side of the sample-size inequality.
    pub fn required(&self) -> f64 {
        let k = self.coefficient();
        let w = self.width;
        let z = self.confidence.z();
        let z2 = z * z;
        k * z2 / (w * w) + 2.0 / w - 2.0 * z2 + (z + 2.0) / k
    }
}

/// Smallest sample size meeting the width requirement.
pub fn sample_size_interval(spec: &IntervalSizingSpec) -> u64 {
    (spec.required().ceil() as u64).max(1)
}
