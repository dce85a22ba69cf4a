use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::BinomialSpec;
use crate::error::{check_probability, Error, Result};
use crate::hypothesis::{critical_count, Acr};
use crate::interval::{lower_bound, SampleOutcome};
use crate::normal::ConfidenceSpec;

pub const DEFAULT_TRIALS: u64 = 100_000;

/// A population with known conformity rate, inspected `trials` times with
/// samples of `sample_size` items.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationScenario {
    pub true_conformity_rate: f64,
    pub sample_size: u64,
    pub trials: u64,
    pub seed: u64,
}

impl ValidationScenario {
    pub fn new(true_conformity_rate: f64, sample_size: u64, trials: u64, seed: u64) -> Result<Self> {
        check_probability("true conformity rate", true_conformity_rate)?;
        if sample_size == 0 {
            return Err(Error::Invalid("sample size must be at least 1".into()));
        }
        if trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        Ok(Self {
            true_conformity_rate,
            sample_size,
            trials,
            seed,
        })
    }

    fn defect_law(&self) -> BinomialSpec {
        BinomialSpec::new(self.sample_size, 1.0 - self.true_conformity_rate).expect("validated on construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// Fraction of samples whose lower bound does not exceed the real rate.
    Coverage,
    /// Fraction of samples rejected when the real rate equals ACR.
    TypeI,
    /// Fraction of samples not rejected when the real rate is below ACR.
    TypeII,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub scenario: ValidationScenario,
    pub metric: Metric,
    pub empirical_rate: f64,
    pub standard_error: f64,
    pub trials: u64,
    pub seed: u64,
    /// The same rate computed from exact binomial probabilities.
    pub exact_rate: f64,
}

impl ValidationReport {
    fn from_hits(scenario: &ValidationScenario, metric: Metric, hits: u64, exact_rate: f64) -> Self {
        let rate = hits as f64 / scenario.trials as f64;
        Self {
            scenario: *scenario,
            metric,
            empirical_rate: rate,
            standard_error: (rate * (1.0 - rate) / scenario.trials as f64).sqrt(),
            trials: scenario.trials,
            seed: scenario.seed,
            exact_rate,
        }
    }

    /// Distance between the empirical and exact rates in standard errors.
    /// Infinite when the standard error is zero and the rates differ.
    pub fn z_score(&self) -> f64 {
        let gap = (self.empirical_rate - self.exact_rate).abs();
        if gap == 0.0 {
            0.0
        } else {
            gap / self.standard_error
        }
    }
}

/// Draws the non-conforming count of every trial.
///
/// Trial `i` draws from its own ChaCha keystream (key from `seed`, stream
/// `i`), so the output depends only on the scenario and not on how many
/// rayon workers run the loop.
pub fn simulate_inspections(scenario: &ValidationScenario) -> Vec<u64> {
    let law = Binomial::new(scenario.sample_size, 1.0 - scenario.true_conformity_rate)
        .expect("probability validated on construction");
    (0..scenario.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
            rng.set_stream(trial);
            law.sample(&mut rng)
        })
        .collect()
}

/// Exact probability that the lower bound does not exceed the real rate.
pub fn exact_coverage(sample_size: u64, true_conformity_rate: f64, confidence: &ConfidenceSpec) -> Result<f64> {
    let law = BinomialSpec::new(sample_size, 1.0 - true_conformity_rate)?;
    let covered = covered_counts(sample_size, true_conformity_rate, confidence)?;
    Ok((0..=sample_size)
        .filter(|&d| covered[d as usize])
        .map(|d| law.pmf_unchecked(d))
        .sum())
}

fn covered_counts(n: u64, true_rate: f64, confidence: &ConfidenceSpec) -> Result<Vec<bool>> {
    (0..=n)
        .map(|d| Ok(lower_bound(SampleOutcome::new(n, d)?, confidence)?.lower_bound <= true_rate))
        .collect()
}

/// Monte Carlo coverage of the lower confidence bound.
pub fn validate_coverage(scenario: &ValidationScenario, confidence: &ConfidenceSpec) -> Result<ValidationReport> {
    let covered = covered_counts(scenario.sample_size, scenario.true_conformity_rate, confidence)?;
    let hits = simulate_inspections(scenario)
        .into_iter()
        .filter(|&d| covered[d as usize])
        .count() as u64;
    let exact = exact_coverage(scenario.sample_size, scenario.true_conformity_rate, confidence)?;
    Ok(ValidationReport::from_hits(scenario, Metric::Coverage, hits, exact))
}

/// Monte Carlo error rate of the continuity-corrected rejection rule.
///
/// At `true_conformity_rate == acr` this is the producer's risk (type I);
/// below ACR it is the consumers' risk (type II, samples not rejected).
/// Above ACR neither error is defined and the call fails.
pub fn validate_test_errors(
    scenario: &ValidationScenario,
    acr: impl Into<Acr>,
    confidence: &ConfidenceSpec,
) -> Result<ValidationReport> {
    let acr = acr.into();
    let fr = scenario.true_conformity_rate;
    if fr > acr.value() {
        return Err(Error::OutOfRange {
            name: "true conformity rate",
            value: fr,
            expected: "a rate not above ACR (test errors are undefined above it)",
        });
    }
    let metric = if fr == acr.value() { Metric::TypeI } else { Metric::TypeII };
    let n = scenario.sample_size;
    let critical = critical_count(n, acr, confidence, true);
    let rejects = |d: u64| critical.is_some_and(|c| d >= c);
    let rejected = simulate_inspections(scenario).into_iter().filter(|&d| rejects(d)).count() as u64;
    let exact_reject = match critical {
        Some(c) => scenario.defect_law().cdf_upper(c)?,
        None => 0.0,
    };
    let report = match metric {
        Metric::TypeI => ValidationReport::from_hits(scenario, metric, rejected, exact_reject),
        _ => ValidationReport::from_hits(scenario, metric, scenario.trials - rejected, 1.0 - exact_reject),
    };
    Ok(report)
}
