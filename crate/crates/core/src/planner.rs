//! Choosing between the interval-estimate and hypothesis-test sample sizes,
//! and the two-stage workflow where a pilot sample supplies the
//! preliminary conformity rate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::{sample_size_power, Pairing, PowerSizingSpec, RiskClass};
use crate::interval::{sample_size_interval, IntervalSizingSpec, SampleOutcome};
use crate::normal::ConfidenceSpec;

/// Pilot width used when none is given.
pub const DEFAULT_PILOT_WIDTH: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    IntervalEstimate,
    HypothesisTest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub method: Method,
    pub sample_size: u64,
    pub interval_size: Option<u64>,
    pub hypothesis_size: Option<u64>,
    pub risk: RiskClass,
    pub confidence: ConfidenceSpec,
    pub width: Option<f64>,
    pub beta: Option<f64>,
    pub preliminary_rate: Option<f64>,
    pub rationale: String,
}

fn power_spec(risk: RiskClass, confidence: &ConfidenceSpec, beta: f64, fp: f64) -> Result<PowerSizingSpec> {
    if !(beta > 0.0 && beta < 0.5) {
        return Err(Error::OutOfRange {
            name: "beta",
            value: beta,
            expected: "a probability in (0, 0.5)",
        });
    }
    PowerSizingSpec::from_specs(
        risk.acr(),
        *confidence,
        ConfidenceSpec::new(1.0 - beta)?,
        fp,
        Pairing::Canonical,
    )
}

/// Candidate hypothesis-test size, `None` when the preliminary rate is at
/// or above ACR and the size is unbounded.
fn hypothesis_candidate(risk: RiskClass, confidence: &ConfidenceSpec, beta: f64, fp: f64) -> Result<Option<u64>> {
    match sample_size_power(&power_spec(risk, confidence, beta, fp)?) {
        Ok(n) => Ok(Some(n)),
        Err(Error::Unbounded(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Builds a plan that uses the smaller of the two candidate sizes.
///
/// The hypothesis-test size is only a candidate when a preliminary rate
/// below ACR is known. Ties go to the interval estimate.
pub fn make_plan(
    risk: RiskClass,
    confidence: &ConfidenceSpec,
    width: f64,
    beta: f64,
    preliminary_rate: Option<f64>,
) -> Result<SamplingPlan> {
    let interval = sample_size_interval(&IntervalSizingSpec::new(width, preliminary_rate, *confidence)?);
    let acr = risk.acr().value();
    let hypothesis = match preliminary_rate {
        Some(fp) => hypothesis_candidate(risk, confidence, beta, fp)?,
        None => {
            // validate beta even when it goes unused
            power_spec(risk, confidence, beta, 0.0)?;
            None
        }
    };
    let (method, sample_size, rationale) = match (preliminary_rate, hypothesis) {
        (Some(_), Some(h)) if h < interval => (
            Method::HypothesisTest,
            h,
            format!("hypothesis-test size {h} is below interval-estimate size {interval}"),
        ),
        (Some(_), Some(h)) => (
            Method::IntervalEstimate,
            interval,
            format!("interval-estimate size {interval} does not exceed hypothesis-test size {h}"),
        ),
        (Some(fp), None) => (
            Method::IntervalEstimate,
            interval,
            format!("preliminary rate {fp} is not below ACR {acr}: hypothesis-test size unbounded"),
        ),
        (None, _) => (
            Method::IntervalEstimate,
            interval,
            "no preliminary rate: only the interval-estimate size (k = 1) is available".to_string(),
        ),
    };
    Ok(SamplingPlan {
        method,
        sample_size,
        interval_size: Some(interval),
        hypothesis_size: hypothesis,
        risk,
        confidence: *confidence,
        width: Some(width),
        beta: Some(beta),
        preliminary_rate,
        rationale,
    })
}

/// A pilot sample sized without prior knowledge, whose point estimate then
/// sizes the final sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoStagePlan {
    pub pilot: SamplingPlan,
    pub final_rule: String,
    pub pilot_width: f64,
    pub final_width: f64,
    pub beta: f64,
}

impl TwoStagePlan {
    /// Plans the second stage from the pilot's observed outcome.
    pub fn final_plan(&self, pilot_outcome: SampleOutcome) -> Result<SamplingPlan> {
        make_plan(
            self.pilot.risk,
            &self.pilot.confidence,
            self.final_width,
            self.beta,
            Some(pilot_outcome.point_estimate()),
        )
    }
}

pub fn make_two_stage_plan(
    risk: RiskClass,
    confidence: &ConfidenceSpec,
    final_width: f64,
    beta: f64,
    pilot_width: f64,
) -> Result<TwoStagePlan> {
    // validates final_width and beta
    make_plan(risk, confidence, final_width, beta, None)?;
    if pilot_width < final_width {
        return Err(Error::OutOfRange {
            name: "pilot width",
            value: pilot_width,
            expected: "a width no smaller than the final width",
        });
    }
    let pilot = make_plan(risk, confidence, pilot_width, beta, None)?;
    let final_rule = format!(
        "inspect the {} pilot items, take f_p = 1 - d/n, then re-plan at width {final_width} with that preliminary rate",
        pilot.sample_size
    );
    Ok(TwoStagePlan {
        pilot,
        final_rule,
        pilot_width,
        final_width,
        beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeComparison {
    pub preliminary_rate: f64,
    pub interval_size: u64,
    /// `None` when the preliminary rate is at or above ACR.
    pub hypothesis_size: Option<u64>,
}

/// Both candidate sizes across a grid of preliminary rates.
pub fn size_comparison_curve(
    risk: RiskClass,
    confidence: &ConfidenceSpec,
    width: f64,
    beta: f64,
    fp_grid: &[f64],
) -> Result<Vec<SizeComparison>> {
    fp_grid
        .iter()
        .map(|&fp| {
            Ok(SizeComparison {
                preliminary_rate: fp,
                interval_size: sample_size_interval(&IntervalSizingSpec::new(width, Some(fp), *confidence)?),
                hypothesis_size: hypothesis_candidate(risk, confidence, beta, fp)?,
            })
        })
        .collect()
}
