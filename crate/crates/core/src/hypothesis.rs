//! Test of the hypothesis that the real conformity rate is below the
//! acceptable conformity rate (ACR), its power, and sample sizes that
//! reach a target power.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};
use crate::interval::SampleOutcome;
use crate::normal::{cdf, ConfidenceSpec};

/// Product risk class. Each class fixes an acceptable conformity rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RiskClass {
    Low,
    Medium,
    High,
    Serious,
}

impl RiskClass {
    pub const ALL: [RiskClass; 4] = [Self::Low, Self::Medium, Self::High, Self::Serious];

    pub fn acr(self) -> Acr {
        Acr(match self {
            Self::Low => 0.80,
            Self::Medium => 0.85,
            Self::High => 0.95,
            Self::Serious => 0.99,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Low => "low",
            Self::Medium => "medium",
            Self::High => "high",
            Self::Serious => "serious",
        }
    }
}

impl fmt::Display for RiskClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RiskClass {
    type Err = Error;

    /// Case-insensitive class name.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "low" => Ok(Self::Low),
            "medium" => Ok(Self::Medium),
            "high" => Ok(Self::High),
            "serious" => Ok(Self::Serious),
            _ => Err(Error::Invalid(format!(
                "unknown risk class {s:?} (expected low, medium, high or serious)"
            ))),
        }
    }
}

/// Acceptable conformity rate, strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Acr(f64);

impl Acr {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::OutOfRange {
                name: "ACR",
                value,
                expected: "a probability in (0, 1)",
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    fn variance(self) -> f64 {
        self.0 * (1.0 - self.0)
    }
}

impl From<RiskClass> for Acr {
    fn from(risk: RiskClass) -> Self {
        risk.acr()
    }
}

/// Outcome of the non-conformity test for one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionResult {
    /// The real conformity rate is declared below ACR.
    pub reject: bool,
    pub threshold: f64,
    pub point: f64,
    pub continuity_applied: bool,
    /// `1/(2n)` is at least half of `|f - ACR|`, the regime where the
    /// correction is customarily dropped.
    pub continuity_comparable: bool,
    /// The threshold is not positive, so no sample can reject.
    pub degenerate: bool,
}

/// Rejection threshold `ACR - z·sqrt(ACR(1-ACR)/n) [- 1/(2n)]`.
pub fn threshold(n: u64, acr: Acr, confidence: &ConfidenceSpec, use_continuity: bool) -> f64 {
    let nf = n as f64;
    let correction = if use_continuity { 0.5 / nf } else { 0.0 };
    acr.0 - confidence.z() * (acr.variance() / nf).sqrt() - correction
}

/// Applies the rejection rule to an observed sample.
pub fn decide(
    outcome: SampleOutcome,
    acr: impl Into<Acr>,
    confidence: &ConfidenceSpec,
    use_continuity: bool,
) -> DecisionResult {
    let acr = acr.into();
    let n = outcome.n();
    let threshold = threshold(n, acr, confidence, use_continuity);
    let point = outcome.point_estimate();
    DecisionResult {
        reject: point <= threshold,
        threshold,
        point,
        continuity_applied: use_continuity,
        continuity_comparable: 0.5 / n as f64 >= 0.5 * (point - acr.0).abs(),
        degenerate: threshold <= 0.0,
    }
}

/// Smallest non-conforming count that rejects, or `None` if no count does.
pub fn critical_count(n: u64, acr: impl Into<Acr>, confidence: &ConfidenceSpec, use_continuity: bool) -> Option<u64> {
    let acr = acr.into();
    (0..=n).find(|&d| {
        let outcome = SampleOutcome::new(n, d).expect("d ranges over 0..=n");
        decide(outcome, acr, confidence, use_continuity).reject
    })
}

/// Normal approximation to the probability that the test rejects when the
/// real conformity rate is `true_rate`.
pub fn power(n: u64, true_rate: f64, acr: impl Into<Acr>, confidence: &ConfidenceSpec) -> Result<f64> {
    let acr = acr.into();
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    if !(true_rate > 0.0 && true_rate < 1.0) {
        return Err(Error::OutOfRange {
            name: "true rate",
            value: true_rate,
            expected: "a probability in (0, 1)",
        });
    }
    let nf = n as f64;
    let numerator = nf * (acr.0 - true_rate) - confidence.z() * (nf * acr.variance()).sqrt();
    let denominator = (nf * true_rate * (1.0 - true_rate)).sqrt();
    Ok(cdf(numerator / denominator))
}

/// Which z-multiplier sits on the ACR variance term of the sample-size
/// formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// `z_α` on the ACR (null) variance, `z_β` on the preliminary-rate
    /// variance. Consistent with [`power`].
    #[default]
    Canonical,
    /// `z_α` on the preliminary-rate variance and `z_β` on the ACR variance,
    /// as the formula is commonly printed.
    Printed,
}

impl FromStr for Pairing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "canonical" => Ok(Self::Canonical),
            "printed" => Ok(Self::Printed),
            _ => Err(Error::Invalid(format!(
                "unknown pairing {s:?} (expected canonical or printed)"
            ))),
        }
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Canonical => "canonical",
            Self::Printed => "printed",
        })
    }
}

/// Inputs for sizing a sample by producer's and consumers' risk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSizingSpec {
    acr: Acr,
    /// Level `1 - α`; its z is `z_α`.
    significance: ConfidenceSpec,
    /// Level `1 - β` (the power); its z is `z_β`.
    power: ConfidenceSpec,
    preliminary_rate: f64,
    pairing: Pairing,
}

impl PowerSizingSpec {
    pub fn new(acr: impl Into<Acr>, alpha: f64, beta: f64, preliminary_rate: f64, pairing: Pairing) -> Result<Self> {
        let significance = risk_spec("alpha", alpha)?;
        let power = risk_spec("beta", beta)?;
        Self::from_specs(acr.into(), significance, power, preliminary_rate, pairing)
    }

    /// Uses explicit multipliers `z_α`, `z_β` in place of α and β.
    pub fn with_z(acr: impl Into<Acr>, z_alpha: f64, z_beta: f64, preliminary_rate: f64, pairing: Pairing) -> Result<Self> {
        Self::from_specs(
            acr.into(),
            ConfidenceSpec::from_z(z_alpha)?,
            ConfidenceSpec::from_z(z_beta)?,
            preliminary_rate,
            pairing,
        )
    }

    pub fn from_specs(
        acr: Acr,
        significance: ConfidenceSpec,
        power: ConfidenceSpec,
        preliminary_rate: f64,
        pairing: Pairing,
    ) -> Result<Self> {
        check_probability("preliminary rate", preliminary_rate)?;
        Ok(Self {
            acr,
            significance,
            power,
            preliminary_rate,
            pairing,
        })
    }

    pub fn acr(&self) -> Acr {
        self.acr
    }

    pub fn alpha(&self) -> f64 {
        self.significance.alpha()
    }

    pub fn beta(&self) -> f64 {
        self.power.alpha()
    }

    pub fn z_alpha(&self) -> f64 {
        self.significance.z()
    }

    pub fn z_beta(&self) -> f64 {
        self.power.z()
    }

    pub fn preliminary_rate(&self) -> f64 {
        self.preliminary_rate
    }

    pub fn pairing(&self) -> Pairing {
        self.pairing
    }

    pub fn with_pairing(self, pairing: Pairing) -> Self {
        Self { pairing, ..self }
    }
}

fn risk_spec(name: &'static str, risk: f64) -> Result<ConfidenceSpec> {
    if !(risk > 0.0 && risk < 0.5) {
        return Err(Error::OutOfRange {
            name,
            value: risk,
            expected: "a probability in (0, 0.5)",
        });
    }
    ConfidenceSpec::new(1.0 - risk)
}

/// Smallest `n` meeting the α and β requirements for the preliminary rate.
///
/// A preliminary rate at or above ACR has no finite answer and yields
/// [`Error::Unbounded`].
pub fn sample_size_power(spec: &PowerSizingSpec) -> Result<u64> {
    let acr = spec.acr.0;
    let fp = spec.preliminary_rate;
    if fp >= acr {
        return Err(Error::Unbounded(
            "preliminary rate not below ACR: required sample size unbounded".into(),
        ));
    }
    let null_sd = spec.acr.variance().sqrt();
    let alt_sd = (fp * (1.0 - fp)).sqrt();
    let (za, zb) = (spec.z_alpha(), spec.z_beta());
    let spread = match spec.pairing {
        Pairing::Canonical => za * null_sd + zb * alt_sd,
        Pairing::Printed => za * alt_sd + zb * null_sd,
    };
    let root = spread / (acr - fp);
    Ok(((root * root).ceil() as u64).max(1))
}

/// Power at every integer sample size in `n_min..=n_max`.
pub fn power_curve(
    n_min: u64,
    n_max: u64,
    true_rate: f64,
    acr: impl Into<Acr>,
    confidence: &ConfidenceSpec,
) -> Result<Vec<(u64, f64)>> {
    let acr = acr.into();
    if n_min == 0 || n_min > n_max {
        return Err(Error::Invalid(format!(
            "invalid range {n_min}..={n_max} (need 1 <= n_min <= n_max)"
        )));
    }
    (n_min..=n_max)
        .map(|n| power(n, true_rate, acr, confidence).map(|p| (n, p)))
        .collect()
}
