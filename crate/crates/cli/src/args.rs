use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conformity::{Pairing, RiskClass};

#[derive(Debug, Parser)]
#[command(name = "conformity", version, about = "Sampling plans for market surveillance inspections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point estimate and one-sided lower confidence bound of the conformity rate
    Estimate(EstimateArgs),
    /// Minimal sample size by interval width or by test power
    Size {
        #[command(subcommand)]
        variant: SizeCommand,
    },
    /// Decide whether the conformity rate is below the acceptable rate
    Decide(DecideArgs),
    /// Probability that the test detects a population with the given rate
    Power(PowerArgs),
    /// Pick the cheaper of the interval-estimate and hypothesis-test sizes
    Plan(PlanArgs),
    /// Size a pilot sample whose estimate seeds the final plan
    TwoStage(TwoStageArgs),
    /// Emit plot data as CSV
    Curve(CurveArgs),
    /// Check an approximation against exact binomial sums and Monte Carlo
    Validate(ValidateArgs),
    /// Reproduce the reference sample-size tables as CSV
    Tables(TablesArgs),
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Parses a decimal probability in [0, 1]; percent signs are refused.
pub fn probability(s: &str) -> Result<f64, String> {
    if s.contains('%') {
        return Err(format!("{s:?}: give probabilities as decimals (0.80, not 80%)"));
    }
    let value: f64 = s.trim().parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(0.0..=1.0).contains(&value) {
        return Err(format!("{s} is not a probability in [0, 1]"));
    }
    Ok(value)
}

pub fn positive_real(s: &str) -> Result<f64, String> {
    let value: f64 = s.trim().parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(value.is_finite() && value > 0.0) {
        return Err(format!("{s} must be a positive number"));
    }
    Ok(value)
}

pub fn risk_class(s: &str) -> Result<RiskClass, String> {
    s.parse().map_err(|e: conformity::Error| e.to_string())
}

pub fn pairing(s: &str) -> Result<Pairing, String> {
    s.parse().map_err(|e: conformity::Error| e.to_string())
}

/// `--risk` or `--acr`; `--acr` wins when both are present.
#[derive(Debug, Clone, Args)]
pub struct AcrArgs {
    /// Product risk class: low, medium, high or serious
    #[arg(long, value_parser = risk_class)]
    pub risk: Option<RiskClass>,
    /// Acceptable conformity rate, overriding --risk
    #[arg(long, value_parser = probability)]
    pub acr: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub d: u64,
    /// Level of confidence
    #[arg(long, value_parser = probability, default_value_t = 0.80)]
    pub lc: f64,
}

#[derive(Debug, Subcommand)]
pub enum SizeCommand {
    /// Size from the accepted width between estimate and lower bound
    Interval(SizeIntervalArgs),
    /// Size from producer's and consumers' risk
    Power(SizePowerArgs),
}

#[derive(Debug, Args)]
pub struct SizeIntervalArgs {
    #[arg(long, value_parser = positive_real)]
    pub w: f64,
    #[arg(long, value_parser = probability, default_value_t = 0.80)]
    pub lc: f64,
    /// Preliminary conformity rate
    #[arg(long, value_parser = probability)]
    pub fp: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SizePowerArgs {
    #[command(flatten)]
    pub acr: AcrArgs,
    /// Producer's risk
    #[arg(long, value_parser = probability, default_value_t = 0.2)]
    pub alpha: f64,
    /// Consumers' risk (1 - power)
    #[arg(long, value_parser = probability, default_value_t = 0.1)]
    pub beta: f64,
    #[arg(long, value_parser = probability)]
    pub fp: f64,
    #[arg(long, value_parser = pairing, default_value = "canonical")]
    pub pairing: Pairing,
    /// Explicit z-multiplier for alpha
    #[arg(long = "z-alpha", value_parser = positive_real)]
    pub z_alpha: Option<f64>,
    /// Explicit z-multiplier for beta
    #[arg(long = "z-beta", value_parser = positive_real)]
    pub z_beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub d: u64,
    #[command(flatten)]
    pub acr: AcrArgs,
    #[arg(long, value_parser = probability, default_value_t = 0.80)]
    pub lc: f64,
    /// Drop the 1/(2n) continuity correction
    #[arg(long)]
    pub no_continuity: bool,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[arg(long)]
    pub n: u64,
    /// Real conformity rate of the population
    #[arg(long, value_parser = probability)]
    pub fr: f64,
    #[command(flatten)]
    pub acr: AcrArgs,
    #[arg(long, value_parser = probability, default_value_t = 0.80)]
    pub lc: f64,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long, value_parser = risk_class)]
    pub risk: RiskClass,
    #[arg(long, value_parser = probability, default_value_t = 0.80)]
    pub lc: f64,
    #[arg(long, value_parser = positive_real, default_value_t = 0.1)]
    pub w: f64,
    #[arg(long, value_parser = probability, default_value_t = 0.1)]
    pub beta: f64,
    #[arg(long, value_parser = probability)]
    pub fp: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TwoStageArgs {
    #[arg(long, value_parser = risk_class)]
    pub risk: RiskClass,
    #[arg(long, value_parser = probability, default_value_t = 0.80)]
    pub lc: f64,
    /// Width of the final interval estimate
    #[arg(long, value_parser = positive_real, default_value_t = 0.1)]
    pub w: f64,
    #[arg(long, value_parser = probability, default_value_t = 0.1)]
    pub beta: f64,
    #[arg(long = "pilot-w", value_parser = positive_real, default_value_t = conformity::planner::DEFAULT_PILOT_WIDTH)]
    pub pilot_w: f64,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// 1: sizes vs preliminary rate, 2: power vs n, 3: size vs width
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub figure: u8,
    #[command(flatten)]
    pub acr: AcrArgs,
    #[arg(long, value_parser = probability, default_value_t = 0.80)]
    pub lc: f64,
    /// Preliminary (figures 1, 3) or real (figure 2) conformity rate
    #[arg(long, value_parser = probability)]
    pub fp: Option<f64>,
    #[arg(long, value_parser = positive_real, default_value_t = 0.1)]
    pub w: f64,
    #[arg(long, value_parser = probability, default_value_t = 0.1)]
    pub beta: f64,
    /// start:end:step grid of preliminary rates
    #[arg(long = "fp-grid", default_value = "0.5:0.8:0.05")]
    pub fp_grid: String,
    #[arg(long = "n-min", default_value_t = 5)]
    pub n_min: u64,
    #[arg(long = "n-max", default_value_t = 100)]
    pub n_max: u64,
    #[arg(long = "w-min", value_parser = positive_real, default_value_t = 0.05)]
    pub w_min: f64,
    #[arg(long = "w-max", value_parser = positive_real, default_value_t = 0.3)]
    pub w_max: f64,
    #[arg(long = "w-step", value_parser = positive_real, default_value_t = 0.01)]
    pub w_step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Coverage,
    Type1,
    Power,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    /// Real conformity rate (defaults to ACR for type1)
    #[arg(long, value_parser = probability)]
    pub fr: Option<f64>,
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub acr: AcrArgs,
    #[arg(long, value_parser = probability, default_value_t = 0.80)]
    pub lc: f64,
    #[arg(long, default_value_t = conformity::oracle::DEFAULT_TRIALS)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for the simulation; results do not depend on it
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Directory for table4.csv, table5.csv and table6.csv
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}
