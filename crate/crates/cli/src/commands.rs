use std::fs;
use std::path::Path;

use conformity::hypothesis::{self, sample_size_power, PowerSizingSpec};
use conformity::interval::{self, coefficient_k, IntervalSizingSpec};
use conformity::oracle::{self, Metric, ValidationScenario};
use conformity::planner;
use conformity::{Acr, ConfidenceSpec, Pairing, RiskClass, SampleOutcome};
use serde::Serialize;

use crate::args::*;
use crate::envelope::{CliError, Envelope};
use crate::tables;

type CmdResult = Result<String, CliError>;

/// Resolved acceptable conformity rate plus the flags it came from.
#[derive(Debug, Clone, Copy, Serialize)]
struct AcrInput {
    acr: f64,
    risk: Option<RiskClass>,
}

fn resolve_acr(args: &AcrArgs, warnings: &mut Vec<String>) -> Result<(Acr, AcrInput), CliError> {
    let acr = match (args.acr, args.risk) {
        (Some(value), risk) => {
            if let Some(risk) = risk {
                warnings.push(format!(
                    "--acr {value} overrides --risk {risk} (ACR {})",
                    risk.acr().value()
                ));
            }
            Acr::new(value)?
        }
        (None, Some(risk)) => risk.acr(),
        (None, None) => return Err(CliError::usage("one of --risk or --acr is required")),
    };
    Ok((
        acr,
        AcrInput {
            acr: acr.value(),
            risk: args.risk,
        },
    ))
}

fn confidence(level: f64) -> Result<ConfidenceSpec, CliError> {
    Ok(ConfidenceSpec::new(level)?)
}

pub fn estimate(args: &EstimateArgs) -> CmdResult {
    #[derive(Serialize)]
    struct Inputs {
        n: u64,
        d: u64,
        lc: f64,
    }
    #[derive(Serialize)]
    struct Output {
        point: f64,
        lower_bound: f64,
        confidence_level: f64,
        z: f64,
    }
    let outcome = SampleOutcome::new(args.n, args.d)?;
    let conf = confidence(args.lc)?;
    let est = interval::lower_bound(outcome, &conf)?;
    let mut warnings = Vec::new();
    if outcome.d() == outcome.n() {
        warnings.push("every item non-conforming: lower bound held at 0".to_string());
    }
    let inputs = Inputs {
        n: args.n,
        d: args.d,
        lc: args.lc,
    };
    let result = Output {
        point: est.point,
        lower_bound: est.lower_bound,
        confidence_level: conf.level(),
        z: conf.z(),
    };
    Ok(Envelope::new("estimate", inputs, result, warnings).render())
}

pub fn size_interval(args: &SizeIntervalArgs) -> CmdResult {
    #[derive(Serialize)]
    struct Inputs {
        w: f64,
        lc: f64,
        fp: Option<f64>,
    }
    #[derive(Serialize)]
    struct Output {
        n: u64,
        k: f64,
        required: f64,
    }
    let spec = IntervalSizingSpec::new(args.w, args.fp, confidence(args.lc)?)?;
    let result = Output {
        n: interval::sample_size_interval(&spec),
        k: coefficient_k(args.w, args.fp)?,
        required: spec.required(),
    };
    let inputs = Inputs {
        w: args.w,
        lc: args.lc,
        fp: args.fp,
    };
    Ok(Envelope::new("size interval", inputs, result, Vec::new()).render())
}

pub fn size_power(args: &SizePowerArgs) -> CmdResult {
    #[derive(Serialize)]
    struct Inputs {
        #[serde(flatten)]
        acr: AcrInput,
        alpha: f64,
        beta: f64,
        z_alpha: Option<f64>,
        z_beta: Option<f64>,
        fp: f64,
        pairing: Pairing,
    }
    #[derive(Serialize)]
    struct Output {
        n: u64,
        pairing: Pairing,
        alpha: f64,
        beta: f64,
        z_alpha: f64,
        z_beta: f64,
    }
    let mut warnings = Vec::new();
    let (acr, acr_input) = resolve_acr(&args.acr, &mut warnings)?;
    let significance = match args.z_alpha {
        Some(z) => {
            warnings.push(format!("--z-alpha {z} overrides --alpha {}", args.alpha));
            ConfidenceSpec::from_z(z)?
        }
        None => risk_level("alpha", args.alpha)?,
    };
    let power = match args.z_beta {
        Some(z) => {
            warnings.push(format!("--z-beta {z} overrides --beta {}", args.beta));
            ConfidenceSpec::from_z(z)?
        }
        None => risk_level("beta", args.beta)?,
    };
    let spec = PowerSizingSpec::from_specs(acr, significance, power, args.fp, args.pairing)?;
    let n = sample_size_power(&spec)?;
    let other = match args.pairing {
        Pairing::Canonical => Pairing::Printed,
        Pairing::Printed => Pairing::Canonical,
    };
    let other_n = sample_size_power(&spec.with_pairing(other))?;
    if other_n != n {
        warnings.push(format!(
            "pairing matters here: {} pairing gives n = {n}, {} pairing gives n = {other_n}; only the canonical pairing agrees with the power formula",
            args.pairing, other
        ));
    }
    let inputs = Inputs {
        acr: acr_input,
        alpha: args.alpha,
        beta: args.beta,
        z_alpha: args.z_alpha,
        z_beta: args.z_beta,
        fp: args.fp,
        pairing: args.pairing,
    };
    let result = Output {
        n,
        pairing: args.pairing,
        alpha: spec.alpha(),
        beta: spec.beta(),
        z_alpha: spec.z_alpha(),
        z_beta: spec.z_beta(),
    };
    Ok(Envelope::new("size power", inputs, result, warnings).render())
}

fn risk_level(name: &str, risk: f64) -> Result<ConfidenceSpec, CliError> {
    if !(risk > 0.0 && risk < 0.5) {
        return Err(CliError::usage(format!("--{name} {risk} must lie in (0, 0.5)")));
    }
    confidence(1.0 - risk)
}

pub fn decide(args: &DecideArgs) -> CmdResult {
    #[derive(Serialize)]
    struct Inputs {
        n: u64,
        d: u64,
        #[serde(flatten)]
        acr: AcrInput,
        lc: f64,
        continuity: bool,
    }
    #[derive(Serialize)]
    struct Output {
        #[serde(flatten)]
        decision: hypothesis::DecisionResult,
        acr: f64,
    }
    let mut warnings = Vec::new();
    let (acr, acr_input) = resolve_acr(&args.acr, &mut warnings)?;
    let outcome = SampleOutcome::new(args.n, args.d)?;
    let conf = confidence(args.lc)?;
    let use_continuity = !args.no_continuity;
    let decision = hypothesis::decide(outcome, acr, &conf, use_continuity);
    if decision.degenerate {
        warnings.push(format!(
            "degenerate test: threshold {} is not positive, n = {} is too small to ever reject at this ACR and LC",
            decision.threshold, args.n
        ));
    }
    if use_continuity && decision.continuity_comparable {
        warnings.push("the 1/(2n) correction is comparable to |f - ACR|; consider --no-continuity".to_string());
    }
    let inputs = Inputs {
        n: args.n,
        d: args.d,
        acr: acr_input,
        lc: args.lc,
        continuity: use_continuity,
    };
    let result = Output {
        decision,
        acr: acr.value(),
    };
    Ok(Envelope::new("decide", inputs, result, warnings).render())
}

pub fn power(args: &PowerArgs) -> CmdResult {
    #[derive(Serialize)]
    struct Inputs {
        n: u64,
        fr: f64,
        #[serde(flatten)]
        acr: AcrInput,
        lc: f64,
    }
    #[derive(Serialize)]
    struct Output {
        power: f64,
        beta: f64,
    }
    let mut warnings = Vec::new();
    let (acr, acr_input) = resolve_acr(&args.acr, &mut warnings)?;
    let conf = confidence(args.lc)?;
    let power = hypothesis::power(args.n, args.fr, acr, &conf)?;
    if args.fr >= acr.value() {
        warnings.push(format!(
            "real rate {} is not below ACR {}: this is a false-rejection probability, not power",
            args.fr,
            acr.value()
        ));
    }
    let inputs = Inputs {
        n: args.n,
        fr: args.fr,
        acr: acr_input,
        lc: args.lc,
    };
    let result = Output {
        power,
        beta: 1.0 - power,
    };
    Ok(Envelope::new("power", inputs, result, warnings).render())
}

#[derive(Serialize)]
struct PlanInputs {
    risk: RiskClass,
    lc: f64,
    w: f64,
    beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pilot_w: Option<f64>,
}

pub fn plan(args: &PlanArgs) -> CmdResult {
    let plan = planner::make_plan(args.risk, &confidence(args.lc)?, args.w, args.beta, args.fp)?;
    let inputs = PlanInputs {
        risk: args.risk,
        lc: args.lc,
        w: args.w,
        beta: args.beta,
        fp: args.fp,
        pilot_w: None,
    };
    Ok(Envelope::new("plan", inputs, plan, Vec::new()).render())
}

pub fn two_stage(args: &TwoStageArgs) -> CmdResult {
    let plan = planner::make_two_stage_plan(args.risk, &confidence(args.lc)?, args.w, args.beta, args.pilot_w)?;
    let inputs = PlanInputs {
        risk: args.risk,
        lc: args.lc,
        w: args.w,
        beta: args.beta,
        fp: None,
        pilot_w: Some(args.pilot_w),
    };
    Ok(Envelope::new("two-stage", inputs, plan, Vec::new()).render())
}

/// Rounds away accumulated grid noise so 0.5 + 4·0.05 lands on 0.7 exactly.
fn snap(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

fn grid(start: f64, end: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0 && step.is_finite() && start.is_finite() && end.is_finite()) || end < start {
        return Err(CliError::usage(format!(
            "invalid grid {start}:{end}:{step} (need start <= end and step > 0)"
        )));
    }
    let count = ((end - start) / step + 1e-9).floor() as u64;
    if count > 1_000_000 {
        return Err(CliError::usage("grid has more than a million points"));
    }
    Ok((0..=count).map(|i| snap(start + i as f64 * step)).collect())
}

fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, end, step] = parts.as_slice() else {
        return Err(CliError::usage(format!("--fp-grid {text:?} must look like start:end:step")));
    };
    let number = |s: &str| {
        crate::args::probability(s).map_err(|e| CliError::usage(format!("--fp-grid: {e}")))
    };
    let step: f64 = step
        .parse()
        .map_err(|_| CliError::usage(format!("--fp-grid step {step:?} is not a number")))?;
    grid(number(start)?, number(end)?, step)
}

pub fn curve(args: &CurveArgs) -> CmdResult {
    let conf = confidence(args.lc)?;
    let mut warnings = Vec::new();
    let text = match args.figure {
        1 => {
            let risk = args
                .acr
                .risk
                .ok_or_else(|| CliError::usage("--figure 1 needs --risk"))?;
            let fps = parse_grid(&args.fp_grid)?;
            let rows = planner::size_comparison_curve(risk, &conf, args.w, args.beta, &fps)?;
            let mut out = String::from("fp,interval_n,hypothesis_n\n");
            for row in rows {
                let hyp = row
                    .hypothesis_size
                    .map_or_else(|| "unbounded".to_string(), |n| n.to_string());
                out.push_str(&format!("{},{},{}\n", row.preliminary_rate, row.interval_size, hyp));
            }
            out
        }
        2 => {
            let (acr, _) = resolve_acr(&args.acr, &mut warnings)?;
            let fr = args.fp.ok_or_else(|| CliError::usage("--figure 2 needs --fp (real conformity rate)"))?;
            let points = hypothesis::power_curve(args.n_min, args.n_max, fr, acr, &conf)?;
            let mut out = String::from("n,power\n");
            for (n, p) in points {
                out.push_str(&format!("{n},{p}\n"));
            }
            out
        }
        3 => {
            let widths = grid(args.w_min, args.w_max, args.w_step)?;
            let mut out = String::from("w,n\n");
            for w in widths {
                let n = interval::sample_size_interval(&IntervalSizingSpec::new(w, args.fp, conf)?);
                out.push_str(&format!("{w},{n}\n"));
            }
            out
        }
        _ => unreachable!("clap restricts --figure to 1..=3"),
    };
    match &args.out {
        None => Ok(text),
        Some(path) => {
            fs::write(path, &text).map_err(|e| CliError::io(path, e))?;
            #[derive(Serialize)]
            struct Inputs<'a> {
                figure: u8,
                out: &'a Path,
            }
            #[derive(Serialize)]
            struct Output<'a> {
                path: &'a Path,
                rows: usize,
            }
            let inputs = Inputs {
                figure: args.figure,
                out: path,
            };
            let result = Output {
                path,
                rows: text.lines().count() - 1,
            };
            Ok(Envelope::new("curve", inputs, result, warnings).render())
        }
    }
}

pub fn validate(args: &ValidateArgs) -> CmdResult {
    #[derive(Serialize)]
    struct Inputs {
        metric: &'static str,
        fr: f64,
        n: u64,
        #[serde(flatten)]
        acr: Option<AcrInput>,
        lc: f64,
        trials: u64,
        seed: u64,
    }
    let mut warnings = Vec::new();
    let conf = confidence(args.lc)?;
    let run = || -> Result<(Inputs, ReportOutput), CliError> {
        match args.metric {
            MetricArg::Coverage => {
                let fr = args
                    .fr
                    .ok_or_else(|| CliError::usage("--metric coverage needs --fr"))?;
                let scenario = ValidationScenario::new(fr, args.n, args.trials, args.seed)?;
                let report = oracle::validate_coverage(&scenario, &conf)?;
                let inputs = Inputs {
                    metric: "coverage",
                    fr,
                    n: args.n,
                    acr: None,
                    lc: args.lc,
                    trials: args.trials,
                    seed: args.seed,
                };
                Ok((inputs, report_output("coverage", &report, false)))
            }
            MetricArg::Type1 | MetricArg::Power => {
                let mut local = Vec::new();
                let (acr, acr_input) = resolve_acr(&args.acr, &mut local)?;
                let (name, fr) = match args.metric {
                    MetricArg::Type1 => {
                        let fr = args.fr.unwrap_or(acr.value());
                        if fr != acr.value() {
                            return Err(CliError::usage(format!(
                                "--metric type1 needs --fr equal to ACR {} (got {fr})",
                                acr.value()
                            )));
                        }
                        ("type1", fr)
                    }
                    _ => {
                        let fr = args.fr.ok_or_else(|| CliError::usage("--metric power needs --fr"))?;
                        if fr >= acr.value() {
                            return Err(CliError::usage(format!(
                                "--metric power needs --fr below ACR {} (got {fr})",
                                acr.value()
                            )));
                        }
                        ("power", fr)
                    }
                };
                let scenario = ValidationScenario::new(fr, args.n, args.trials, args.seed)?;
                let report = oracle::validate_test_errors(&scenario, acr, &conf)?;
                let inputs = Inputs {
                    metric: name,
                    fr,
                    n: args.n,
                    acr: Some(acr_input),
                    lc: args.lc,
                    trials: args.trials,
                    seed: args.seed,
                };
                let complement = report.metric == Metric::TypeII;
                Ok((inputs, report_output(name, &report, complement)))
            }
        }
    };
    let (inputs, result) = match args.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::usage(format!("--threads {threads}: {e}")))?
            .install(run)?,
        None => run()?,
    };
    if let Some(acr) = &inputs.acr {
        if args.acr.acr.is_some() && args.acr.risk.is_some() {
            warnings.push(format!("--acr {} overrides --risk", acr.acr));
        }
    }
    Ok(Envelope::new("validate", inputs, result, warnings).render())
}

#[derive(Serialize)]
struct ReportOutput {
    metric: &'static str,
    empirical_rate: f64,
    standard_error: f64,
    exact_rate: f64,
    z_score: f64,
    trials: u64,
    seed: u64,
}

fn report_output(metric: &'static str, report: &oracle::ValidationReport, complement: bool) -> ReportOutput {
    let (empirical, exact) = if complement {
        (1.0 - report.empirical_rate, 1.0 - report.exact_rate)
    } else {
        (report.empirical_rate, report.exact_rate)
    };
    ReportOutput {
        metric,
        empirical_rate: empirical,
        standard_error: report.standard_error,
        exact_rate: exact,
        z_score: report.z_score(),
        trials: report.trials,
        seed: report.seed,
    }
}

pub fn tables(args: &TablesArgs) -> CmdResult {
    let tables = tables::all()?;
    let files = [
        ("table4.csv", tables::to_csv(&tables.table4)),
        ("table5.csv", tables::to_csv(&tables.table5)),
        ("table6.csv", tables::to_csv(&tables.table6)),
    ];
    #[derive(Serialize)]
    struct Inputs<'a> {
        out: Option<&'a Path>,
    }
    match (&args.out, args.format) {
        (Some(dir), _) => {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            let mut written = Vec::new();
            for (name, text) in &files {
                let path = dir.join(name);
                fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
                written.push(path);
            }
            #[derive(Serialize)]
            struct Output {
                files: Vec<std::path::PathBuf>,
            }
            let inputs = Inputs { out: Some(dir) };
            Ok(Envelope::new("tables", inputs, Output { files: written }, Vec::new()).render())
        }
        (None, Format::Csv) => Ok(files.iter().map(|(_, text)| text.as_str()).collect::<Vec<_>>().join("\n")),
        (None, Format::Json) => Ok(Envelope::new("tables", Inputs { out: None }, tables, Vec::new()).render()),
    }
}
