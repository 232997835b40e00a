//! The `audit` subcommand: builds audit jobs from a context file or from
//! the built-in examples, runs them, and renders the report as text.
//!
//! Context files are TOML. Shared keys: `kind` (`myopic` or `forward`),
//! `algorithm` (`wsu`, `mwu`, `hedge`, `wsu-ux`, `elf-x`,
//! `gradient-descent`), `expert`, and the algorithm's state (`pi` or
//! `weights` or `prior_losses`, plus `eta` and, for wsu-ux, `gamma`).
//! Myopic jobs take `belief` and `reports`; forward jobs take `beliefs` and
//! `opponent_rows`. Report rows include a slot for the audited expert; the
//! auditor overwrites it with each candidate report. Grid and tolerance
//! keys (`report_grid_size`, `belief_grid_size`, `tolerance`,
//! `horizon_depth`) override the audit defaults.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{HarnessError, Result};
use wagerlearn_core::{
    forward_audit, gd_violation_context, mwu_violation_context, myopic_audit, probabilities,
    wsu_forward_context, AuditConfig, AuditReport, AuditTarget, BanditParams, ForwardContext,
    LossFunction, MyopicContext, Probability, Verdict, WeightVector,
};

pub const BUILTIN_NAMES: [&str; 3] = ["mwu", "gd", "wsu-forward"];

#[derive(Debug)]
pub enum AuditJob {
    Myopic {
        target: AuditTarget,
        ctx: MyopicContext,
    },
    Forward {
        target: AuditTarget,
        ctx: ForwardContext,
    },
}

#[derive(Debug)]
pub struct AuditRequest {
    pub name: String,
    pub job: AuditJob,
    pub config: AuditConfig,
}

impl AuditRequest {
    pub fn run(&self) -> Result<AuditReport> {
        let loss = LossFunction::quadratic();
        let report = match &self.job {
            AuditJob::Myopic { target, ctx } => myopic_audit(target, ctx, &loss, &self.config)?,
            AuditJob::Forward { target, ctx } => forward_audit(target, ctx, &loss, &self.config)?,
        };
        Ok(report)
    }

    fn kind(&self) -> &'static str {
        match &self.job {
            AuditJob::Myopic { .. } => "myopic",
            AuditJob::Forward { .. } => "forward",
        }
    }
}

/// The narrated examples: `mwu` (a myopic overclaim that MWU rewards),
/// `gd` (the gradient learner paying for a push past the belief), and
/// `wsu-forward` (the two-round WSU context; honest below the step-size
/// crossover, manipulable above it). `eta` overrides the step size where
/// the example has one.
pub fn builtin(name: &str, eta: Option<f64>) -> Result<AuditRequest> {
    let (job_name, job) = match name {
        "mwu" => {
            let (mut target, ctx) = mwu_violation_context();
            if let (AuditTarget::Mwu { eta: slot, .. }, Some(eta)) = (&mut target, eta) {
                *slot = eta;
            }
            ("mwu", AuditJob::Myopic { target, ctx })
        }
        "gd" | "gradient-descent" => {
            let (mut target, ctx) = gd_violation_context();
            if let (AuditTarget::GradientDescent { eta: slot, .. }, Some(eta)) = (&mut target, eta)
            {
                *slot = eta;
            }
            ("gradient-descent", AuditJob::Myopic { target, ctx })
        }
        "wsu-forward" => {
            let (target, ctx) = wsu_forward_context(eta.unwrap_or(0.2));
            ("wsu-forward", AuditJob::Forward { target, ctx })
        }
        other => {
            return Err(HarnessError::validation(format!(
                "unknown builtin {other:?}; choose from {}",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    Ok(AuditRequest {
        name: job_name.to_string(),
        job,
        config: AuditConfig::default(),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ContextFile {
    kind: String,
    algorithm: String,
    expert: usize,
    eta: Option<f64>,
    gamma: Option<f64>,
    pi: Option<Vec<f64>>,
    weights: Option<Vec<f64>>,
    prior_losses: Option<Vec<Vec<f64>>>,
    belief: Option<f64>,
    reports: Option<Vec<f64>>,
    beliefs: Option<Vec<f64>>,
    opponent_rows: Option<Vec<Vec<f64>>>,
    report_grid_size: Option<usize>,
    belief_grid_size: Option<usize>,
    tolerance: Option<f64>,
    horizon_depth: Option<usize>,
}

fn need<T>(value: Option<T>, what: &str, algorithm: &str) -> Result<T> {
    value.ok_or_else(|| HarnessError::validation(format!("{algorithm} audit needs {what}")))
}

pub fn from_file(path: impl AsRef<Path>) -> Result<AuditRequest> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let file: ContextFile = toml::from_str(&text)
        .map_err(|e| HarnessError::parse(path, 0, e.message().to_string()))?;

    let alg = file.algorithm.as_str();
    let target = match alg {
        "wsu" => AuditTarget::Wsu {
            pi: WeightVector::new(need(file.pi, "pi", alg)?)?,
            eta: need(file.eta, "eta", alg)?,
        },
        "mwu" => AuditTarget::Mwu {
            weights: need(file.weights, "weights", alg)?,
            eta: need(file.eta, "eta", alg)?,
        },
        "hedge" => AuditTarget::Hedge {
            weights: need(file.weights, "weights", alg)?,
            eta: need(file.eta, "eta", alg)?,
        },
        "wsu-ux" => {
            let pi = WeightVector::new(need(file.pi, "pi", alg)?)?;
            let params = BanditParams::new(
                need(file.eta, "eta", alg)?,
                need(file.gamma, "gamma", alg)?,
                pi.len(),
            )?;
            AuditTarget::WsuUx { pi, params }
        }
        "elf-x" | "elfx" => AuditTarget::ElfX {
            prior_losses: file.prior_losses.unwrap_or_default(),
        },
        "gradient-descent" | "gd" => AuditTarget::GradientDescent {
            pi: WeightVector::new(need(file.pi, "pi", alg)?)?,
            eta: need(file.eta, "eta", alg)?,
        },
        other => {
            return Err(HarnessError::validation(format!(
                "unknown audit algorithm {other:?}"
            )))
        }
    };

    let defaults = AuditConfig::default();
    let config = AuditConfig {
        report_grid_size: file.report_grid_size.unwrap_or(defaults.report_grid_size),
        belief_grid_size: file.belief_grid_size.unwrap_or(defaults.belief_grid_size),
        tolerance: file.tolerance.unwrap_or(defaults.tolerance),
        horizon_depth: file.horizon_depth.unwrap_or(defaults.horizon_depth),
    };

    let job = match file.kind.as_str() {
        "myopic" => AuditJob::Myopic {
            target,
            ctx: MyopicContext {
                expert: file.expert,
                belief: Probability::new(need(file.belief, "belief", alg)?)?,
                reports: probabilities(&need(file.reports, "reports", alg)?)?,
            },
        },
        "forward" => {
            let rows = need(file.opponent_rows, "opponent_rows", alg)?;
            AuditJob::Forward {
                target,
                ctx: ForwardContext {
                    expert: file.expert,
                    beliefs: probabilities(&need(file.beliefs, "beliefs", alg)?)?,
                    opponent_rows: rows
                        .iter()
                        .map(|row| probabilities(row))
                        .collect::<wagerlearn_core::Result<Vec<_>>>()?,
                },
            }
        }
        other => {
            return Err(HarnessError::validation(format!(
                "kind {other:?} must be \"myopic\" or \"forward\""
            )))
        }
    };

    Ok(AuditRequest {
        name: format!("{} ({})", alg, path.display()),
        job,
        config,
    })
}

fn join_reports(reports: &[f64]) -> String {
    reports
        .iter()
        .map(|r| format!("{r:.6}"))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn format_report(request: &AuditRequest, report: &AuditReport) -> String {
    let mut out = String::new();
    writeln!(out, "audit            {} [{}]", request.name, request.kind()).expect("string write");
    writeln!(out, "truthful value   {:.12}", report.truthful_value).expect("string write");
    writeln!(
        out,
        "best deviation   {:.12}  at report(s) {}",
        report.best_deviation_value,
        join_reports(&report.best_deviation_reports)
    )
    .expect("string write");
    writeln!(out, "gap              {:+.3e}", report.gap).expect("string write");
    match report.truthful_derivative {
        Some(d) => writeln!(out, "derivative       {d:+.6e}").expect("string write"),
        None => writeln!(out, "derivative       (not taken)").expect("string write"),
    }
    let verdict = match report.verdict {
        Verdict::IcOnGrid => "IC-ON-GRID",
        Verdict::Violation => "VIOLATION",
    };
    writeln!(out, "verdict          {verdict}").expect("string write");
    out
}
