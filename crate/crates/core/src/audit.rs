//! Exact-expectation incentive-compatibility auditor.
//!
//! An expert with belief `b` who reports `p` changes their own next-round
//! weight through the learner's update. The auditor computes the expert's
//! exact expected next weight,
//!
//! ```text
//! E[pi_{i,t+1}(p)] = b * pi_{i,t+1}(p, r=1) + (1 - b) * pi_{i,t+1}(p, r=0)
//! ```
//!
//! for every report on a grid and checks whether any deviation beats the
//! truthful report. Everything is an exact finite expectation: two outcomes,
//! and where an algorithm randomizes internally (the WSU-UX draw, the ELF-X
//! winner lotteries) the expectation over that randomness is folded in by
//! enumeration, never by sampling. Rerunning an audit is therefore
//! bit-identical.
//!
//! Forward-looking audits extend the same idea over several rounds: the
//! expected weight at the target round is summed over all outcome paths,
//! weighted by the audited expert's beliefs, and the search covers per-round
//! deviations (jointly for depth two, one round at a time beyond that).
//!
//! Verdicts are grid-certificates only. `IcOnGrid` says no grid deviation
//! beats truth by more than the tolerance; it is not a proof over the
//! continuum. `Violation` comes with the witnessing report, and those are
//! what reproduce the known manipulation examples against MWU, against an
//! aggregate-loss gradient learner, and against WSU under forward-looking
//! preferences.

use crate::bandit::{pi_tilde, BanditParams};
use crate::error::{CoreError, Result};
use crate::full_info::selection::{
    elfx_round_winner_probs, selection_distribution_exact, EXACT_SEQUENCE_BUDGET,
};
use crate::loss::LossFunction;
use crate::prob::{Outcome, Probability};
use crate::simplex::WeightVector;

/// Grid resolutions, tolerance, and the forward-depth cap.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditConfig {
    /// Points on the report grid over `[0, 1]`; odd so that `1/2` is a grid
    /// point.
    pub report_grid_size: usize,
    /// Points on the belief grid used by callers that sweep beliefs.
    pub belief_grid_size: usize,
    /// Gaps above this are violations; at or below, rounding.
    pub tolerance: f64,
    /// Largest forward depth accepted.
    pub horizon_depth: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            report_grid_size: 1001,
            belief_grid_size: 101,
            tolerance: 1e-9,
            horizon_depth: 3,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, size) in [
            ("report_grid_size", self.report_grid_size),
            ("belief_grid_size", self.belief_grid_size),
        ] {
            if size < 3 || size % 2 == 0 {
                return Err(CoreError::parameter(format!(
                    "{name} = {size} must be odd and at least 3"
                )));
            }
        }
        if !self.tolerance.is_finite() || self.tolerance <= 0.0 {
            return Err(CoreError::parameter("tolerance must be positive"));
        }
        if self.horizon_depth == 0 {
            return Err(CoreError::parameter("horizon_depth must be at least 1"));
        }
        Ok(())
    }

    pub fn report_grid(&self) -> impl Iterator<Item = f64> {
        let n = self.report_grid_size;
        (0..n).map(move |j| j as f64 / (n - 1) as f64)
    }

    pub fn belief_grid(&self) -> impl Iterator<Item = f64> {
        let n = self.belief_grid_size;
        (0..n).map(move |j| j as f64 / (n - 1) as f64)
    }
}

/// The audit's outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// No grid report beats truth by more than the tolerance.
    IcOnGrid,
    /// Some grid report does; see the witnessing deviation.
    Violation,
}

/// Result of one audit.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    /// Expected weight when reporting truthfully.
    pub truthful_value: f64,
    /// Best expected weight found on the grid.
    pub best_deviation_value: f64,
    /// The reports achieving it, one per audited round.
    pub best_deviation_reports: Vec<f64>,
    /// `best_deviation_value - truthful_value`.
    pub gap: f64,
    pub verdict: Verdict,
    /// Central-difference derivative of the expected weight at the truthful
    /// report (myopic audits away from the boundary only). A positive value
    /// at an interior belief is itself a manipulation certificate.
    pub truthful_derivative: Option<f64>,
}

/// The algorithm under audit, frozen at the state it holds entering the
/// audited round.
#[derive(Clone, Debug)]
pub enum AuditTarget {
    Wsu {
        pi: WeightVector,
        eta: f64,
    },
    Mwu {
        weights: Vec<f64>,
        eta: f64,
    },
    Hedge {
        weights: Vec<f64>,
        eta: f64,
    },
    WsuUx {
        pi: WeightVector,
        params: BanditParams,
    },
    /// ELF-X carries the loss rows of the rounds already played; its next
    /// distribution is the exact selection distribution over the extended
    /// history.
    ElfX {
        prior_losses: Vec<Vec<f64>>,
    },
    /// Gradient descent on the aggregate prediction's loss,
    /// `pi' = normalize(pi + 2 eta (r - <pi, p>) p)`. Audited here as a known
    /// manipulable learner; not exposed as a harness algorithm.
    GradientDescent {
        pi: WeightVector,
        eta: f64,
    },
}

impl AuditTarget {
    fn validate(&self, k: usize) -> Result<()> {
        let state_len = match self {
            AuditTarget::Wsu { pi, .. } => pi.len(),
            AuditTarget::Mwu { weights, .. } | AuditTarget::Hedge { weights, .. } => weights.len(),
            AuditTarget::WsuUx { pi, .. } => pi.len(),
            AuditTarget::ElfX { prior_losses } => {
                for (t, row) in prior_losses.iter().enumerate() {
                    if row.len() != k {
                        return Err(CoreError::dimension(format!(
                            "prior loss row {t} has {} entries for {k} experts",
                            row.len()
                        )));
                    }
                }
                k
            }
            AuditTarget::GradientDescent { pi, .. } => pi.len(),
        };
        if state_len != k {
            return Err(CoreError::dimension(format!(
                "target state covers {state_len} experts, context has {k}"
            )));
        }
        match self {
            AuditTarget::Wsu { eta, .. } => {
                if !eta.is_finite() || !(*eta > 0.0 && *eta <= 0.5) {
                    return Err(CoreError::parameter(format!(
                        "WSU step size {eta} must lie in (0, 0.5]"
                    )));
                }
            }
            AuditTarget::Mwu { weights, eta } => {
                if !eta.is_finite() || !(*eta > 0.0 && *eta < 1.0) {
                    return Err(CoreError::parameter(format!(
                        "MWU step size {eta} must lie in (0, 1)"
                    )));
                }
                validate_positive(weights)?;
            }
            AuditTarget::Hedge { weights, eta } => {
                if !eta.is_finite() || *eta <= 0.0 {
                    return Err(CoreError::parameter(format!(
                        "Hedge step size {eta} must be positive"
                    )));
                }
                validate_positive(weights)?;
            }
            AuditTarget::WsuUx { pi, params } => {
                BanditParams::new(params.eta(), params.gamma(), pi.len())?;
            }
            AuditTarget::GradientDescent { eta, .. } => {
                if !eta.is_finite() || *eta <= 0.0 {
                    return Err(CoreError::parameter(format!(
                        "gradient step size {eta} must be positive"
                    )));
                }
            }
            AuditTarget::ElfX { .. } => {}
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            AuditTarget::Wsu { .. } => "wsu",
            AuditTarget::Mwu { .. } => "mwu",
            AuditTarget::Hedge { .. } => "hedge",
            AuditTarget::WsuUx { .. } => "wsu-ux",
            AuditTarget::ElfX { .. } => "elf-x",
            AuditTarget::GradientDescent { .. } => "gradient-descent",
        }
    }
}

fn validate_positive(weights: &[f64]) -> Result<()> {
    for (i, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w <= 0.0 {
            return Err(CoreError::parameter(format!(
                "weight {i} = {w} must be positive and finite"
            )));
        }
    }
    Ok(())
}

/// One audited round: who deviates, what they believe, and what everyone
/// else reports. The audited expert's slot in `reports` is overwritten by
/// each candidate report.
#[derive(Clone, Debug)]
pub struct MyopicContext {
    pub expert: usize,
    pub belief: Probability,
    pub reports: Vec<Probability>,
}

/// Several audited rounds for a forward-looking expert: their belief per
/// round and everyone's reports per round (the audited slot again
/// overwritten).
#[derive(Clone, Debug)]
pub struct ForwardContext {
    pub expert: usize,
    pub beliefs: Vec<Probability>,
    pub opponent_rows: Vec<Vec<Probability>>,
}

/// The audited expert's next weight after one round, given everyone's
/// reports and the outcome. Reports are raw so derivative probes can step
/// slightly outside `[0, 1]`.
fn audited_next_weight(
    target: &AuditTarget,
    expert: usize,
    reports: &[f64],
    outcome: Outcome,
    loss: &LossFunction,
) -> Result<f64> {
    let losses: Vec<f64> = reports.iter().map(|&p| loss.eval_raw(p, outcome)).collect();
    match target {
        AuditTarget::Wsu { pi, eta } => {
            let avg: f64 = pi.iter().zip(&losses).map(|(w, l)| w * l).sum();
            Ok(pi[expert] * (1.0 - eta * (losses[expert] - avg)))
        }
        AuditTarget::Mwu { weights, eta } => {
            let updated: Vec<f64> = weights
                .iter()
                .zip(&losses)
                .map(|(&w, &l)| w * (1.0 - eta * l))
                .collect();
            let sum: f64 = updated.iter().sum();
            Ok(updated[expert] / sum)
        }
        AuditTarget::Hedge { weights, eta } => {
            let updated: Vec<f64> = weights
                .iter()
                .zip(&losses)
                .map(|(&w, &l)| w * (-eta * l).exp())
                .collect();
            let sum: f64 = updated.iter().sum();
            Ok(updated[expert] / sum)
        }
        AuditTarget::WsuUx { pi, params } => {
            // Expectation over the drawn expert: K deterministic branches,
            // each a single-coordinate importance-weighted update.
            let tilde = pi_tilde(pi, params.gamma())?;
            let eta = params.eta();
            let mut acc = 0.0;
            for j in 0..pi.len() {
                let lhat_j = losses[j] / tilde[j];
                let inner = pi[j] * lhat_j;
                let own_lhat = if j == expert { lhat_j } else { 0.0 };
                acc += tilde[j] * pi[expert] * (1.0 - eta * (own_lhat - inner));
            }
            Ok(acc)
        }
        AuditTarget::ElfX { prior_losses } => {
            let k = reports.len();
            let mut rows = Vec::with_capacity(prior_losses.len() + 1);
            for row in prior_losses {
                rows.push(elfx_round_winner_probs(row)?);
            }
            rows.push(elfx_winner_row(&losses)?);
            Ok(selection_distribution_exact(k, &rows)?[expert])
        }
        AuditTarget::GradientDescent { pi, eta } => {
            let agg: f64 = pi.iter().zip(reports).map(|(w, p)| w * p).sum();
            let push = 2.0 * eta * (outcome.as_f64() - agg);
            let raw: Vec<f64> = pi
                .iter()
                .zip(reports)
                .map(|(&w, &p)| w + push * p)
                .collect();
            let sum: f64 = raw.iter().sum();
            if !sum.is_finite() || sum <= 1e-9 {
                return Err(CoreError::parameter(format!(
                    "gradient update mass {sum} collapsed; step size too large"
                )));
            }
            Ok(raw[expert] / sum)
        }
    }
}

/// ELF-X winner row from raw losses, tolerant of derivative probes that push
/// one loss marginally past 1.
fn elfx_winner_row(losses: &[f64]) -> Result<WeightVector> {
    let k = losses.len() as f64;
    let pool: f64 = losses.iter().sum::<f64>() / k;
    WeightVector::new(losses.iter().map(|&l| (1.0 - l + pool) / k).collect())
}

/// Exact expected next weight of the audited expert for one candidate
/// report.
pub fn myopic_expected_weight(
    target: &AuditTarget,
    ctx: &MyopicContext,
    report: f64,
    loss: &LossFunction,
) -> Result<f64> {
    let mut reports: Vec<f64> = ctx.reports.iter().map(|p| p.value()).collect();
    if ctx.expert >= reports.len() {
        return Err(CoreError::dimension(format!(
            "expert {} out of range for {} reports",
            ctx.expert,
            reports.len()
        )));
    }
    reports[ctx.expert] = report;
    let b = ctx.belief.value();
    let w1 = audited_next_weight(target, ctx.expert, &reports, Outcome::One, loss)?;
    let w0 = audited_next_weight(target, ctx.expert, &reports, Outcome::Zero, loss)?;
    Ok(b * w1 + (1.0 - b) * w0)
}

const DERIVATIVE_STEP: f64 = 1e-6;

/// Grid best-response search for one round.
pub fn myopic_audit(
    target: &AuditTarget,
    ctx: &MyopicContext,
    loss: &LossFunction,
    config: &AuditConfig,
) -> Result<AuditReport> {
    config.validate()?;
    let k = ctx.reports.len();
    if ctx.expert >= k {
        return Err(CoreError::dimension(format!(
            "expert {} out of range for {k} reports",
            ctx.expert
        )));
    }
    target.validate(k)?;
    let truthful_value = myopic_expected_weight(target, ctx, ctx.belief.value(), loss)?;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_report = 0.0;
    for p in config.report_grid() {
        let v = myopic_expected_weight(target, ctx, p, loss)?;
        if v > best_value {
            best_value = v;
            best_report = p;
        }
    }
    let b = ctx.belief.value();
    let truthful_derivative = if (DERIVATIVE_STEP..=1.0 - DERIVATIVE_STEP).contains(&b) {
        let hi = myopic_expected_weight(target, ctx, b + DERIVATIVE_STEP, loss)?;
        let lo = myopic_expected_weight(target, ctx, b - DERIVATIVE_STEP, loss)?;
        Some((hi - lo) / (2.0 * DERIVATIVE_STEP))
    } else {
        None
    };
    let gap = best_value - truthful_value;
    Ok(AuditReport {
        truthful_value,
        best_deviation_value: best_value,
        best_deviation_reports: vec![best_report],
        gap,
        verdict: if gap > config.tolerance {
            Verdict::Violation
        } else {
            Verdict::IcOnGrid
        },
        truthful_derivative,
    })
}

/// Exact expected weight of the audited expert at the target round, for a
/// full vector of own reports over the audited rounds.
pub fn forward_expected_weight(
    target: &AuditTarget,
    ctx: &ForwardContext,
    own_reports: &[f64],
    loss: &LossFunction,
) -> Result<f64> {
    let depth = ctx.beliefs.len();
    if own_reports.len() != depth || ctx.opponent_rows.len() != depth {
        return Err(CoreError::dimension(format!(
            "{} own reports and {} opponent rows for depth {depth}",
            own_reports.len(),
            ctx.opponent_rows.len()
        )));
    }
    let k = ctx
        .opponent_rows
        .first()
        .map(Vec::len)
        .ok_or_else(|| CoreError::parameter("forward audits need depth at least 1"))?;
    let state = match target {
        AuditTarget::Wsu { pi, .. } | AuditTarget::GradientDescent { pi, .. } => {
            ForwardState::Weights(pi.as_slice().to_vec())
        }
        AuditTarget::Mwu { weights, .. } | AuditTarget::Hedge { weights, .. } => {
            ForwardState::Weights(weights.clone())
        }
        AuditTarget::ElfX { prior_losses } => ForwardState::Rows(
            prior_losses
                .iter()
                .map(|row| elfx_round_winner_probs(row))
                .collect::<Result<Vec<_>>>()?,
        ),
        AuditTarget::WsuUx { .. } => {
            return Err(CoreError::unsupported(
                "forward audits cover the deterministic full-information updates and ELF-X; \
                 WSU-UX interleaves a draw per round",
            ));
        }
    };
    let mut acc = 0.0;
    forward_recurse(target, ctx, own_reports, loss, k, 0, state, 1.0, &mut acc)?;
    Ok(acc)
}

enum ForwardState {
    Weights(Vec<f64>),
    Rows(Vec<WeightVector>),
}

#[allow(clippy::too_many_arguments)]
fn forward_recurse(
    target: &AuditTarget,
    ctx: &ForwardContext,
    own_reports: &[f64],
    loss: &LossFunction,
    k: usize,
    depth: usize,
    state: ForwardState,
    prob: f64,
    acc: &mut f64,
) -> Result<()> {
    if depth == ctx.beliefs.len() {
        let value = match (&state, target) {
            (ForwardState::Weights(w), AuditTarget::Wsu { .. })
            | (ForwardState::Weights(w), AuditTarget::GradientDescent { .. }) => w[ctx.expert],
            (ForwardState::Weights(w), _) => {
                let sum: f64 = w.iter().sum();
                w[ctx.expert] / sum
            }
            (ForwardState::Rows(rows), _) => selection_distribution_exact(k, rows)?[ctx.expert],
        };
        *acc += prob * value;
        return Ok(());
    }
    let mut reports: Vec<f64> = ctx.opponent_rows[depth].iter().map(|p| p.value()).collect();
    if reports.len() != k {
        return Err(CoreError::dimension(format!(
            "opponent row {depth} has {} entries for {k} experts",
            reports.len()
        )));
    }
    reports[ctx.expert] = own_reports[depth];
    let b = ctx.beliefs[depth].value();
    for (outcome, p_outcome) in [(Outcome::One, b), (Outcome::Zero, 1.0 - b)] {
        if p_outcome == 0.0 {
            continue;
        }
        let losses: Vec<f64> = reports.iter().map(|&p| loss.eval_raw(p, outcome)).collect();
        let next = step_forward_state(target, &state, &reports, &losses, outcome)?;
        forward_recurse(
            target,
            ctx,
            own_reports,
            loss,
            k,
            depth + 1,
            next,
            prob * p_outcome,
            acc,
        )?;
    }
    Ok(())
}

fn step_forward_state(
    target: &AuditTarget,
    state: &ForwardState,
    reports: &[f64],
    losses: &[f64],
    outcome: Outcome,
) -> Result<ForwardState> {
    Ok(match (target, state) {
        (AuditTarget::Wsu { eta, .. }, ForwardState::Weights(pi)) => {
            let avg: f64 = pi.iter().zip(losses).map(|(w, l)| w * l).sum();
            ForwardState::Weights(
                pi.iter()
                    .zip(losses)
                    .map(|(&w, &l)| w * (1.0 - eta * (l - avg)))
                    .collect(),
            )
        }
        (AuditTarget::Mwu { eta, .. }, ForwardState::Weights(w)) => ForwardState::Weights(
            w.iter()
                .zip(losses)
                .map(|(&w, &l)| w * (1.0 - eta * l))
                .collect(),
        ),
        (AuditTarget::Hedge { eta, .. }, ForwardState::Weights(w)) => ForwardState::Weights(
            w.iter()
                .zip(losses)
                .map(|(&w, &l)| w * (-eta * l).exp())
                .collect(),
        ),
        (AuditTarget::GradientDescent { eta, .. }, ForwardState::Weights(pi)) => {
            let agg: f64 = pi.iter().zip(reports).map(|(w, p)| w * p).sum();
            let push = 2.0 * eta * (outcome.as_f64() - agg);
            let raw: Vec<f64> = pi
                .iter()
                .zip(reports)
                .map(|(&w, &p)| w + push * p)
                .collect();
            let sum: f64 = raw.iter().sum();
            if !sum.is_finite() || sum <= 1e-9 {
                return Err(CoreError::parameter(format!(
                    "gradient update mass {sum} collapsed; step size too large"
                )));
            }
            ForwardState::Weights(raw.into_iter().map(|w| w / sum).collect())
        }
        (AuditTarget::ElfX { .. }, ForwardState::Rows(rows)) => {
            let mut next = rows.clone();
            next.push(elfx_winner_row(losses)?);
            ForwardState::Rows(next)
        }
        _ => {
            return Err(CoreError::unsupported(
                "internal: mismatched forward state for target",
            ))
        }
    })
}

/// Grid best-response search over several rounds.
///
/// Depth 1 searches the report grid; depth 2 searches the joint grid over
/// both rounds; deeper contexts search single-round deviations with the
/// other rounds held truthful.
pub fn forward_audit(
    target: &AuditTarget,
    ctx: &ForwardContext,
    loss: &LossFunction,
    config: &AuditConfig,
) -> Result<AuditReport> {
    config.validate()?;
    let depth = ctx.beliefs.len();
    if depth == 0 || depth > config.horizon_depth {
        return Err(CoreError::parameter(format!(
            "forward depth {depth} must lie in 1..={}",
            config.horizon_depth
        )));
    }
    if ctx.opponent_rows.len() != depth {
        return Err(CoreError::dimension(format!(
            "{} opponent rows for depth {depth}",
            ctx.opponent_rows.len()
        )));
    }
    let k = ctx.opponent_rows[0].len();
    if ctx.expert >= k {
        return Err(CoreError::dimension(format!(
            "expert {} out of range for {k} experts",
            ctx.expert
        )));
    }
    target.validate(k)?;
    let paths = 1u128 << depth;
    let sequences = match target {
        AuditTarget::ElfX { prior_losses } => (k as u128)
            .checked_pow((prior_losses.len() + depth) as u32)
            .unwrap_or(u128::MAX),
        _ => 1,
    };
    if paths.saturating_mul(sequences) > EXACT_SEQUENCE_BUDGET {
        return Err(CoreError::budget(format!(
            "2^{depth} outcome paths times {sequences} winner sequences exceed the exact budget of 2^20"
        )));
    }
    let truthful: Vec<f64> = ctx.beliefs.iter().map(|b| b.value()).collect();
    let truthful_value = forward_expected_weight(target, ctx, &truthful, loss)?;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_reports = truthful.clone();
    let mut consider = |reports: &[f64], value: f64| {
        if value > best_value {
            best_value = value;
            best_reports = reports.to_vec();
        }
    };
    match depth {
        1 => {
            for p in config.report_grid() {
                let reports = [p];
                let v = forward_expected_weight(target, ctx, &reports, loss)?;
                consider(&reports, v);
            }
        }
        2 => {
            for p in config.report_grid() {
                for q in config.report_grid() {
                    let reports = [p, q];
                    let v = forward_expected_weight(target, ctx, &reports, loss)?;
                    consider(&reports, v);
                }
            }
        }
        _ => {
            for round in 0..depth {
                let mut reports = truthful.clone();
                for p in config.report_grid() {
                    reports[round] = p;
                    let v = forward_expected_weight(target, ctx, &reports, loss)?;
                    consider(&reports, v);
                }
            }
        }
    }
    let gap = best_value - truthful_value;
    Ok(AuditReport {
        truthful_value,
        best_deviation_value: best_value,
        best_deviation_reports: best_reports,
        gap,
        verdict: if gap > config.tolerance {
            Verdict::Violation
        } else {
            Verdict::IcOnGrid
        },
        truthful_derivative: None,
    })
}

/// Closed-form expected next normalized weight for MWU in the unit-weight
/// configuration: `K` experts with weight 1, opponents reporting 0, belief
/// `1/2`, quadratic loss.
///
/// ```text
/// 0.5 * (1 - eta (1-p)^2) / (K - eta (1-p)^2 - eta (K-1))
///   + 0.5 * (1 - eta p^2) / (K - eta p^2)
/// ```
///
/// Cross-checks the generic audit path.
pub fn expected_next_weight_mwu(p: Probability, k: usize, eta: f64) -> Result<f64> {
    if k < 2 {
        return Err(CoreError::parameter("closed form needs at least two experts"));
    }
    if !eta.is_finite() || !(eta > 0.0 && eta < 1.0) {
        return Err(CoreError::parameter(format!(
            "MWU step size {eta} must lie in (0, 1)"
        )));
    }
    let p = p.value();
    let kf = k as f64;
    let win = 1.0 - eta * (1.0 - p) * (1.0 - p);
    let lose = 1.0 - eta * p * p;
    Ok(0.5 * win / (kf - eta * (1.0 - p) * (1.0 - p) - eta * (kf - 1.0))
        + 0.5 * lose / (kf - eta * p * p))
}

/// The classic three-expert MWU manipulation setup: unit weights, opponents
/// at zero, belief one half, step size `sqrt(ln 3 / 100)`.
pub fn mwu_violation_context() -> (AuditTarget, MyopicContext) {
    let eta = (3f64.ln() / 100.0).sqrt();
    (
        AuditTarget::Mwu {
            weights: vec![1.0; 3],
            eta,
        },
        MyopicContext {
            expert: 0,
            belief: Probability::HALF,
            reports: vec![Probability::HALF, Probability::ZERO, Probability::ZERO],
        },
    )
}

/// The gradient-descent manipulation setup: the audited expert holds weight
/// 0.1, the opponent reports zero, belief 0.6, step size 0.1.
pub fn gd_violation_context() -> (AuditTarget, MyopicContext) {
    (
        AuditTarget::GradientDescent {
            pi: WeightVector::new(vec![0.1, 0.9]).expect("static weights are valid"),
            eta: 0.1,
        },
        MyopicContext {
            expert: 0,
            belief: Probability::new(0.6).expect("static belief is valid"),
            reports: vec![Probability::new(0.6).unwrap(), Probability::ZERO],
        },
    )
}

/// The two-round WSU forward-looking setup: two experts from uniform
/// weights, the audited expert believes (0.7, 0.6), the opponent truthfully
/// reports (0.4, 0.0).
pub fn wsu_forward_context(eta: f64) -> (AuditTarget, ForwardContext) {
    (
        AuditTarget::Wsu {
            pi: WeightVector::uniform(2).expect("uniform is valid"),
            eta,
        },
        ForwardContext {
            expert: 0,
            beliefs: vec![
                Probability::new(0.7).unwrap(),
                Probability::new(0.6).unwrap(),
            ],
            opponent_rows: vec![
                vec![Probability::ZERO, Probability::new(0.4).unwrap()],
                vec![Probability::ZERO, Probability::ZERO],
            ],
        },
    )
}
