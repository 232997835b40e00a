//! Full-information learners behind one stepping interface: WSU, MWU, Hedge,
//! ELF-X, and ELF, each in single-expert or aggregating prediction mode, plus
//! a doubling-trick anytime wrapper.
//!
//! Per-round updates, on loss row `l` and current distribution `pi`:
//!
//! ```text
//! WSU:    pi'_i = pi_i * (1 - eta * (l_i - <pi, l>))     eta in (0, 1/2]
//! MWU:    w'_i  = w_i * (1 - eta * l_i)                  eta in (0, 1)
//! Hedge:  w'_i  = w_i * exp(-eta * l_i)                  eta > 0
//! ```
//!
//! WSU acts on the distribution directly and needs no normalization: the
//! update is the weighted-score wagering payoff blended with the previous
//! weights, `eta * Gamma + (1 - eta) * pi`, and budget balance keeps the mass
//! at one. MWU and Hedge keep unnormalized weights and expose the normalized
//! distribution. ELF-X and ELF never reweight; they run the per-round winner
//! lotteries of [`selection`] and select the expert with the most wins so
//! far.

pub mod selection;

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{CoreError, Result};
use crate::loss::{relative_loss, LossFunction};
use crate::panel::ForecastPanel;
use crate::prob::{Outcome, Probability};
use crate::regret::{cumulative_regret, RegretSeries};
use crate::rng::RngStream;
use crate::simplex::WeightVector;
use crate::wagering::{wswm_payoffs, WagerProfile};
use selection::{
    cumulative, draw_index, elf_round_winner_probs, elfx_round_winner_probs,
    selection_distribution_exact, SelectionEstimate, SelectionSampler,
};

/// Default Hedge step size in aggregate mode with quadratic loss.
pub const HEDGE_AGGREGATE_DEFAULT_ETA: f64 = 1.0;

/// The `sqrt(ln K / T)` step size, clamped into WSU's admissible range.
///
/// The unclamped value exceeds `1/2` only for very short horizons
/// (`T < 4 ln K`); a single expert gets `1/2` since the update is then a
/// no-op for any step size.
pub fn default_full_info_eta(k: usize, horizon: usize) -> f64 {
    if k <= 1 {
        return 0.5;
    }
    let t = horizon.max(1) as f64;
    ((k as f64).ln() / t).sqrt().min(0.5)
}

/// Algorithm choice plus its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum FullInfoAlgorithm {
    Wsu { eta: f64 },
    Mwu { eta: f64 },
    Hedge { eta: f64 },
    ElfX { estimate: SelectionEstimate },
    Elf { estimate: SelectionEstimate },
}

impl FullInfoAlgorithm {
    pub fn name(&self) -> &'static str {
        match self {
            FullInfoAlgorithm::Wsu { .. } => "wsu",
            FullInfoAlgorithm::Mwu { .. } => "mwu",
            FullInfoAlgorithm::Hedge { .. } => "hedge",
            FullInfoAlgorithm::ElfX { .. } => "elf-x",
            FullInfoAlgorithm::Elf { .. } => "elf",
        }
    }
}

/// How the learner turns its distribution into a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PredictionMode {
    /// Draw one expert from `pi_t` and predict their report.
    SelectOne,
    /// Predict the weighted average report `<pi_t, p_t>`.
    Aggregate,
}

impl PredictionMode {
    pub fn name(&self) -> &'static str {
        match self {
            PredictionMode::SelectOne => "select-one",
            PredictionMode::Aggregate => "aggregate",
        }
    }
}

fn validate_losses(losses: &[f64], k: usize) -> Result<()> {
    if losses.len() != k {
        return Err(CoreError::dimension(format!(
            "{} losses for {k} experts",
            losses.len()
        )));
    }
    for (i, &l) in losses.iter().enumerate() {
        if !l.is_finite() || !(0.0..=1.0).contains(&l) {
            return Err(CoreError::parameter(format!(
                "loss entry {i} = {l} lies outside [0, 1]"
            )));
        }
    }
    Ok(())
}

/// One WSU step in the closed multiplicative form.
///
/// Agrees with the wagering composition [`wsu_update_via_wagering`] to within
/// rounding; entries at zero stay at zero exactly.
pub fn wsu_update(pi: &WeightVector, losses: &[f64], eta: f64) -> Result<WeightVector> {
    if !eta.is_finite() || !(eta > 0.0 && eta <= 0.5) {
        return Err(CoreError::parameter(format!(
            "WSU step size {eta} must lie in (0, 0.5]"
        )));
    }
    validate_losses(losses, pi.len())?;
    let centered = relative_loss(losses, pi)?;
    WeightVector::new(
        pi.iter()
            .zip(&centered)
            .map(|(&p, &c)| p * (1.0 - eta * c))
            .collect(),
    )
}

/// The same WSU step composed from the wagering mechanism:
/// `eta * Gamma(p, pi, r) + (1 - eta) * pi`.
pub fn wsu_update_via_wagering(
    pi: &WeightVector,
    reports: &[Probability],
    outcome: Outcome,
    loss: &LossFunction,
    eta: f64,
) -> Result<WeightVector> {
    if !eta.is_finite() || !(eta > 0.0 && eta <= 0.5) {
        return Err(CoreError::parameter(format!(
            "WSU step size {eta} must lie in (0, 0.5]"
        )));
    }
    let profile = WagerProfile::new(reports.to_vec(), pi.clone(), outcome)?;
    let payoffs = wswm_payoffs(&profile, loss);
    WeightVector::new(
        pi.iter()
            .zip(&payoffs)
            .map(|(&p, &g)| eta * g + (1.0 - eta) * p)
            .collect(),
    )
}

/// One MWU step on unnormalized weights.
pub fn mwu_update(weights: &[f64], losses: &[f64], eta: f64) -> Result<Vec<f64>> {
    if !eta.is_finite() || !(eta > 0.0 && eta < 1.0) {
        return Err(CoreError::parameter(format!(
            "MWU step size {eta} must lie in (0, 1)"
        )));
    }
    validate_positive_weights(weights)?;
    validate_losses(losses, weights.len())?;
    Ok(weights
        .iter()
        .zip(losses)
        .map(|(&w, &l)| w * (1.0 - eta * l))
        .collect())
}

/// One Hedge step on unnormalized weights.
pub fn hedge_update(weights: &[f64], losses: &[f64], eta: f64) -> Result<Vec<f64>> {
    if !eta.is_finite() || eta <= 0.0 {
        return Err(CoreError::parameter(format!(
            "Hedge step size {eta} must be positive"
        )));
    }
    validate_positive_weights(weights)?;
    validate_losses(losses, weights.len())?;
    Ok(weights
        .iter()
        .zip(losses)
        .map(|(&w, &l)| w * (-eta * l).exp())
        .collect())
}

fn validate_positive_weights(weights: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(CoreError::dimension("weight slice must be non-empty"));
    }
    for (i, &w) in weights.iter().enumerate() {
        if !w.is_finite() || w <= 0.0 {
            return Err(CoreError::parameter(format!(
                "weight {i} = {w} must be positive and finite"
            )));
        }
    }
    Ok(())
}

/// Normalizes positive weights into a distribution.
pub fn pi_from_weights(weights: &[f64]) -> Result<WeightVector> {
    validate_positive_weights(weights)?;
    let sum: f64 = weights.iter().sum();
    WeightVector::new(weights.iter().map(|&w| w / sum).collect())
}

#[allow(clippy::large_enum_variant)]
enum AlgState {
    Wsu {
        eta: f64,
    },
    Mult {
        weights: Vec<f64>,
        eta: f64,
        exponential: bool,
    },
    Lottery {
        elf: bool,
        estimate: SelectionEstimate,
        rows: Vec<WeightVector>,
        cums: Vec<Vec<f64>>,
        sampler: Option<SelectionSampler>,
    },
}

/// A full-information learner stepped one round at a time.
///
/// The cycle per round is [`LearnerState::distribution`] (and
/// [`LearnerState::select`] in single-expert mode) followed by
/// [`LearnerState::observe`] with that round's loss row.
pub struct LearnerState {
    k: usize,
    round: usize,
    current: WeightVector,
    state: AlgState,
    select_rng: ChaCha12Rng,
}

impl LearnerState {
    pub fn new(algorithm: FullInfoAlgorithm, k: usize, stream: RngStream) -> Result<Self> {
        if k == 0 {
            return Err(CoreError::parameter("learner needs at least one expert"));
        }
        let state = match algorithm {
            FullInfoAlgorithm::Wsu { eta } => {
                wsu_update(&WeightVector::uniform(k)?, &vec![0.0; k], eta)?;
                AlgState::Wsu { eta }
            }
            FullInfoAlgorithm::Mwu { eta } => {
                mwu_update(&vec![1.0; k], &vec![0.0; k], eta)?;
                AlgState::Mult {
                    weights: vec![1.0; k],
                    eta,
                    exponential: false,
                }
            }
            FullInfoAlgorithm::Hedge { eta } => {
                hedge_update(&vec![1.0; k], &vec![0.0; k], eta)?;
                AlgState::Mult {
                    weights: vec![1.0; k],
                    eta,
                    exponential: true,
                }
            }
            FullInfoAlgorithm::ElfX { estimate } => AlgState::Lottery {
                elf: false,
                estimate,
                rows: Vec::new(),
                cums: Vec::new(),
                sampler: sampler_for(k, estimate, stream),
            },
            FullInfoAlgorithm::Elf { estimate } => {
                if k < 2 {
                    return Err(CoreError::parameter("ELF needs at least two experts"));
                }
                AlgState::Lottery {
                    elf: true,
                    estimate,
                    rows: Vec::new(),
                    cums: Vec::new(),
                    sampler: sampler_for(k, estimate, stream),
                }
            }
        };
        Ok(LearnerState {
            k,
            round: 0,
            current: WeightVector::uniform(k)?,
            state,
            select_rng: stream.substream(0).rng(),
        })
    }

    pub fn num_experts(&self) -> usize {
        self.k
    }

    /// Rounds observed so far.
    pub fn round(&self) -> usize {
        self.round
    }

    /// The learner's current distribution `pi_t`. For the lottery learners
    /// this is the (exact or estimated) selection distribution.
    pub fn distribution(&self) -> &WeightVector {
        &self.current
    }

    /// Draws this round's expert.
    ///
    /// WSU, MWU, and Hedge sample from [`LearnerState::distribution`]. The
    /// lottery learners run a fresh winner lottery over the stored history,
    /// count wins, and break ties uniformly; with no history yet that is a
    /// uniform draw.
    pub fn select(&mut self) -> usize {
        match &self.state {
            AlgState::Lottery { cums, .. } => {
                let mut counts = vec![0u32; self.k];
                for cum in cums {
                    counts[draw_index(cum, &mut self.select_rng)] += 1;
                }
                let max = counts.iter().copied().max().unwrap_or(0);
                let tied: Vec<usize> = (0..self.k).filter(|&i| counts[i] == max).collect();
                if tied.len() == 1 {
                    tied[0]
                } else {
                    tied[self.select_rng.random_range(0..tied.len())]
                }
            }
            _ => self.current.sample(&mut self.select_rng),
        }
    }

    /// Feeds the round's loss row and advances the state.
    pub fn observe(&mut self, losses: &[f64]) -> Result<()> {
        validate_losses(losses, self.k)?;
        match &mut self.state {
            AlgState::Wsu { eta } => {
                self.current = wsu_update(&self.current, losses, *eta)?;
            }
            AlgState::Mult {
                weights,
                eta,
                exponential,
            } => {
                let updated = if *exponential {
                    hedge_update(weights, losses, *eta)?
                } else {
                    mwu_update(weights, losses, *eta)?
                };
                // Rescaling by the maximum keeps ratios intact while holding
                // the leader's weight at 1 over long horizons; the floor stops
                // hopeless experts from underflowing to a hard zero, which the
                // update preconditions would reject next round.
                let max = updated.iter().cloned().fold(f64::MIN, f64::max);
                if !max.is_finite() || max <= 0.0 {
                    return Err(CoreError::parameter(
                        "all weights underflowed to zero; step size too large for this horizon",
                    ));
                }
                *weights = updated.into_iter().map(|w| (w / max).max(1e-300)).collect();
                self.current = pi_from_weights(weights)?;
            }
            AlgState::Lottery {
                elf,
                estimate,
                rows,
                cums,
                sampler,
            } => {
                let row = if *elf {
                    elf_round_winner_probs(losses)?
                } else {
                    elfx_round_winner_probs(losses)?
                };
                cums.push(cumulative(row.as_slice()));
                if let Some(sampler) = sampler {
                    sampler.observe_round(&row);
                }
                rows.push(row);
                self.current = match estimate {
                    SelectionEstimate::Exact => selection_distribution_exact(self.k, rows)?,
                    SelectionEstimate::Sampled { .. } => sampler
                        .as_ref()
                        .expect("sampled mode always carries a sampler")
                        .estimate()?,
                };
            }
        }
        self.round += 1;
        Ok(())
    }
}

fn sampler_for(k: usize, estimate: SelectionEstimate, stream: RngStream) -> Option<SelectionSampler> {
    match estimate {
        SelectionEstimate::Exact => None,
        SelectionEstimate::Sampled { num_samples } => Some(SelectionSampler::new(
            k,
            num_samples.max(1),
            stream.substream(1).rng(),
        )),
    }
}

/// Everything recorded from one full-information run.
#[derive(Clone, Debug)]
pub struct FullInfoRun {
    pub series: RegretSeries,
    /// `pi_t` before each round's prediction.
    pub pi_history: Vec<WeightVector>,
    /// The learner's realized per-round losses.
    pub learner_losses: Vec<f64>,
    /// Drawn expert per round in single-expert mode, `None` in aggregate
    /// mode.
    pub chosen: Vec<Option<usize>>,
}

fn play_round(
    learner: &mut LearnerState,
    panel: &ForecastPanel,
    mode: PredictionMode,
    loss: &LossFunction,
    t: usize,
) -> Result<(f64, Option<usize>)> {
    let loss_row = panel.loss_row(loss, t)?;
    let (learner_loss, chosen) = match mode {
        PredictionMode::SelectOne => {
            let i = learner.select();
            (loss_row[i], Some(i))
        }
        PredictionMode::Aggregate => {
            let reports: Vec<f64> = panel.report_row(t).iter().map(|p| p.value()).collect();
            let pbar = learner.distribution().dot(&reports)?.clamp(0.0, 1.0);
            (
                loss.eval(Probability::new(pbar)?, panel.outcome(t)),
                None,
            )
        }
    };
    learner.observe(&loss_row)?;
    Ok((learner_loss, chosen))
}

/// Runs one algorithm over a whole panel.
pub fn run_full_info(
    panel: &ForecastPanel,
    algorithm: FullInfoAlgorithm,
    mode: PredictionMode,
    loss: &LossFunction,
    stream: RngStream,
) -> Result<FullInfoRun> {
    let mut learner = LearnerState::new(algorithm, panel.num_experts(), stream)?;
    let horizon = panel.horizon();
    let mut learner_losses = Vec::with_capacity(horizon);
    let mut pi_history = Vec::with_capacity(horizon);
    let mut chosen = Vec::with_capacity(horizon);
    for t in 0..horizon {
        pi_history.push(learner.distribution().clone());
        let (l, c) = play_round(&mut learner, panel, mode, loss, t)?;
        learner_losses.push(l);
        chosen.push(c);
    }
    let series = cumulative_regret(&learner_losses, panel, loss)?;
    Ok(FullInfoRun {
        series,
        pi_history,
        learner_losses,
        chosen,
    })
}

/// Reweighting algorithms the doubling wrapper can restart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DoublingBase {
    Wsu,
    Mwu,
    Hedge,
}

impl DoublingBase {
    fn with_eta(self, eta: f64) -> FullInfoAlgorithm {
        match self {
            DoublingBase::Wsu => FullInfoAlgorithm::Wsu { eta },
            DoublingBase::Mwu => FullInfoAlgorithm::Mwu { eta },
            DoublingBase::Hedge => FullInfoAlgorithm::Hedge { eta },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DoublingBase::Wsu => "wsu",
            DoublingBase::Mwu => "mwu",
            DoublingBase::Hedge => "hedge",
        }
    }
}

/// One phase of a doubling run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseInfo {
    /// First round of the phase, zero-based.
    pub first_round: usize,
    /// Last round of the phase, inclusive.
    pub last_round: usize,
    /// Step size used during the phase.
    pub eta: f64,
    /// Whether the `sqrt(ln K / n)` rate was clamped to stay admissible.
    pub eta_clamped: bool,
}

/// A doubling run: the stitched trace plus per-phase parameters.
#[derive(Clone, Debug)]
pub struct DoublingRun {
    pub run: FullInfoRun,
    pub phases: Vec<PhaseInfo>,
}

/// Anytime wrapper: restart the base learner with weights reset to uniform
/// and step size `sqrt(ln K / n)` whenever the horizon estimate `n` doubles.
///
/// Phase `n` covers rounds `(n/2, n]` (one-based), so boundaries fall after
/// rounds 1, 2, 4, 8, ... For WSU and MWU the rate is clamped to `1/2` in the
/// first phases where the raw value leaves the admissible step-size range;
/// the clamp is flagged in [`PhaseInfo`].
pub fn doubling_wrapper(
    panel: &ForecastPanel,
    base: DoublingBase,
    mode: PredictionMode,
    loss: &LossFunction,
    stream: RngStream,
) -> Result<DoublingRun> {
    let k = panel.num_experts();
    let horizon = panel.horizon();
    let mut learner_losses = Vec::with_capacity(horizon);
    let mut pi_history = Vec::with_capacity(horizon);
    let mut chosen = Vec::with_capacity(horizon);
    let mut phases = Vec::new();
    let mut phase_end = 1usize;
    let mut start = 0usize;
    let mut phase_index = 0u64;
    while start < horizon {
        let end = phase_end.min(horizon);
        let raw = if k <= 1 {
            0.5
        } else {
            ((k as f64).ln() / phase_end as f64).sqrt()
        };
        let eta = match base {
            DoublingBase::Hedge => raw,
            DoublingBase::Wsu | DoublingBase::Mwu => raw.min(0.5),
        };
        let mut learner = LearnerState::new(
            base.with_eta(eta),
            k,
            stream.substream(phase_index),
        )?;
        for t in start..end {
            pi_history.push(learner.distribution().clone());
            let (l, c) = play_round(&mut learner, panel, mode, loss, t)?;
            learner_losses.push(l);
            chosen.push(c);
        }
        phases.push(PhaseInfo {
            first_round: start,
            last_round: end - 1,
            eta,
            eta_clamped: eta != raw,
        });
        start = end;
        phase_end *= 2;
        phase_index += 1;
    }
    let series = cumulative_regret(&learner_losses, panel, loss)?;
    Ok(DoublingRun {
        run: FullInfoRun {
            series,
            pi_history,
            learner_losses,
            chosen,
        },
        phases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform2() -> WeightVector {
        WeightVector::uniform(2).unwrap()
    }

    #[test]
    fn wsu_keeps_equal_losses_fixed() {
        let pi = WeightVector::new(vec![0.3, 0.7]).unwrap();
        let next = wsu_update(&pi, &[0.4, 0.4], 0.3).unwrap();
        assert!((next[0] - 0.3).abs() < 1e-15);
        assert!((next[1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn wsu_hand_values() {
        let next = wsu_update(&uniform2(), &[0.0, 1.0], 0.1).unwrap();
        assert!((next[0] - 0.525).abs() < 1e-15);
        assert!((next[1] - 0.475).abs() < 1e-15);

        let next = wsu_update(&uniform2(), &[0.0, 1.0], 0.5).unwrap();
        assert!((next[0] - 0.625).abs() < 1e-15);
        assert!((next[1] - 0.375).abs() < 1e-15);
    }

    #[test]
    fn wsu_rejects_bad_step_sizes() {
        for eta in [0.0, -0.1, 0.501, f64::NAN] {
            assert!(wsu_update(&uniform2(), &[0.0, 1.0], eta).is_err());
        }
    }

    #[test]
    fn wsu_preserves_zero_weights() {
        let pi = WeightVector::new(vec![0.0, 1.0]).unwrap();
        let next = wsu_update(&pi, &[0.0, 1.0], 0.5).unwrap();
        assert_eq!(next[0], 0.0);
        assert_eq!(next[1], 1.0);
    }

    #[test]
    fn mwu_hand_values() {
        let w = mwu_update(&[1.0, 1.0], &[0.0, 1.0], 0.1).unwrap();
        assert_eq!(w, vec![1.0, 0.9]);
        let pi = pi_from_weights(&w).unwrap();
        assert!((pi[0] - 10.0 / 19.0).abs() < 1e-15);
        assert!((pi[1] - 9.0 / 19.0).abs() < 1e-15);

        let w = mwu_update(&[2.0, 1.0], &[1.0, 1.0], 0.5).unwrap();
        assert_eq!(w, vec![1.0, 0.5]);
        let pi = pi_from_weights(&w).unwrap();
        assert!((pi[0] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn hedge_hand_values() {
        let w = hedge_update(&[1.0, 1.0], &[0.0, 1.0], std::f64::consts::LN_2).unwrap();
        assert!((w[0] - 1.0).abs() < 1e-15);
        assert!((w[1] - 0.5).abs() < 1e-15);

        let w = hedge_update(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0], 0.7).unwrap();
        let pi = pi_from_weights(&w).unwrap();
        for i in 0..3 {
            assert!((pi[i] - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn update_ops_validate_inputs() {
        assert!(mwu_update(&[1.0, 0.0], &[0.0, 0.0], 0.1).is_err());
        assert!(mwu_update(&[1.0, 1.0], &[0.0, 1.5], 0.1).is_err());
        assert!(mwu_update(&[1.0, 1.0], &[0.0, 1.0], 1.0).is_err());
        assert!(hedge_update(&[1.0, 1.0], &[0.0, 1.0], 0.0).is_err());
        assert!(wsu_update(&uniform2(), &[0.0], 0.1).is_err());
    }

    #[test]
    fn default_eta_clamps_short_horizons() {
        assert_eq!(default_full_info_eta(2, 1), 0.5);
        assert_eq!(default_full_info_eta(1, 100), 0.5);
        let eta = default_full_info_eta(3, 100);
        assert!((eta - (3f64.ln() / 100.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_expert_run_has_zero_regret() {
        let panel = ForecastPanel::from_raw(&[vec![0.8], vec![0.3], vec![0.6]], &[1, 0, 1]).unwrap();
        let loss = LossFunction::quadratic();
        for algorithm in [
            FullInfoAlgorithm::Wsu { eta: 0.5 },
            FullInfoAlgorithm::Mwu { eta: 0.3 },
            FullInfoAlgorithm::Hedge { eta: 1.0 },
            FullInfoAlgorithm::ElfX {
                estimate: SelectionEstimate::Exact,
            },
        ] {
            let run = run_full_info(
                &panel,
                algorithm,
                PredictionMode::SelectOne,
                &loss,
                RngStream::new(1, 0),
            )
            .unwrap();
            for &r in &run.series.regret {
                assert!(r.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn elf_needs_two_experts() {
        let panel = ForecastPanel::from_raw(&[vec![0.8]], &[1]).unwrap();
        let err = run_full_info(
            &panel,
            FullInfoAlgorithm::Elf {
                estimate: SelectionEstimate::Exact,
            },
            PredictionMode::SelectOne,
            &LossFunction::quadratic(),
            RngStream::new(1, 0),
        )
        .unwrap_err();
        assert!(matches!(err, CoreError::Parameter { .. }));
    }

    #[test]
    fn one_round_select_one_is_consistent() {
        let panel = ForecastPanel::from_raw(&[vec![0.9, 0.2]], &[1]).unwrap();
        let loss = LossFunction::quadratic();
        let run = run_full_info(
            &panel,
            FullInfoAlgorithm::Wsu { eta: 0.1 },
            PredictionMode::SelectOne,
            &loss,
            RngStream::new(7, 0),
        )
        .unwrap();
        let i = run.chosen[0].unwrap();
        let row = panel.loss_row(&loss, 0).unwrap();
        assert_eq!(run.learner_losses[0], row[i]);
        assert_eq!(run.pi_history[0].as_slice(), &[0.5, 0.5]);
    }

    #[test]
    fn aggregate_round_loss_beats_expected_draw() {
        let panel = ForecastPanel::from_raw(&[vec![0.9, 0.2]], &[1]).unwrap();
        let loss = LossFunction::quadratic();
        let run = run_full_info(
            &panel,
            FullInfoAlgorithm::Wsu { eta: 0.1 },
            PredictionMode::Aggregate,
            &loss,
            RngStream::new(7, 0),
        )
        .unwrap();
        assert!((run.learner_losses[0] - 0.2025).abs() < 1e-15);
        assert!(run.learner_losses[0] <= 0.325 + 1e-12);
    }

    #[test]
    fn doubling_phases_follow_the_schedule() {
        let panel = ForecastPanel::from_raw(&vec![vec![0.1, 0.9]; 5], &[0; 5]).unwrap();
        let run = doubling_wrapper(
            &panel,
            DoublingBase::Wsu,
            PredictionMode::SelectOne,
            &LossFunction::quadratic(),
            RngStream::new(3, 0),
        )
        .unwrap();
        let bounds: Vec<(usize, usize)> = run
            .phases
            .iter()
            .map(|p| (p.first_round, p.last_round))
            .collect();
        assert_eq!(bounds, vec![(0, 0), (1, 1), (2, 3), (4, 4)]);
        assert!(run.phases[0].eta_clamped);
        assert_eq!(run.phases[0].eta, 0.5);
        let last = &run.phases[3];
        assert!(!last.eta_clamped);
        assert!((last.eta - (2f64.ln() / 8.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn doubling_single_round_uses_one_clamped_phase() {
        let panel = ForecastPanel::from_raw(&[vec![0.1, 0.9]], &[0]).unwrap();
        let run = doubling_wrapper(
            &panel,
            DoublingBase::Wsu,
            PredictionMode::Aggregate,
            &LossFunction::quadratic(),
            RngStream::new(3, 0),
        )
        .unwrap();
        assert_eq!(run.phases.len(), 1);
        assert!(run.phases[0].eta_clamped);
    }

    #[test]
    fn doubling_constant_losses_give_zero_regret() {
        let panel = ForecastPanel::from_raw(&vec![vec![0.5, 0.5]; 7], &[1; 7]).unwrap();
        let run = doubling_wrapper(
            &panel,
            DoublingBase::Mwu,
            PredictionMode::SelectOne,
            &LossFunction::quadratic(),
            RngStream::new(3, 0),
        )
        .unwrap();
        for &r in &run.run.series.regret {
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn hedge_doubling_keeps_raw_rate() {
        let panel = ForecastPanel::from_raw(&vec![vec![0.2, 0.6]; 3], &[1; 3]).unwrap();
        let run = doubling_wrapper(
            &panel,
            DoublingBase::Hedge,
            PredictionMode::Aggregate,
            &LossFunction::quadratic(),
            RngStream::new(3, 0),
        )
        .unwrap();
        assert!((run.phases[0].eta - 2f64.ln().sqrt()).abs() < 1e-15);
        assert!(!run.phases[0].eta_clamped);
    }

    #[test]
    fn mult_weights_stay_normalized_over_long_runs() {
        let panel = ForecastPanel::from_raw(&vec![vec![0.0, 1.0]; 4000], &[0; 4000]).unwrap();
        let run = run_full_info(
            &panel,
            FullInfoAlgorithm::Hedge { eta: 1.0 },
            PredictionMode::Aggregate,
            &LossFunction::quadratic(),
            RngStream::new(2, 0),
        )
        .unwrap();
        let last = run.pi_history.last().unwrap();
        assert!(last[0] > 0.999);
        assert!(last.iter().sum::<f64>() > 0.999999);
    }
}
