//! Partial-information learners: WSU-UX and the EXP3 baseline, plus the
//! bandit doubling-trick wrapper.
//!
//! Only the drawn expert's loss is revealed each round. WSU-UX mixes a
//! `gamma` share of uniform exploration into its sampling distribution and
//! feeds the importance-weighted loss estimate through a WSU-style update:
//!
//! ```text
//! pi_tilde_i = (1 - gamma) * pi_i + gamma / K
//! lhat_i     = 1{i = I_t} * l_i / pi_tilde_i
//! pi'_i      = pi_i * (1 - eta * (lhat_i - <pi, lhat>))
//! ```
//!
//! The constraints `0 < eta, gamma < 1/2` and `eta * K / gamma <= 1/2` bound
//! the estimate by `K / gamma` and keep every update on the simplex: the
//! chosen expert's multiplier never drops below `1/2` and everyone else's
//! weight weakly increases.
//!
//! EXP3 is implemented as described alongside it: sampling straight from the
//! normalized weights with no exploration mixing, and updating the chosen
//! expert by `exp(-eta * lhat)`.

use rand_chacha::ChaCha12Rng;

use crate::error::{CoreError, Result};
use crate::loss::LossFunction;
use crate::panel::ForecastPanel;
use crate::regret::{cumulative_regret, RegretSeries};
use crate::rng::RngStream;
use crate::simplex::WeightVector;

/// Step size and exploration rate for WSU-UX.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BanditParams {
    eta: f64,
    gamma: f64,
}

impl BanditParams {
    /// Validates `0 < eta, gamma < 1/2` and `eta * k / gamma <= 1/2`.
    pub fn new(eta: f64, gamma: f64, k: usize) -> Result<Self> {
        if !eta.is_finite() || !(eta > 0.0 && eta < 0.5) {
            return Err(CoreError::parameter(format!(
                "eta = {eta} must lie in (0, 1/2)"
            )));
        }
        if !gamma.is_finite() || !(gamma > 0.0 && gamma < 0.5) {
            return Err(CoreError::parameter(format!(
                "gamma = {gamma} must lie in (0, 1/2)"
            )));
        }
        if eta * k as f64 / gamma > 0.5 + 1e-12 {
            return Err(CoreError::parameter(format!(
                "eta * K / gamma = {} exceeds 1/2",
                eta * k as f64 / gamma
            )));
        }
        Ok(BanditParams { eta, gamma })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The horizon-tuned rates, before any validity check:
    /// `eta = (ln K / (4 sqrt(K) T))^(2/3)`, `gamma = (K ln K / (4 T))^(1/3)`.
    pub fn tuned_rates(k: usize, horizon: usize) -> (f64, f64) {
        let kf = k as f64;
        let t = horizon.max(1) as f64;
        let eta = (kf.ln() / (4.0 * kf.sqrt() * t)).powf(2.0 / 3.0);
        let gamma = (kf * kf.ln() / (4.0 * t)).powf(1.0 / 3.0);
        (eta, gamma)
    }

    /// Horizon-tuned parameters, failing when the horizon is too short for
    /// them to be admissible (they satisfy `eta * K / gamma = gamma`, so
    /// admissibility reduces to `gamma < 1/2`, i.e. `T > 2 K ln K`).
    pub fn tuned(k: usize, horizon: usize) -> Result<Self> {
        let (eta, gamma) = BanditParams::tuned_rates(k, horizon);
        BanditParams::new(eta, gamma, k)
    }

    /// Horizon-tuned parameters with a fallback for short horizons.
    ///
    /// When the tuned pair is inadmissible, the pair for the shortest horizon
    /// that is admissible is used instead (a smaller step and exploration
    /// rate, which is always safe). The flag reports whether the fallback
    /// fired. A single expert has `ln K = 0`, so it always takes the fixed
    /// fallback `(1/8, 1/4)`.
    pub fn tuned_or_clamped(k: usize, horizon: usize) -> (Self, bool) {
        if let Ok(params) = BanditParams::tuned(k, horizon) {
            return (params, false);
        }
        if k <= 1 {
            return (
                BanditParams {
                    eta: 0.125,
                    gamma: 0.25,
                },
                true,
            );
        }
        let kf = k as f64;
        let mut n = (2.0 * kf * kf.ln()).floor() as usize + 1;
        loop {
            if let Ok(params) = BanditParams::tuned(k, n) {
                return (params, true);
            }
            n += 1;
        }
    }
}

/// Everything observable about one bandit round.
#[derive(Clone, Debug, PartialEq)]
pub struct BanditRound {
    /// The drawn expert `I_t`.
    pub chosen: usize,
    /// The learner's distribution `pi_t` before the update.
    pub pi: WeightVector,
    /// The sampling distribution; equals `pi` for EXP3.
    pub pi_tilde: WeightVector,
    /// The importance-weighted loss estimate, zero except at `chosen`.
    pub estimated_losses: Vec<f64>,
}

/// Exploration-mixed sampling distribution `(1 - gamma) pi + gamma / K`.
pub fn pi_tilde(pi: &WeightVector, gamma: f64) -> Result<WeightVector> {
    if !gamma.is_finite() || !(0.0..1.0).contains(&gamma) {
        return Err(CoreError::parameter(format!(
            "gamma = {gamma} must lie in [0, 1)"
        )));
    }
    let floor = gamma / pi.len() as f64;
    WeightVector::new(pi.iter().map(|&p| (1.0 - gamma) * p + floor).collect())
}

fn validate_observed_loss(loss: f64) -> Result<()> {
    if !loss.is_finite() || !(0.0..=1.0).contains(&loss) {
        return Err(CoreError::parameter(format!(
            "observed loss {loss} lies outside [0, 1]"
        )));
    }
    Ok(())
}

/// WSU-UX learner state.
#[derive(Clone, Debug)]
pub struct WsuUxState {
    params: BanditParams,
    pi: WeightVector,
}

impl WsuUxState {
    pub fn new(k: usize, params: BanditParams) -> Result<Self> {
        // Re-check the exploration condition against this k; the params may
        // have been validated for a different expert count.
        let params = BanditParams::new(params.eta, params.gamma, k)?;
        Ok(WsuUxState {
            params,
            pi: WeightVector::uniform(k)?,
        })
    }

    pub fn params(&self) -> BanditParams {
        self.params
    }

    pub fn pi(&self) -> &WeightVector {
        &self.pi
    }

    pub fn pi_tilde(&self) -> Result<WeightVector> {
        pi_tilde(&self.pi, self.params.gamma)
    }

    /// The deterministic part of a step, given the drawn expert and their
    /// loss. Exposed so expectations over the draw can be folded exactly.
    pub fn update_for_choice(
        pi: &WeightVector,
        params: BanditParams,
        chosen: usize,
        observed_loss: f64,
    ) -> Result<(Vec<f64>, WeightVector, WeightVector)> {
        validate_observed_loss(observed_loss)?;
        if chosen >= pi.len() {
            return Err(CoreError::dimension(format!(
                "chosen expert {chosen} out of range for {} experts",
                pi.len()
            )));
        }
        let tilde = pi_tilde(pi, params.gamma)?;
        let denom = tilde[chosen];
        assert!(denom > 1e-15, "pi_tilde is floored at gamma / K > 0");
        let mut lhat = vec![0.0; pi.len()];
        lhat[chosen] = observed_loss / denom;
        let inner = pi[chosen] * lhat[chosen];
        let next = WeightVector::new(
            pi.iter()
                .zip(&lhat)
                .map(|(&p, &lh)| p * (1.0 - params.eta * (lh - inner)))
                .collect(),
        )?;
        Ok((lhat, tilde, next))
    }

    /// Draws an expert from `pi_tilde`, reveals that expert's loss through
    /// `observe`, and applies the update.
    pub fn step(
        &mut self,
        observe: impl FnOnce(usize) -> f64,
        rng: &mut ChaCha12Rng,
    ) -> Result<BanditRound> {
        let tilde = self.pi_tilde()?;
        let chosen = tilde.sample(rng);
        let observed = observe(chosen);
        let (lhat, tilde, next) =
            WsuUxState::update_for_choice(&self.pi, self.params, chosen, observed)?;
        let round = BanditRound {
            chosen,
            pi: self.pi.clone(),
            pi_tilde: tilde,
            estimated_losses: lhat,
        };
        self.pi = next;
        Ok(round)
    }
}

/// Default EXP3 step size `sqrt(2 ln K / (K T))`.
pub fn default_exp3_eta(k: usize, horizon: usize) -> f64 {
    if k <= 1 {
        return 0.5;
    }
    let t = horizon.max(1) as f64;
    (2.0 * (k as f64).ln() / (k as f64 * t)).sqrt()
}

/// EXP3 learner state.
#[derive(Clone, Debug)]
pub struct Exp3State {
    weights: Vec<f64>,
    eta: f64,
}

impl Exp3State {
    pub fn new(k: usize, eta: f64) -> Result<Self> {
        if k == 0 {
            return Err(CoreError::parameter("EXP3 needs at least one expert"));
        }
        if !eta.is_finite() || eta <= 0.0 {
            return Err(CoreError::parameter(format!(
                "EXP3 step size {eta} must be positive"
            )));
        }
        Ok(Exp3State {
            weights: vec![1.0; k],
            eta,
        })
    }

    pub fn pi(&self) -> Result<WeightVector> {
        crate::full_info::pi_from_weights(&self.weights)
    }

    pub fn step(
        &mut self,
        observe: impl FnOnce(usize) -> f64,
        rng: &mut ChaCha12Rng,
    ) -> Result<BanditRound> {
        let pi = self.pi()?;
        let chosen = pi.sample(rng);
        let observed = observe(chosen);
        validate_observed_loss(observed)?;
        let denom = pi[chosen];
        assert!(denom > 0.0, "sampled index always has positive probability");
        let mut lhat = vec![0.0; pi.len()];
        lhat[chosen] = observed / denom;
        self.weights[chosen] *= (-self.eta * lhat[chosen]).exp();
        let max = self.weights.iter().cloned().fold(f64::MIN, f64::max);
        for w in &mut self.weights {
            *w = (*w / max).max(1e-300);
        }
        Ok(BanditRound {
            chosen,
            pi: pi.clone(),
            pi_tilde: pi,
            estimated_losses: lhat,
        })
    }
}

/// Exact first and second moments of the importance-weighted estimator,
/// by literal enumeration of the expert draw.
///
/// Returns `(mean, second_moment)`; the mean equals the true losses and the
/// second moment equals `l_i^2 / pi_tilde_i`.
pub fn estimator_moments_check(
    pi_tilde: &WeightVector,
    losses: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    if losses.len() != pi_tilde.len() {
        return Err(CoreError::dimension(format!(
            "{} losses for {} sampling weights",
            losses.len(),
            pi_tilde.len()
        )));
    }
    for (i, &l) in losses.iter().enumerate() {
        if !l.is_finite() || !(0.0..=1.0).contains(&l) {
            return Err(CoreError::parameter(format!(
                "loss entry {i} = {l} lies outside [0, 1]"
            )));
        }
    }
    let k = losses.len();
    let mut mean = vec![0.0; k];
    let mut second = vec![0.0; k];
    for j in 0..k {
        let p_j = pi_tilde[j];
        if p_j == 0.0 {
            continue;
        }
        for i in 0..k {
            let est = if i == j { losses[i] / p_j } else { 0.0 };
            mean[i] += p_j * est;
            second[i] += p_j * est * est;
        }
    }
    Ok((mean, second))
}

/// Bandit algorithm choice plus resolved parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BanditAlgorithm {
    WsuUx { params: BanditParams },
    Exp3 { eta: f64 },
}

impl BanditAlgorithm {
    pub fn name(&self) -> &'static str {
        match self {
            BanditAlgorithm::WsuUx { .. } => "wsu-ux",
            BanditAlgorithm::Exp3 { .. } => "exp3",
        }
    }
}

enum BanditState {
    WsuUx(WsuUxState),
    Exp3(Exp3State),
}

impl BanditState {
    fn new(algorithm: BanditAlgorithm, k: usize) -> Result<Self> {
        Ok(match algorithm {
            BanditAlgorithm::WsuUx { params } => BanditState::WsuUx(WsuUxState::new(k, params)?),
            BanditAlgorithm::Exp3 { eta } => BanditState::Exp3(Exp3State::new(k, eta)?),
        })
    }

    fn step(
        &mut self,
        observe: impl FnOnce(usize) -> f64,
        rng: &mut ChaCha12Rng,
    ) -> Result<BanditRound> {
        match self {
            BanditState::WsuUx(state) => state.step(observe, rng),
            BanditState::Exp3(state) => state.step(observe, rng),
        }
    }
}

/// Everything recorded from one bandit run.
#[derive(Clone, Debug)]
pub struct BanditRun {
    pub series: RegretSeries,
    pub rounds: Vec<BanditRound>,
}

/// Runs a bandit algorithm over a panel.
///
/// The learner is handed a callback that reveals a single loss entry per
/// round, so full-information leakage is impossible by construction.
pub fn run_bandit(
    panel: &ForecastPanel,
    algorithm: BanditAlgorithm,
    loss: &LossFunction,
    stream: RngStream,
) -> Result<BanditRun> {
    let mut state = BanditState::new(algorithm, panel.num_experts())?;
    let mut rng = stream.substream(0).rng();
    let horizon = panel.horizon();
    let mut learner_losses = Vec::with_capacity(horizon);
    let mut rounds = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let loss_row = panel.loss_row(loss, t)?;
        let round = state.step(|i| loss_row[i], &mut rng)?;
        learner_losses.push(loss_row[round.chosen]);
        rounds.push(round);
    }
    let series = cumulative_regret(&learner_losses, panel, loss)?;
    Ok(BanditRun { series, rounds })
}

/// One phase of a bandit doubling run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BanditPhaseInfo {
    pub first_round: usize,
    pub last_round: usize,
    pub eta: f64,
    pub gamma: f64,
    /// Whether the horizon-tuned rates were replaced by the shortest-valid-
    /// horizon fallback.
    pub clamped: bool,
}

/// A WSU-UX doubling run: the stitched trace plus per-phase parameters.
#[derive(Clone, Debug)]
pub struct BanditDoublingRun {
    pub run: BanditRun,
    pub phases: Vec<BanditPhaseInfo>,
}

/// Anytime WSU-UX via the doubling trick, with per-phase rates retuned to the
/// doubled horizon estimate and weights reset to uniform at each boundary.
pub fn bandit_doubling_wrapper(
    panel: &ForecastPanel,
    loss: &LossFunction,
    stream: RngStream,
) -> Result<BanditDoublingRun> {
    let k = panel.num_experts();
    let horizon = panel.horizon();
    let mut learner_losses = Vec::with_capacity(horizon);
    let mut rounds = Vec::with_capacity(horizon);
    let mut phases = Vec::new();
    let mut phase_end = 1usize;
    let mut start = 0usize;
    let mut phase_index = 0u64;
    while start < horizon {
        let end = phase_end.min(horizon);
        let (params, clamped) = BanditParams::tuned_or_clamped(k, phase_end);
        let mut state = WsuUxState::new(k, params)?;
        let mut rng = stream.substream(phase_index).substream(0).rng();
        for t in start..end {
            let loss_row = panel.loss_row(loss, t)?;
            let round = state.step(|i| loss_row[i], &mut rng)?;
            learner_losses.push(loss_row[round.chosen]);
            rounds.push(round);
        }
        phases.push(BanditPhaseInfo {
            first_round: start,
            last_round: end - 1,
            eta: params.eta(),
            gamma: params.gamma(),
            clamped,
        });
        start = end;
        phase_end *= 2;
        phase_index += 1;
    }
    let series = cumulative_regret(&learner_losses, panel, loss)?;
    Ok(BanditDoublingRun {
        run: BanditRun { series, rounds },
        phases,
    })
}
