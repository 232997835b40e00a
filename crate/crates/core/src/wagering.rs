//! The weighted-score wagering payoff and its reduction to a learner update.
//!
//! Each agent stakes a wager `w_i` and reports `p_i`; once the outcome `r`
//! lands, agent `i` is paid
//!
//! ```text
//! Gamma_i = w_i * (1 - l(p_i, r) + sum_j w_j * l(p_j, r))
//! ```
//!
//! With wagers on the simplex and a loss bounded by `[0, 1]`, every payoff is
//! non-negative and the payoffs sum back to the total wager, so the vector of
//! payoffs is itself a probability distribution. That closure property is what
//! [`reduce_to_learner`] exploits: feed the current weight vector in as the
//! wagers and read the next weight vector off as the payoffs. A proper loss
//! makes the payoff maximal in expectation at the truthful report, and the
//! learner built this way inherits that incentive property.

use crate::error::{CoreError, Result};
use crate::loss::LossFunction;
use crate::prob::{Outcome, Probability};
use crate::simplex::WeightVector;

/// One settled round of wagering: reports, normalized wagers, and the outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct WagerProfile {
    reports: Vec<Probability>,
    wagers: WeightVector,
    outcome: Outcome,
}

impl WagerProfile {
    pub fn new(reports: Vec<Probability>, wagers: WeightVector, outcome: Outcome) -> Result<Self> {
        if reports.len() != wagers.len() {
            return Err(CoreError::dimension(format!(
                "{} reports for {} wagers",
                reports.len(),
                wagers.len()
            )));
        }
        Ok(WagerProfile {
            reports,
            wagers,
            outcome,
        })
    }

    pub fn reports(&self) -> &[Probability] {
        &self.reports
    }

    pub fn wagers(&self) -> &WeightVector {
        &self.wagers
    }

    pub fn outcome(&self) -> Outcome {
        self.outcome
    }

    pub fn len(&self) -> usize {
        self.reports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reports.is_empty()
    }
}

/// Weighted-score payoffs for one settled profile.
///
/// The output is non-negative, sums to the total wager (here 1), and each
/// entry is linear in the agent's own loss.
pub fn wswm_payoffs(profile: &WagerProfile, loss: &LossFunction) -> Vec<f64> {
    let r = profile.outcome();
    let losses: Vec<f64> = profile.reports().iter().map(|&p| loss.eval(p, r)).collect();
    let pool: f64 = profile
        .wagers()
        .iter()
        .zip(&losses)
        .map(|(w, l)| w * l)
        .sum();
    profile
        .wagers()
        .iter()
        .zip(&losses)
        .map(|(w, l)| w * (1.0 - l + pool))
        .collect()
}

/// Turns one round of a budget-balanced wagering mechanism into a weight
/// update: the current weights enter as wagers and the payoffs come back as
/// the next weights.
///
/// The mechanism is a black box here. If its output fails simplex validation
/// the mechanism broke its contract (budget balance or non-negativity), which
/// is reported as such rather than as a generic simplex error.
pub fn reduce_to_learner(
    mechanism: impl Fn(&WagerProfile) -> Vec<f64>,
    pi: &WeightVector,
    reports: &[Probability],
    outcome: Outcome,
) -> Result<WeightVector> {
    let profile = WagerProfile::new(reports.to_vec(), pi.clone(), outcome)?;
    let payoffs = mechanism(&profile);
    if payoffs.len() != pi.len() {
        return Err(CoreError::mechanism(format!(
            "mechanism returned {} payoffs for {} wagers",
            payoffs.len(),
            pi.len()
        )));
    }
    WeightVector::new(payoffs).map_err(|e| CoreError::mechanism(format!("payoffs are not a distribution: {e}")))
}
