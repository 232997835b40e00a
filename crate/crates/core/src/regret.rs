//! Cumulative regret against the best fixed expert in hindsight.
//!
//! ```text
//! regret_t = sum_{s<=t} learner_loss_s - min_i sum_{s<=t} l_{i,s}
//! ```

use crate::error::{CoreError, Result};
use crate::loss::LossFunction;
use crate::panel::ForecastPanel;

/// Per-round cumulative losses and regret for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretSeries {
    /// Cumulative learner loss through each round.
    pub learner_cum: Vec<f64>,
    /// Cumulative loss of the best fixed expert through each round.
    pub best_cum: Vec<f64>,
    /// `learner_cum - best_cum` per round.
    pub regret: Vec<f64>,
    /// Index of the prefix-best expert per round; ties break to the lowest
    /// index.
    pub best_expert: Vec<usize>,
}

impl RegretSeries {
    pub fn horizon(&self) -> usize {
        self.regret.len()
    }

    pub fn final_regret(&self) -> f64 {
        *self.regret.last().expect("series is never empty")
    }
}

/// Folds per-round learner losses and the panel into a [`RegretSeries`].
pub fn cumulative_regret(
    learner_losses: &[f64],
    panel: &ForecastPanel,
    loss: &LossFunction,
) -> Result<RegretSeries> {
    let t_max = panel.horizon();
    if learner_losses.len() != t_max {
        return Err(CoreError::dimension(format!(
            "{} learner losses for horizon {t_max}",
            learner_losses.len()
        )));
    }
    let k = panel.num_experts();
    let mut expert_cum = vec![0.0f64; k];
    let mut learner_cum = Vec::with_capacity(t_max);
    let mut best_cum = Vec::with_capacity(t_max);
    let mut regret = Vec::with_capacity(t_max);
    let mut best_expert = Vec::with_capacity(t_max);
    let mut learner_total = 0.0f64;
    for (t, &learner_loss) in learner_losses.iter().enumerate() {
        let row = panel.loss_row(loss, t)?;
        for (acc, l) in expert_cum.iter_mut().zip(&row) {
            *acc += l;
        }
        learner_total += learner_loss;
        let (best_i, best_total) = expert_cum
            .iter()
            .copied()
            .enumerate()
            .fold((0usize, f64::INFINITY), |(bi, bv), (i, v)| {
                if v < bv {
                    (i, v)
                } else {
                    (bi, bv)
                }
            });
        learner_cum.push(learner_total);
        best_cum.push(best_total);
        regret.push(learner_total - best_total);
        best_expert.push(best_i);
    }
    Ok(RegretSeries {
        learner_cum,
        best_cum,
        regret,
        best_expert,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_an_expert_gives_zero_regret() {
        let panel =
            ForecastPanel::from_raw(&[vec![0.9, 0.4], vec![0.8, 0.3], vec![1.0, 0.2]], &[1, 1, 1])
                .unwrap();
        let loss = LossFunction::quadratic();
        let learner: Vec<f64> = (0..3)
            .map(|t| panel.loss_row(&loss, t).unwrap()[0])
            .collect();
        let series = cumulative_regret(&learner, &panel, &loss).unwrap();
        for (t, &r) in series.regret.iter().enumerate() {
            assert!(r.abs() < 1e-12, "round {t}");
            assert_eq!(series.best_expert[t], 0);
        }
    }

    #[test]
    fn worst_case_learner_accrues_t() {
        let panel = ForecastPanel::from_raw(&vec![vec![1.0, 0.0]; 5], &[1; 5]).unwrap();
        let loss = LossFunction::quadratic();
        let series = cumulative_regret(&[1.0; 5], &panel, &loss).unwrap();
        for (t, &r) in series.regret.iter().enumerate() {
            assert!((r - (t + 1) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn alternating_experts_cancel() {
        let rows = vec![
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
        ];
        let panel = ForecastPanel::from_raw(&rows, &[0, 0, 0, 0]).unwrap();
        let loss = LossFunction::quadratic();
        let series = cumulative_regret(&[0.5; 4], &panel, &loss).unwrap();
        assert!((series.regret[3] - 0.0).abs() < 1e-12);
        assert_eq!(series.best_expert[0], 0);
        assert_eq!(series.best_expert[1], 0);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let panel = ForecastPanel::from_raw(&[vec![0.5]], &[0]).unwrap();
        let loss = LossFunction::quadratic();
        assert!(cumulative_regret(&[0.1, 0.2], &panel, &loss).is_err());
    }
}
