//! Forecast panels: a complete report matrix plus the realized outcomes.

use crate::error::{CoreError, Result};
use crate::loss::LossFunction;
use crate::prob::{Outcome, Probability};

/// Reports of `K` experts on `T` binary events, with no missing cells.
///
/// Rounds are indexed `0..horizon` and experts `0..num_experts` throughout
/// this crate.
#[derive(Clone, Debug, PartialEq)]
pub struct ForecastPanel {
    expert_ids: Vec<String>,
    num_experts: usize,
    reports: Vec<Probability>,
    outcomes: Vec<Outcome>,
}

impl ForecastPanel {
    pub fn new(
        expert_ids: Vec<String>,
        rows: Vec<Vec<Probability>>,
        outcomes: Vec<Outcome>,
    ) -> Result<Self> {
        let k = expert_ids.len();
        if k == 0 {
            return Err(CoreError::dimension("panel needs at least one expert"));
        }
        if rows.is_empty() {
            return Err(CoreError::dimension("panel needs at least one round"));
        }
        if rows.len() != outcomes.len() {
            return Err(CoreError::dimension(format!(
                "{} report rows but {} outcomes",
                rows.len(),
                outcomes.len()
            )));
        }
        let mut reports = Vec::with_capacity(rows.len() * k);
        for (t, row) in rows.into_iter().enumerate() {
            if row.len() != k {
                return Err(CoreError::dimension(format!(
                    "round {t} has {} reports for {k} experts",
                    row.len()
                )));
            }
            reports.extend(row);
        }
        Ok(ForecastPanel {
            expert_ids,
            num_experts: k,
            reports,
            outcomes,
        })
    }

    /// Builds a panel with generated labels `expert-1`, `expert-2`, ...
    pub fn with_generated_ids(rows: Vec<Vec<Probability>>, outcomes: Vec<Outcome>) -> Result<Self> {
        let k = rows.first().map_or(0, Vec::len);
        let ids = (1..=k).map(|i| format!("expert-{i}")).collect();
        ForecastPanel::new(ids, rows, outcomes)
    }

    /// Convenience constructor from raw values, validating every cell.
    pub fn from_raw(rows: &[Vec<f64>], outcomes: &[u8]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| crate::prob::probabilities(row))
            .collect::<Result<Vec<_>>>()?;
        let outcomes = outcomes
            .iter()
            .map(|&o| Outcome::from_u8(o))
            .collect::<Result<Vec<_>>>()?;
        ForecastPanel::with_generated_ids(rows, outcomes)
    }

    pub fn num_experts(&self) -> usize {
        self.num_experts
    }

    pub fn horizon(&self) -> usize {
        self.outcomes.len()
    }

    pub fn expert_ids(&self) -> &[String] {
        &self.expert_ids
    }

    /// Report of expert `i` in round `t`. Panics when out of range, like slice
    /// indexing; use [`ForecastPanel::loss_row`] for checked access by round.
    pub fn report(&self, t: usize, i: usize) -> Probability {
        assert!(t < self.horizon() && i < self.num_experts);
        self.reports[t * self.num_experts + i]
    }

    /// All reports of round `t`. Panics when `t` is out of range.
    pub fn report_row(&self, t: usize) -> &[Probability] {
        assert!(t < self.horizon());
        &self.reports[t * self.num_experts..(t + 1) * self.num_experts]
    }

    /// Outcome of round `t`. Panics when `t` is out of range.
    pub fn outcome(&self, t: usize) -> Outcome {
        self.outcomes[t]
    }

    /// Loss of every expert in round `t`.
    pub fn loss_row(&self, loss: &LossFunction, t: usize) -> Result<Vec<f64>> {
        if t >= self.horizon() {
            return Err(CoreError::RoundOutOfRange {
                index: t,
                horizon: self.horizon(),
            });
        }
        let r = self.outcome(t);
        Ok(self.report_row(t).iter().map(|&p| loss.eval(p, r)).collect())
    }

    /// New panel restricted to the expert columns in `indices`, in order.
    pub fn column_subset(&self, indices: &[usize]) -> Result<ForecastPanel> {
        if indices.is_empty() {
            return Err(CoreError::dimension("column subset must be non-empty"));
        }
        for &i in indices {
            if i >= self.num_experts {
                return Err(CoreError::dimension(format!(
                    "expert index {i} out of range for {} experts",
                    self.num_experts
                )));
            }
        }
        let expert_ids = indices.iter().map(|&i| self.expert_ids[i].clone()).collect();
        let mut reports = Vec::with_capacity(self.horizon() * indices.len());
        for t in 0..self.horizon() {
            let row = self.report_row(t);
            reports.extend(indices.iter().map(|&i| row[i]));
        }
        Ok(ForecastPanel {
            expert_ids,
            num_experts: indices.len(),
            reports,
            outcomes: self.outcomes.clone(),
        })
    }
}
