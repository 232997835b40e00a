//! Regret traces and their ensemble aggregates.
//!
//! A trace is one run's cumulative regret bookkeeping; an ensemble collects
//! the traces of every (group, repetition) cell for one algorithm and keeps
//! the per-round mean with 20th and 80th percentile bands. Percentiles use
//! linear interpolation between order statistics at rank `(n-1) q / 100`, so
//! bands are reproducible to the bit given the same traces.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use wagerlearn_core::RegretSeries;

/// Identity of a single run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub algorithm: String,
    pub mode: String,
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    pub stream_id: u64,
    pub k: usize,
    pub t: usize,
}

/// One run's per-round regret accounting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegretTrace {
    pub meta: TraceMeta,
    pub learner_cum: Vec<f64>,
    pub best_cum: Vec<f64>,
    pub regret: Vec<f64>,
}

impl RegretTrace {
    pub fn from_series(meta: TraceMeta, series: &RegretSeries) -> Result<Self> {
        let trace = RegretTrace {
            meta,
            learner_cum: series.learner_cum.clone(),
            best_cum: series.best_cum.clone(),
            regret: series.regret.clone(),
        };
        trace.validate()?;
        Ok(trace)
    }

    pub fn validate(&self) -> Result<()> {
        let t = self.regret.len();
        if t == 0 || self.learner_cum.len() != t || self.best_cum.len() != t || self.meta.t != t {
            return Err(HarnessError::validation(format!(
                "trace arrays disagree on the horizon (meta says {}, arrays hold {}/{}/{})",
                self.meta.t,
                self.learner_cum.len(),
                self.best_cum.len(),
                t
            )));
        }
        for i in 0..t {
            let diff = self.learner_cum[i] - self.best_cum[i];
            if (diff - self.regret[i]).abs() > 1e-9 {
                return Err(HarnessError::validation(format!(
                    "round {}: regret {} is not learner minus best ({diff})",
                    i + 1,
                    self.regret[i]
                )));
            }
        }
        Ok(())
    }
}

/// Ensemble identity carried into every output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMeta {
    pub algorithm: String,
    pub mode: String,
    pub params: BTreeMap<String, f64>,
    pub seed: u64,
    pub k: usize,
    pub t: usize,
    pub num_traces: usize,
    pub source: String,
}

/// Per-round aggregate statistics; `t` is one-based.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundStats {
    pub t: usize,
    pub mean: f64,
    pub p20: f64,
    pub p80: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_trace: Option<Vec<f64>>,
}

/// Aggregated regret curves for one algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEnsemble {
    pub metadata: EnsembleMeta,
    pub rounds: Vec<RoundStats>,
}

/// Linear-interpolation percentile of an unsorted sample.
pub fn percentile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "percentile of an empty sample");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite regret values"));
    let rank = (sorted.len() - 1) as f64 * q / 100.0;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = rank - lo as f64;
        sorted[lo] + (sorted[hi] - sorted[lo]) * frac
    }
}

impl TraceEnsemble {
    /// Aggregates traces that share an algorithm, horizon, and expert count.
    pub fn from_traces(
        traces: &[RegretTrace],
        source: impl Into<String>,
        include_per_trace: bool,
    ) -> Result<Self> {
        let first = traces
            .first()
            .ok_or_else(|| HarnessError::validation("ensemble needs at least one trace"))?;
        let t = first.meta.t;
        for trace in traces {
            trace.validate()?;
            if trace.meta.t != t || trace.meta.k != first.meta.k {
                return Err(HarnessError::validation(
                    "traces in one ensemble must share K and T",
                ));
            }
        }
        let mut rounds = Vec::with_capacity(t);
        let mut sample = vec![0.0f64; traces.len()];
        for round in 0..t {
            for (slot, trace) in sample.iter_mut().zip(traces) {
                *slot = trace.regret[round];
            }
            let mean = sample.iter().sum::<f64>() / sample.len() as f64;
            let p20 = percentile(&sample, 20.0);
            let p80 = percentile(&sample, 80.0);
            rounds.push(RoundStats {
                t: round + 1,
                mean,
                p20,
                p80,
                per_trace: include_per_trace.then(|| sample.clone()),
            });
        }
        Ok(TraceEnsemble {
            metadata: EnsembleMeta {
                algorithm: first.meta.algorithm.clone(),
                mode: first.meta.mode.clone(),
                params: first.meta.params.clone(),
                seed: first.meta.seed,
                k: first.meta.k,
                t,
                num_traces: traces.len(),
                source: source.into(),
            },
            rounds,
        })
    }

    pub fn horizon(&self) -> usize {
        self.rounds.len()
    }

    pub fn final_mean_regret(&self) -> f64 {
        self.rounds.last().map_or(0.0, |r| r.mean)
    }

    /// Mean-regret curve as a plain vector, one entry per round.
    pub fn mean_curve(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| r.mean).collect()
    }

    pub fn validate_bands(&self) -> Result<()> {
        for r in &self.rounds {
            if r.p20 > r.p80 + 1e-12 {
                return Err(HarnessError::validation(format!(
                    "round {}: p20 {} exceeds p80 {}",
                    r.t, r.p20, r.p80
                )));
            }
        }
        Ok(())
    }
}
