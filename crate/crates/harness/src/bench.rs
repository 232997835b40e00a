//! Benchmark orchestration: named algorithm configurations, expert-group
//! sampling, and parallel runs over (group, repetition) cells.
//!
//! Every cell derives its own [`RngStream`], and aggregation is a sequential
//! reduce over cell order, so the number of worker threads never changes an
//! output byte.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{HarnessError, Result};
use crate::trace::{RegretTrace, TraceEnsemble, TraceMeta};
use wagerlearn_core::{
    bandit_doubling_wrapper, default_exp3_eta, default_full_info_eta, doubling_wrapper,
    run_bandit, run_full_info, BanditAlgorithm, BanditParams, DoublingBase, ForecastPanel,
    FullInfoAlgorithm, LossFunction, PredictionMode, RngStream, SelectionEstimate,
};

/// Sampled-selection default for the lottery-based algorithms.
pub const DEFAULT_SELECTION_SAMPLES: usize = 10_000;

/// Step size for the aggregate Hedge variant.
pub const HEDGE_AGGREGATE_DEFAULT_ETA: f64 = 1.0;

/// Algorithm family, before a prediction mode or parameters are attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Wsu,
    Mwu,
    Hedge,
    ElfX,
    Elf,
    WsuUx,
    Exp3,
    WsuDoubling,
    WsuUxDoubling,
}

impl Family {
    pub fn is_bandit(self) -> bool {
        matches!(self, Family::WsuUx | Family::Exp3 | Family::WsuUxDoubling)
    }

    fn base_name(self) -> &'static str {
        match self {
            Family::Wsu => "wsu",
            Family::Mwu => "mwu",
            Family::Hedge => "hedge",
            Family::ElfX => "elf-x",
            Family::Elf => "elf",
            Family::WsuUx => "wsu-ux",
            Family::Exp3 => "exp3",
            Family::WsuDoubling => "wsu-doubling",
            Family::WsuUxDoubling => "wsu-ux-doubling",
        }
    }
}

/// One named algorithm configuration, optionally with overridden parameters.
///
/// Bandit-feedback families always predict by following the drawn expert;
/// the `-aggr` suffix on the full-information names switches the learner
/// from drawing one expert to predicting the weighted average report.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgorithmSpec {
    pub family: Family,
    pub mode: PredictionMode,
    pub eta: Option<f64>,
    pub gamma: Option<f64>,
    pub num_samples: Option<usize>,
}

pub const ALGORITHM_NAMES: [&str; 14] = [
    "wsu",
    "wsu-aggr",
    "mwu",
    "mwu-aggr",
    "hedge",
    "hedge-aggr",
    "elf-x",
    "elf-x-aggr",
    "elf",
    "elf-aggr",
    "wsu-ux",
    "exp3",
    "wsu-doubling",
    "wsu-ux-doubling",
];

impl AlgorithmSpec {
    pub fn named(family: Family, mode: PredictionMode) -> Self {
        AlgorithmSpec {
            family,
            mode,
            eta: None,
            gamma: None,
            num_samples: None,
        }
    }

    /// Parses one of the benchmark names, e.g. `wsu`, `elf-x-aggr`, `exp3`.
    pub fn parse(name: &str) -> Result<Self> {
        let (stem, mode) = match name.strip_suffix("-aggr") {
            Some(stem) => (stem, PredictionMode::Aggregate),
            None => (name, PredictionMode::SelectOne),
        };
        let family = match stem {
            "wsu" => Family::Wsu,
            "mwu" => Family::Mwu,
            "hedge" => Family::Hedge,
            "elf-x" | "elfx" => Family::ElfX,
            "elf" => Family::Elf,
            "wsu-ux" => Family::WsuUx,
            "exp3" => Family::Exp3,
            "wsu-doubling" => Family::WsuDoubling,
            "wsu-ux-doubling" => Family::WsuUxDoubling,
            _ => {
                return Err(HarnessError::validation(format!(
                    "unknown algorithm {name:?}; known names: {}",
                    ALGORITHM_NAMES.join(", ")
                )))
            }
        };
        if family.is_bandit() && mode == PredictionMode::Aggregate {
            return Err(HarnessError::validation(format!(
                "{name:?}: bandit algorithms have no aggregate variant"
            )));
        }
        Ok(AlgorithmSpec::named(family, mode))
    }

    pub fn name(&self) -> String {
        match self.mode {
            PredictionMode::SelectOne => self.family.base_name().to_string(),
            PredictionMode::Aggregate => format!("{}-aggr", self.family.base_name()),
        }
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }

    pub fn with_num_samples(mut self, num_samples: usize) -> Self {
        self.num_samples = Some(num_samples);
        self
    }

    fn reject_override(&self, value: Option<f64>, what: &str) -> Result<()> {
        if value.is_some() {
            return Err(HarnessError::validation(format!(
                "{} takes no {what} override",
                self.name()
            )));
        }
        Ok(())
    }

    fn selection(&self) -> SelectionEstimate {
        SelectionEstimate::Sampled {
            num_samples: self.num_samples.unwrap_or(DEFAULT_SELECTION_SAMPLES),
        }
    }

    /// Fills in horizon-tuned defaults for anything not overridden.
    fn resolve(&self, k: usize, horizon: usize) -> Result<(Resolved, BTreeMap<String, f64>)> {
        let mut params = BTreeMap::new();
        if !matches!(self.family, Family::ElfX | Family::Elf) && self.num_samples.is_some() {
            return Err(HarnessError::validation(format!(
                "{} takes no num_samples override",
                self.name()
            )));
        }
        if !matches!(self.family, Family::WsuUx) {
            self.reject_override(self.gamma, "gamma")?;
        }
        let resolved = match self.family {
            Family::Wsu => {
                let eta = self.eta.unwrap_or_else(|| default_full_info_eta(k, horizon));
                params.insert("eta".into(), eta);
                Resolved::FullInfo(FullInfoAlgorithm::Wsu { eta })
            }
            Family::Mwu => {
                let eta = self.eta.unwrap_or_else(|| default_full_info_eta(k, horizon));
                params.insert("eta".into(), eta);
                Resolved::FullInfo(FullInfoAlgorithm::Mwu { eta })
            }
            Family::Hedge => {
                let eta = self.eta.unwrap_or(match self.mode {
                    PredictionMode::Aggregate => HEDGE_AGGREGATE_DEFAULT_ETA,
                    PredictionMode::SelectOne => hedge_default_eta(k, horizon),
                });
                params.insert("eta".into(), eta);
                Resolved::FullInfo(FullInfoAlgorithm::Hedge { eta })
            }
            Family::ElfX => {
                self.reject_override(self.eta, "eta")?;
                let estimate = self.selection();
                if let SelectionEstimate::Sampled { num_samples } = estimate {
                    params.insert("num_samples".into(), num_samples as f64);
                }
                Resolved::FullInfo(FullInfoAlgorithm::ElfX { estimate })
            }
            Family::Elf => {
                self.reject_override(self.eta, "eta")?;
                let estimate = self.selection();
                if let SelectionEstimate::Sampled { num_samples } = estimate {
                    params.insert("num_samples".into(), num_samples as f64);
                }
                Resolved::FullInfo(FullInfoAlgorithm::Elf { estimate })
            }
            Family::WsuUx => {
                let bandit_params = match (self.eta, self.gamma) {
                    (None, None) => BanditParams::tuned_or_clamped(k, horizon).0,
                    (Some(eta), Some(gamma)) => BanditParams::new(eta, gamma, k)?,
                    _ => {
                        return Err(HarnessError::validation(
                            "wsu-ux needs eta and gamma together or neither",
                        ))
                    }
                };
                params.insert("eta".into(), bandit_params.eta());
                params.insert("gamma".into(), bandit_params.gamma());
                Resolved::Bandit(BanditAlgorithm::WsuUx {
                    params: bandit_params,
                })
            }
            Family::Exp3 => {
                self.reject_override(self.gamma, "gamma")?;
                let eta = self.eta.unwrap_or_else(|| default_exp3_eta(k, horizon));
                params.insert("eta".into(), eta);
                Resolved::Bandit(BanditAlgorithm::Exp3 { eta })
            }
            Family::WsuDoubling => {
                self.reject_override(self.eta, "eta")?;
                Resolved::FullInfoDoubling(DoublingBase::Wsu)
            }
            Family::WsuUxDoubling => {
                self.reject_override(self.eta, "eta")?;
                self.reject_override(self.gamma, "gamma")?;
                Resolved::BanditDoubling
            }
        };
        Ok((resolved, params))
    }
}

enum Resolved {
    FullInfo(FullInfoAlgorithm),
    Bandit(BanditAlgorithm),
    FullInfoDoubling(DoublingBase),
    BanditDoubling,
}

fn hedge_default_eta(k: usize, horizon: usize) -> f64 {
    if k <= 1 {
        return 1.0;
    }
    ((k as f64).ln() / horizon.max(1) as f64).sqrt()
}

/// Runs one algorithm over one panel and packages the regret series.
pub fn run_one(
    panel: &ForecastPanel,
    spec: &AlgorithmSpec,
    stream: RngStream,
) -> Result<RegretTrace> {
    let k = panel.num_experts();
    let horizon = panel.horizon();
    let (resolved, params) = spec.resolve(k, horizon)?;
    let loss = LossFunction::quadratic();
    let series = match resolved {
        Resolved::FullInfo(alg) => run_full_info(panel, alg, spec.mode, &loss, stream)?.series,
        Resolved::Bandit(alg) => run_bandit(panel, alg, &loss, stream)?.series,
        Resolved::FullInfoDoubling(base) => {
            doubling_wrapper(panel, base, spec.mode, &loss, stream)?.run.series
        }
        Resolved::BanditDoubling => bandit_doubling_wrapper(panel, &loss, stream)?.run.series,
    };
    RegretTrace::from_series(
        TraceMeta {
            algorithm: spec.name(),
            mode: spec.mode.name().to_string(),
            params,
            seed: stream.seed(),
            stream_id: stream.stream_id(),
            k,
            t: horizon,
        },
        &series,
    )
}

/// Samples `num_groups` uniform subsets of `group_size` expert columns,
/// without replacement within a group, independently across groups.
pub fn sample_expert_groups(
    panel: &ForecastPanel,
    group_size: usize,
    num_groups: usize,
    stream: RngStream,
) -> Result<Vec<ForecastPanel>> {
    use rand::Rng;
    if group_size == 0 || group_size > panel.num_experts() {
        return Err(HarnessError::validation(format!(
            "group size {group_size} from a panel of {} experts",
            panel.num_experts()
        )));
    }
    if num_groups == 0 {
        return Err(HarnessError::validation("need at least one group"));
    }
    let total = panel.num_experts();
    let mut rng = stream.rng();
    let mut groups = Vec::with_capacity(num_groups);
    for _ in 0..num_groups {
        let mut indices: Vec<usize> = (0..total).collect();
        for j in 0..group_size {
            let swap = rng.random_range(j..total);
            indices.swap(j, swap);
        }
        groups.push(panel.column_subset(&indices[..group_size])?);
    }
    Ok(groups)
}

fn check_shared_shape(panels: &[ForecastPanel]) -> Result<(usize, usize)> {
    let first = panels
        .first()
        .ok_or_else(|| HarnessError::validation("need at least one panel"))?;
    let shape = (first.num_experts(), first.horizon());
    for panel in panels {
        if (panel.num_experts(), panel.horizon()) != shape {
            return Err(HarnessError::validation(
                "all panels in one benchmark must share K and T",
            ));
        }
    }
    Ok(shape)
}

/// Runs every algorithm over every (panel, repetition) cell and aggregates
/// one ensemble per algorithm, in the order the algorithms were given.
///
/// Within a cell all algorithms see identical reports and outcomes; each
/// algorithm draws from its own substream so adding or removing one never
/// perturbs the others.
pub fn run_benchmark(
    panels: &[ForecastPanel],
    algorithms: &[AlgorithmSpec],
    repetitions: usize,
    base: RngStream,
    include_per_trace: bool,
) -> Result<Vec<TraceEnsemble>> {
    check_shared_shape(panels)?;
    if algorithms.is_empty() {
        return Err(HarnessError::validation("need at least one algorithm"));
    }
    if repetitions == 0 {
        return Err(HarnessError::validation("need at least one repetition"));
    }
    let cells: Vec<(usize, usize)> = (0..panels.len())
        .flat_map(|g| (0..repetitions).map(move |r| (g, r)))
        .collect();
    let per_cell: Vec<Vec<RegretTrace>> = cells
        .par_iter()
        .map(|&(g, r)| {
            let cell = base.substream(2).substream(g as u64).substream(r as u64);
            algorithms
                .iter()
                .enumerate()
                .map(|(a, alg)| run_one(&panels[g], alg, cell.substream(a as u64)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    collect_ensembles(per_cell, algorithms.len(), "benchmark", include_per_trace)
}

pub(crate) fn collect_ensembles(
    per_cell: Vec<Vec<RegretTrace>>,
    num_algorithms: usize,
    source: &str,
    include_per_trace: bool,
) -> Result<Vec<TraceEnsemble>> {
    let mut ensembles = Vec::with_capacity(num_algorithms);
    for a in 0..num_algorithms {
        let traces: Vec<RegretTrace> = per_cell.iter().map(|cell| cell[a].clone()).collect();
        ensembles.push(TraceEnsemble::from_traces(&traces, source, include_per_trace)?);
    }
    Ok(ensembles)
}
