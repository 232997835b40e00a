//! Synthetic panel generation and the Monte Carlo driver.

use rand::Rng;
use rayon::prelude::*;

use crate::bench::{collect_ensembles, run_one, AlgorithmSpec};
use crate::error::{HarnessError, Result};
use crate::trace::{RegretTrace, TraceEnsemble};
use wagerlearn_core::{ForecastPanel, RngStream};

/// Generator for synthetic panels.
///
/// Outcomes are Bernoulli with rate `rate_early` for rounds `t <= T/2`
/// (zero-based) and `rate_late` after. Experts fall into three groups of
/// `K/3` by index, with beliefs drawn per round from Unif[0, 0.7],
/// Unif[0.3, 1], and Unif[0, 1] respectively; when `K` is not divisible by 3
/// the remainder joins the last group. Experts report their beliefs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationSpec {
    pub k: usize,
    pub t: usize,
    pub repetitions: usize,
    pub rate_early: f64,
    pub rate_late: f64,
}

pub const GROUP_RANGES: [(f64, f64); 3] = [(0.0, 0.7), (0.3, 1.0), (0.0, 1.0)];

impl SimulationSpec {
    pub fn new(k: usize, t: usize, repetitions: usize) -> Self {
        SimulationSpec {
            k,
            t,
            repetitions,
            rate_early: 0.4,
            rate_late: 0.6,
        }
    }

    /// The scale the headline simulation figures use.
    pub fn full_scale() -> Self {
        SimulationSpec::new(50, 2500, 50)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.t == 0 || self.repetitions == 0 {
            return Err(HarnessError::validation(format!(
                "simulation needs positive K, T, repetitions (got {}, {}, {})",
                self.k, self.t, self.repetitions
            )));
        }
        for rate in [self.rate_early, self.rate_late] {
            if !rate.is_finite() || !(0.0..=1.0).contains(&rate) {
                return Err(HarnessError::validation(format!(
                    "outcome rate {rate} lies outside [0, 1]"
                )));
            }
        }
        Ok(())
    }

    /// Which belief-law group expert `i` belongs to.
    pub fn group_of(&self, i: usize) -> usize {
        let third = self.k / 3;
        if third == 0 {
            return 2;
        }
        (i / third).min(2)
    }

    fn outcome_rate(&self, t: usize) -> f64 {
        if t <= self.t / 2 {
            self.rate_early
        } else {
            self.rate_late
        }
    }

    /// Draws one panel. Outcomes are drawn first, then beliefs row-major, so
    /// the draw order (and hence the panel) is pinned for a given stream.
    pub fn generate_panel(&self, stream: RngStream) -> Result<ForecastPanel> {
        self.validate()?;
        let mut rng = stream.rng();
        let outcomes: Vec<u8> = (0..self.t)
            .map(|t| u8::from(rng.random::<f64>() < self.outcome_rate(t)))
            .collect();
        let rows: Vec<Vec<f64>> = (0..self.t)
            .map(|_| {
                (0..self.k)
                    .map(|i| {
                        let (lo, hi) = GROUP_RANGES[self.group_of(i)];
                        rng.random_range(lo..=hi)
                    })
                    .collect()
            })
            .collect();
        Ok(ForecastPanel::from_raw(&rows, &outcomes)?)
    }
}

/// Runs every algorithm over `repetitions` freshly drawn panels and
/// aggregates one ensemble per algorithm, in input order.
///
/// All algorithms within a repetition share the drawn panel; panel draws and
/// algorithm randomness come from disjoint substreams, so the panels do not
/// depend on which algorithms run.
pub fn run_monte_carlo(
    spec: &SimulationSpec,
    algorithms: &[AlgorithmSpec],
    base: RngStream,
    include_per_trace: bool,
) -> Result<Vec<TraceEnsemble>> {
    spec.validate()?;
    if algorithms.is_empty() {
        return Err(HarnessError::validation("need at least one algorithm"));
    }
    let per_rep: Vec<Vec<RegretTrace>> = (0..spec.repetitions)
        .into_par_iter()
        .map(|rep| {
            let panel = spec.generate_panel(base.substream(3).substream(rep as u64))?;
            let alg_base = base.substream(4).substream(rep as u64);
            algorithms
                .iter()
                .enumerate()
                .map(|(a, alg)| run_one(&panel, alg, alg_base.substream(a as u64)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    collect_ensembles(per_rep, algorithms.len(), "monte-carlo", include_per_trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_split_by_thirds_with_remainder_to_the_last() {
        let spec = SimulationSpec::new(9, 10, 1);
        let groups: Vec<usize> = (0..9).map(|i| spec.group_of(i)).collect();
        assert_eq!(groups, [0, 0, 0, 1, 1, 1, 2, 2, 2]);
        let spec = SimulationSpec::new(8, 10, 1);
        let groups: Vec<usize> = (0..8).map(|i| spec.group_of(i)).collect();
        assert_eq!(groups, [0, 0, 1, 1, 2, 2, 2, 2]);
        let spec = SimulationSpec::new(2, 10, 1);
        assert_eq!(spec.group_of(0), 2);
    }

    #[test]
    fn panels_are_deterministic_in_the_stream() {
        let spec = SimulationSpec::new(6, 40, 1);
        let a = spec.generate_panel(RngStream::new(3, 17)).unwrap();
        let b = spec.generate_panel(RngStream::new(3, 17)).unwrap();
        let c = spec.generate_panel(RngStream::new(3, 18)).unwrap();
        let mut same = true;
        let mut differs = false;
        for t in 0..40 {
            assert_eq!(a.outcome(t), b.outcome(t));
            differs |= a.outcome(t) != c.outcome(t);
            for i in 0..6 {
                same &= a.report(t, i) == b.report(t, i);
                differs |= a.report(t, i) != c.report(t, i);
            }
        }
        assert!(same);
        assert!(differs);
    }

    #[test]
    fn beliefs_respect_their_group_ranges() {
        let spec = SimulationSpec::new(9, 200, 1);
        let panel = spec.generate_panel(RngStream::new(8, 0)).unwrap();
        for t in 0..200 {
            for i in 0..9 {
                let (lo, hi) = GROUP_RANGES[spec.group_of(i)];
                let p = panel.report(t, i).value();
                assert!((lo..=hi).contains(&p), "expert {i} drew {p}");
            }
        }
    }

    #[test]
    fn outcome_rates_shift_at_the_midpoint() {
        let spec = SimulationSpec {
            rate_early: 0.0,
            rate_late: 1.0,
            ..SimulationSpec::new(3, 101, 1)
        };
        let panel = spec.generate_panel(RngStream::new(1, 0)).unwrap();
        for t in 0..101 {
            let expected = u8::from(t > 50);
            assert_eq!(panel.outcome(t).as_u8(), expected, "round {t}");
        }
    }

    #[test]
    fn degenerate_rates_give_zero_variance_outcomes() {
        let spec = SimulationSpec {
            rate_early: 1.0,
            rate_late: 1.0,
            ..SimulationSpec::new(3, 50, 1)
        };
        let panel = spec.generate_panel(RngStream::new(2, 0)).unwrap();
        for t in 0..50 {
            assert_eq!(panel.outcome(t).as_u8(), 1);
        }
    }

    #[test]
    fn monte_carlo_is_reproducible_and_panel_draws_ignore_the_algorithm_list() {
        let spec = SimulationSpec::new(6, 30, 4);
        let one = vec![AlgorithmSpec::parse("wsu-aggr").unwrap()];
        let two = vec![
            AlgorithmSpec::parse("exp3").unwrap(),
            AlgorithmSpec::parse("wsu-aggr").unwrap(),
        ];
        let base = RngStream::new(21, 0);
        let lone = run_monte_carlo(&spec, &one, base, false).unwrap();
        let pair = run_monte_carlo(&spec, &two, base, false).unwrap();
        assert_eq!(lone.len(), 1);
        assert_eq!(pair.len(), 2);
        assert_eq!(pair[0].metadata.algorithm, "exp3");
        assert_eq!(lone[0].metadata.algorithm, "wsu-aggr");
        let again = run_monte_carlo(&spec, &one, base, false).unwrap();
        assert_eq!(lone, again);
        for (a, b) in lone[0].rounds.iter().zip(&pair[1].rounds) {
            assert_eq!(a.mean, b.mean, "aggregate trace moved with the list");
        }
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(SimulationSpec::new(0, 10, 1).validate().is_err());
        assert!(SimulationSpec::new(3, 0, 1).validate().is_err());
        assert!(SimulationSpec::new(3, 10, 0).validate().is_err());
        let bad = SimulationSpec {
            rate_early: 1.2,
            ..SimulationSpec::new(3, 10, 1)
        };
        assert!(bad.validate().is_err());
    }
}
