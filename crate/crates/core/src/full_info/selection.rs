//! Event-lottery winner probabilities and the most-wins selection
//! distribution used by ELF-X and ELF.
//!
//! Each past round holds a lottery over experts. ELF-X awards the round to
//! expert `i` with probability
//!
//! ```text
//! (1/K) * (1 - l_i + (1/K) * sum_j l_j)
//! ```
//!
//! which is exactly the weighted-score wagering payoff when every expert
//! stakes `1/K`. ELF replaces the pooled term with the average over the other
//! experts, `(1/(K-1)) * sum_{j != i} l_j`, which pushes the winner
//! probability of a round's sole zero-loss expert to one when reports are
//! extreme.
//!
//! The selection distribution at round `t` is over the expert with the most
//! round wins so far, ties broken uniformly. No closed form is known, so it
//! is computed either by exact enumeration of all `K^t` winner sequences
//! (the oracle, feasible for small panels) or by Monte Carlo over whole
//! winner sequences.

use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{CoreError, Result};
use crate::rng::RngStream;
use crate::simplex::WeightVector;

/// Largest number of winner sequences the exact enumeration will touch.
pub const EXACT_SEQUENCE_BUDGET: u128 = 1 << 20;

/// How to compute the selection distribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectionEstimate {
    /// Full enumeration of winner sequences; errors beyond
    /// [`EXACT_SEQUENCE_BUDGET`].
    Exact,
    /// Monte Carlo over independent winner-sequence draws.
    Sampled { num_samples: usize },
}

impl SelectionEstimate {
    pub const DEFAULT_SAMPLES: usize = 10_000;
}

impl Default for SelectionEstimate {
    fn default() -> Self {
        SelectionEstimate::Sampled {
            num_samples: SelectionEstimate::DEFAULT_SAMPLES,
        }
    }
}

fn validate_losses(losses: &[f64]) -> Result<()> {
    if losses.is_empty() {
        return Err(CoreError::parameter("loss row must be non-empty"));
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

/// Winner probabilities of one ELF-X round lottery.
pub fn elfx_round_winner_probs(losses: &[f64]) -> Result<WeightVector> {
    validate_losses(losses)?;
    let k = losses.len() as f64;
    let pool: f64 = losses.iter().sum::<f64>() / k;
    WeightVector::new(
        losses
            .iter()
            .map(|&l| (1.0 - l + pool) / k)
            .collect(),
    )
}

/// Winner probabilities of one ELF round lottery. Needs at least two experts.
pub fn elf_round_winner_probs(losses: &[f64]) -> Result<WeightVector> {
    validate_losses(losses)?;
    let k = losses.len();
    if k < 2 {
        return Err(CoreError::parameter(
            "ELF winner probabilities need at least two experts",
        ));
    }
    let total: f64 = losses.iter().sum();
    WeightVector::new(
        losses
            .iter()
            .map(|&l| (1.0 - l + (total - l) / (k as f64 - 1.0)) / k as f64)
            .collect(),
    )
}

pub(crate) fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    probs
        .iter()
        .map(|&p| {
            acc += p;
            acc
        })
        .collect()
}

pub(crate) fn draw_index<R: Rng + ?Sized>(cum: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    cum.partition_point(|&c| c <= u).min(cum.len() - 1)
}

fn check_enumeration_budget(k: usize, rounds: usize) -> Result<()> {
    let sequences = (k as u128)
        .checked_pow(rounds as u32)
        .unwrap_or(u128::MAX);
    if sequences > EXACT_SEQUENCE_BUDGET {
        return Err(CoreError::budget(format!(
            "{k}^{rounds} winner sequences exceed the exact budget of 2^20"
        )));
    }
    Ok(())
}

/// Exact selection distribution from per-round winner probabilities.
///
/// Enumerates every winner sequence, accumulating each sequence's probability
/// split equally among the experts tied for the most wins. Runs in
/// `O(K^t)`; see [`EXACT_SEQUENCE_BUDGET`].
pub fn selection_distribution_exact(k: usize, rounds: &[WeightVector]) -> Result<WeightVector> {
    if k == 0 {
        return Err(CoreError::parameter("need at least one expert"));
    }
    for row in rounds {
        if row.len() != k {
            return Err(CoreError::dimension(format!(
                "winner row has {} entries for {k} experts",
                row.len()
            )));
        }
    }
    check_enumeration_budget(k, rounds.len())?;
    let mut out = vec![0.0f64; k];
    let mut counts = vec![0u32; k];
    enumerate_sequences(rounds, 0, &mut counts, 1.0, &mut out);
    WeightVector::new(out)
}

fn enumerate_sequences(
    rounds: &[WeightVector],
    depth: usize,
    counts: &mut [u32],
    prob: f64,
    out: &mut [f64],
) {
    if depth == rounds.len() {
        let max = counts.iter().copied().max().unwrap_or(0);
        let ties = counts.iter().filter(|&&c| c == max).count();
        let share = prob / ties as f64;
        for (o, &c) in out.iter_mut().zip(counts.iter()) {
            if c == max {
                *o += share;
            }
        }
        return;
    }
    for w in 0..counts.len() {
        let p = rounds[depth][w];
        if p > 0.0 {
            counts[w] += 1;
            enumerate_sequences(rounds, depth + 1, counts, prob * p, out);
            counts[w] -= 1;
        }
    }
}

/// Monte Carlo selection distribution over independent winner-sequence draws.
///
/// Each sampled sequence contributes its mass fractionally across the experts
/// tied for the most wins, so the tie-break never adds sampling noise.
pub fn selection_distribution_sampled<R: Rng + ?Sized>(
    k: usize,
    rounds: &[WeightVector],
    num_samples: usize,
    rng: &mut R,
) -> Result<WeightVector> {
    if k == 0 {
        return Err(CoreError::parameter("need at least one expert"));
    }
    if num_samples == 0 {
        return Err(CoreError::parameter("num_samples must be positive"));
    }
    for row in rounds {
        if row.len() != k {
            return Err(CoreError::dimension(format!(
                "winner row has {} entries for {k} experts",
                row.len()
            )));
        }
    }
    let cums: Vec<Vec<f64>> = rounds.iter().map(|r| cumulative(r.as_slice())).collect();
    let mut out = vec![0.0f64; k];
    let mut counts = vec![0u32; k];
    for _ in 0..num_samples {
        counts.fill(0);
        for cum in &cums {
            counts[draw_index(cum, rng)] += 1;
        }
        let max = counts.iter().copied().max().unwrap_or(0);
        let ties = counts.iter().filter(|&&c| c == max).count();
        let share = 1.0 / (num_samples as f64 * ties as f64);
        for (o, &c) in out.iter_mut().zip(counts.iter()) {
            if c == max {
                *o += share;
            }
        }
    }
    WeightVector::new(out)
}

/// Selection distribution for ELF-X from raw loss history.
///
/// `history` holds the loss rows of the rounds already played; an empty
/// history yields the uniform distribution.
pub fn elfx_selection_distribution(
    k: usize,
    history: &[Vec<f64>],
    estimate: SelectionEstimate,
    stream: RngStream,
) -> Result<WeightVector> {
    if history.is_empty() {
        return WeightVector::uniform(k);
    }
    let rounds = history
        .iter()
        .map(|row| {
            if row.len() != k {
                return Err(CoreError::dimension(format!(
                    "history row has {} entries for {k} experts",
                    row.len()
                )));
            }
            elfx_round_winner_probs(row)
        })
        .collect::<Result<Vec<_>>>()?;
    match estimate {
        SelectionEstimate::Exact => selection_distribution_exact(k, &rounds),
        SelectionEstimate::Sampled { num_samples } => {
            selection_distribution_sampled(k, &rounds, num_samples, &mut stream.rng())
        }
    }
}

/// Incremental Monte Carlo estimator of the selection distribution.
///
/// Keeps `num_samples` winner sequences alive and extends each by one draw
/// per observed round, updating each sequence's win counts, running maximum,
/// and tied set in place. At any round the estimate over these sequences has
/// the same law as a fresh sample of that round's selection distribution,
/// while the total cost over a horizon stays linear in `T` instead of
/// quadratic.
pub(crate) struct SelectionSampler {
    k: usize,
    num_samples: usize,
    counts: Vec<u32>,
    max_count: Vec<u32>,
    tied: Vec<Vec<u32>>,
    rng: ChaCha12Rng,
}

impl SelectionSampler {
    pub(crate) fn new(k: usize, num_samples: usize, rng: ChaCha12Rng) -> Self {
        let all: Vec<u32> = (0..k as u32).collect();
        SelectionSampler {
            k,
            num_samples,
            counts: vec![0; num_samples * k],
            max_count: vec![0; num_samples],
            tied: vec![all; num_samples],
            rng,
        }
    }

    pub(crate) fn observe_round(&mut self, winner_probs: &WeightVector) {
        let cum = cumulative(winner_probs.as_slice());
        for s in 0..self.num_samples {
            let w = draw_index(&cum, &mut self.rng);
            let c = self.counts[s * self.k + w] + 1;
            self.counts[s * self.k + w] = c;
            if c > self.max_count[s] {
                self.max_count[s] = c;
                self.tied[s].clear();
                self.tied[s].push(w as u32);
            } else if c == self.max_count[s] {
                self.tied[s].push(w as u32);
            }
        }
    }

    pub(crate) fn estimate(&self) -> Result<WeightVector> {
        let mut out = vec![0.0f64; self.k];
        for ties in &self.tied {
            let share = 1.0 / (self.num_samples as f64 * ties.len() as f64);
            for &e in ties {
                out[e as usize] += share;
            }
        }
        WeightVector::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn elfx_probs_match_hand_values() {
        let w = elfx_round_winner_probs(&[0.0, 1.0]).unwrap();
        assert!((w[0] - 0.75).abs() < 1e-15);
        assert!((w[1] - 0.25).abs() < 1e-15);

        let w = elfx_round_winner_probs(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        for i in 0..3 {
            assert!((w[i] - 0.3125).abs() < 1e-15);
        }
        assert!((w[3] - 0.0625).abs() < 1e-15);

        let w = elfx_round_winner_probs(&[0.4, 0.4, 0.4]).unwrap();
        for i in 0..3 {
            assert!((w[i] - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn elf_probs_match_hand_values() {
        let w = elf_round_winner_probs(&[0.0, 1.0]).unwrap();
        assert_eq!(w[0], 1.0);
        assert_eq!(w[1], 0.0);

        let w = elf_round_winner_probs(&[0.0, 1.0, 1.0]).unwrap();
        assert!((w[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((w[1] - 1.0 / 6.0).abs() < 1e-15);
        assert!((w[2] - 1.0 / 6.0).abs() < 1e-15);

        let w = elf_round_winner_probs(&[0.7, 0.7]).unwrap();
        assert!((w[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn elf_rejects_single_expert() {
        assert!(elf_round_winner_probs(&[0.5]).is_err());
    }

    #[test]
    fn loss_rows_are_range_checked() {
        assert!(elfx_round_winner_probs(&[0.5, 1.5]).is_err());
        assert!(elfx_round_winner_probs(&[]).is_err());
        assert!(elf_round_winner_probs(&[-0.1, 0.5]).is_err());
    }

    #[test]
    fn empty_history_is_uniform() {
        let d =
            elfx_selection_distribution(3, &[], SelectionEstimate::Exact, RngStream::new(0, 0))
                .unwrap();
        for i in 0..3 {
            assert!((d[i] - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn single_round_selection_equals_winner_probs() {
        let d = elfx_selection_distribution(
            2,
            &[vec![0.0, 1.0]],
            SelectionEstimate::Exact,
            RngStream::new(0, 0),
        )
        .unwrap();
        assert!((d[0] - 0.75).abs() < 1e-15);
        assert!((d[1] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn two_round_selection_handles_ties() {
        let d = elfx_selection_distribution(
            2,
            &[vec![0.0, 1.0], vec![0.0, 1.0]],
            SelectionEstimate::Exact,
            RngStream::new(0, 0),
        )
        .unwrap();
        assert!((d[0] - 0.75).abs() < 1e-12);
        assert!((d[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn exact_budget_is_enforced() {
        let rows: Vec<Vec<f64>> = (0..8).map(|_| vec![0.5; 6]).collect();
        let err = elfx_selection_distribution(
            6,
            &rows,
            SelectionEstimate::Exact,
            RngStream::new(0, 0),
        )
        .unwrap_err();
        assert!(matches!(err, CoreError::BudgetExceeded { .. }));
    }

    #[test]
    fn sampled_agrees_with_exact_within_error() {
        let rows = [
            vec![0.1, 0.6, 0.3],
            vec![0.5, 0.2, 0.3],
            vec![0.0, 0.9, 0.1],
        ];
        let history: Vec<Vec<f64>> = rows.to_vec();
        let exact = elfx_selection_distribution(
            3,
            &history,
            SelectionEstimate::Exact,
            RngStream::new(0, 0),
        )
        .unwrap();
        let sampled = elfx_selection_distribution(
            3,
            &history,
            SelectionEstimate::Sampled {
                num_samples: 200_000,
            },
            RngStream::new(11, 0),
        )
        .unwrap();
        for i in 0..3 {
            let se = (exact[i] * (1.0 - exact[i]) / 200_000.0).sqrt();
            assert!(
                (sampled[i] - exact[i]).abs() <= 4.0 * se + 1e-9,
                "expert {i}: exact {} sampled {}",
                exact[i],
                sampled[i]
            );
        }
    }

    #[test]
    fn incremental_sampler_matches_round_law() {
        let row1 = elfx_round_winner_probs(&[0.0, 1.0]).unwrap();
        let mut sampler = SelectionSampler::new(2, 200_000, RngStream::new(5, 0).rng());
        assert!((sampler.estimate().unwrap()[0] - 0.5).abs() < 1e-15);
        sampler.observe_round(&row1);
        let est = sampler.estimate().unwrap();
        let se = (0.75f64 * 0.25 / 200_000.0).sqrt();
        assert!((est[0] - 0.75).abs() <= 4.0 * se);
        sampler.observe_round(&row1);
        let est = sampler.estimate().unwrap();
        assert!((est[0] - 0.75).abs() <= 5.0 * se);
    }

    #[test]
    fn sampled_mode_is_deterministic_per_stream() {
        let history = vec![vec![0.2, 0.7], vec![0.9, 0.1]];
        let run = |seed| {
            elfx_selection_distribution(
                2,
                &history,
                SelectionEstimate::Sampled { num_samples: 1000 },
                RngStream::new(seed, 3),
            )
            .unwrap()
        };
        assert_eq!(run(9).as_slice(), run(9).as_slice());
    }
}
