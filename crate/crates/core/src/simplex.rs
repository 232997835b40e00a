//! Weight vectors on the probability simplex.

use std::ops::Index;

use rand::Rng;

use crate::error::{CoreError, Result};

/// Slack allowed on individual entries before validation fails; entries within
/// the slack are clamped back into `[0, 1]`.
pub const ENTRY_SLACK: f64 = 1e-12;

/// Tolerance on the total mass before validation fails; any accepted vector is
/// renormalized to sum to one.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A probability distribution over `K` experts.
///
/// Every constructor validates: entries must be finite and within
/// [`ENTRY_SLACK`] of `[0, 1]`, and the total mass within [`SUM_TOLERANCE`] of
/// one. Accepted vectors are clamped and renormalized, so code holding a
/// `WeightVector` never needs to re-check the simplex constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(CoreError::simplex("weight vector must be non-empty"));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(CoreError::simplex(format!("entry {i} is not finite")));
            }
            if !(-ENTRY_SLACK..=1.0 + ENTRY_SLACK).contains(&w) {
                return Err(CoreError::simplex(format!(
                    "entry {i} = {w} lies outside [0, 1] beyond slack {ENTRY_SLACK}"
                )));
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(CoreError::simplex(format!(
                "entries sum to {sum}, beyond tolerance {SUM_TOLERANCE} of 1"
            )));
        }
        let mut clamped: Vec<f64> = weights.into_iter().map(|w| w.clamp(0.0, 1.0)).collect();
        let clamped_sum: f64 = clamped.iter().sum();
        for w in &mut clamped {
            *w /= clamped_sum;
        }
        Ok(WeightVector(clamped))
    }

    /// The uniform distribution over `k` experts.
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(CoreError::simplex("uniform distribution needs k >= 1"));
        }
        Ok(WeightVector(vec![1.0 / k as f64; k]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    /// Inner product with `values`, checked for matching length.
    pub fn dot(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.len() {
            return Err(CoreError::dimension(format!(
                "weight vector has {} entries, values slice has {}",
                self.len(),
                values.len()
            )));
        }
        Ok(self
            .0
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum())
    }

    /// Draws one index with probability proportional to its weight.
    ///
    /// Deterministic given the generator state: one uniform variate is
    /// consumed and mapped through the inverse CDF. The returned index always
    /// carries positive weight, even on the rounding edge where the variate
    /// lands past the accumulated total.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last_positive = 0;
        for (i, &w) in self.0.iter().enumerate() {
            if w > 0.0 {
                last_positive = i;
                acc += w;
                if u < acc {
                    return i;
                }
            }
        }
        last_positive
    }
}

impl Index<usize> for WeightVector {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

impl<'a> IntoIterator for &'a WeightVector {
    type Item = &'a f64;
    type IntoIter = std::slice::Iter<'a, f64>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_and_renormalizes_within_tolerance() {
        let w = WeightVector::new(vec![0.5, 0.5 + 3e-10]).unwrap();
        let sum: f64 = w.iter().sum();
        assert!((sum - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn clamps_tiny_negative_entries() {
        let w = WeightVector::new(vec![1.0, -1e-13]).unwrap();
        assert!(w[1] >= 0.0);
        assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn rejects_entry_beyond_slack() {
        assert!(WeightVector::new(vec![1.0 + 1e-6, -1e-6]).is_err());
        assert!(WeightVector::new(vec![-1e-6, 1.0 + 1e-6]).is_err());
        assert!(WeightVector::new(vec![f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn rejects_sum_beyond_tolerance() {
        assert!(WeightVector::new(vec![0.5, 0.5 + 1e-8]).is_err());
        assert!(WeightVector::new(vec![0.4, 0.4]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
    }

    #[test]
    fn uniform_has_equal_mass() {
        let w = WeightVector::uniform(4).unwrap();
        assert_eq!(w.as_slice(), &[0.25; 4]);
        assert!(WeightVector::uniform(0).is_err());
    }

    #[test]
    fn dot_checks_dimensions() {
        let w = WeightVector::uniform(2).unwrap();
        assert_eq!(w.dot(&[1.0, 3.0]).unwrap(), 2.0);
        assert!(w.dot(&[1.0]).is_err());
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        use rand::SeedableRng;
        let w = WeightVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let draw = |seed| {
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            (0..20).map(|_| w.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(7), draw(7));
        let counts = draw(7).into_iter().filter(|&i| i == 2).count();
        assert!(counts > 0);
    }
}
