//! Probability values and binary outcomes.

use crate::error::{CoreError, Result};

/// A probability in `[0, 1]`.
///
/// Construction rejects NaN and out-of-range values, so downstream code can
/// rely on the bound without re-checking.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const HALF: Probability = Probability(0.5);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || !(0.0..=1.0).contains(&value) {
            return Err(CoreError::InvalidProbability { value });
        }
        Ok(Probability(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = CoreError;

    fn try_from(value: f64) -> Result<Self> {
        Probability::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.value()
    }
}

/// Converts a slice of raw values, failing on the first invalid entry.
pub fn probabilities(values: &[f64]) -> Result<Vec<Probability>> {
    values.iter().map(|&v| Probability::new(v)).collect()
}

/// The realization of one binary event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Zero,
    One,
}

impl Outcome {
    /// Both outcomes, in numeric order. Handy for expectations over an event.
    pub const BOTH: [Outcome; 2] = [Outcome::Zero, Outcome::One];

    pub fn from_u8(value: u8) -> Result<Self> {
        match value {
            0 => Ok(Outcome::Zero),
            1 => Ok(Outcome::One),
            other => Err(CoreError::InvalidOutcome {
                value: f64::from(other),
            }),
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Outcome::Zero => 0,
            Outcome::One => 1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.as_u8())
    }
}
