//! Bounded proper losses on binary outcomes.
//!
//! ```text
//! quadratic:  l(p, r) = (p - r)^2
//! ```
//!
//! A loss is proper when reporting one's true belief minimizes expected loss:
//! with belief `b`, the expectation `b * l(p, 1) + (1 - b) * l(p, 0)` should be
//! minimized at `p = b`. The quadratic loss is strictly proper, and everything
//! in this crate that promises incentive compatibility assumes a proper loss
//! with range inside `[0, 1]`.

use std::fmt;
use std::sync::Arc;

use crate::error::{CoreError, Result};
use crate::prob::{Outcome, Probability};

/// Number of grid points used to spot-check a custom loss at construction.
const CUSTOM_CHECK_GRID: usize = 201;

/// A loss function `l(report, outcome)` with range inside `[0, 1]`.
#[derive(Clone)]
pub enum LossFunction {
    /// Squared error between the report and the realized outcome.
    Quadratic,
    /// A caller-supplied loss, range-checked on a grid at construction.
    Custom {
        name: String,
        eval: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    },
}

impl LossFunction {
    pub fn quadratic() -> Self {
        LossFunction::Quadratic
    }

    /// Wraps an arbitrary loss after checking that it stays finite and inside
    /// `[0, 1]` on a report grid for both outcomes. Unbounded losses such as
    /// the log loss are rejected here.
    pub fn custom(
        name: impl Into<String>,
        eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let name = name.into();
        for j in 0..CUSTOM_CHECK_GRID {
            let p = j as f64 / (CUSTOM_CHECK_GRID - 1) as f64;
            for r in [0.0, 1.0] {
                let value = eval(p, r);
                if !value.is_finite() || !(0.0..=1.0).contains(&value) {
                    return Err(CoreError::parameter(format!(
                        "loss {name:?} evaluates to {value} at report {p}, outcome {r}; \
                         range must stay inside [0, 1]"
                    )));
                }
            }
        }
        Ok(LossFunction::Custom {
            name,
            eval: Arc::new(eval),
        })
    }

    pub fn eval(&self, report: Probability, outcome: Outcome) -> f64 {
        self.eval_raw(report.value(), outcome)
    }

    /// Evaluation on a raw report, used internally for derivative probes that
    /// step slightly outside `[0, 1]`.
    pub(crate) fn eval_raw(&self, report: f64, outcome: Outcome) -> f64 {
        let r = outcome.as_f64();
        match self {
            LossFunction::Quadratic => (report - r) * (report - r),
            LossFunction::Custom { eval, .. } => eval(report, r),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            LossFunction::Quadratic => "quadratic",
            LossFunction::Custom { name, .. } => name,
        }
    }

    /// Expected loss of `report` under belief `belief` over the two outcomes.
    pub fn expected(&self, report: Probability, belief: Probability) -> f64 {
        let b = belief.value();
        b * self.eval(report, Outcome::One) + (1.0 - b) * self.eval(report, Outcome::Zero)
    }
}

/// Losses centered at their `pi`-weighted average.
///
/// ```text
/// L_i = l_i - <pi, l>
/// ```
///
/// Each entry lies in `[-1, 1]` and the weighted average of the output is
/// zero, which is what makes the WSU multiplier `1 - eta * L_i` mass
/// preserving.
pub fn relative_loss(losses: &[f64], pi: &crate::simplex::WeightVector) -> Result<Vec<f64>> {
    if losses.len() != pi.len() {
        return Err(CoreError::dimension(format!(
            "{} losses for {} weights",
            losses.len(),
            pi.len()
        )));
    }
    for (i, &l) in losses.iter().enumerate() {
        if !l.is_finite() || !(0.0..=1.0).contains(&l) {
            return Err(CoreError::parameter(format!(
                "loss entry {i} = {l} lies outside [0, 1]"
            )));
        }
    }
    let avg = pi.dot(losses)?;
    Ok(losses.iter().map(|&l| l - avg).collect())
}

impl fmt::Debug for LossFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("LossFunction").field(&self.name()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_values() {
        let l = LossFunction::quadratic();
        let p = Probability::new(0.3).unwrap();
        assert!((l.eval(p, Outcome::One) - 0.49).abs() < 1e-15);
        assert!((l.eval(p, Outcome::Zero) - 0.09).abs() < 1e-15);
    }

    #[test]
    fn quadratic_is_proper_on_grid() {
        let l = LossFunction::quadratic();
        for jb in 0..101 {
            let b = Probability::new(jb as f64 / 100.0).unwrap();
            let truthful = l.expected(b, b);
            for jp in 0..101 {
                let p = Probability::new(jp as f64 / 100.0).unwrap();
                assert!(l.expected(p, b) + 1e-12 >= truthful);
            }
        }
    }

    #[test]
    fn relative_loss_centers_at_weighted_mean() {
        use crate::simplex::WeightVector;
        let pi = WeightVector::uniform(2).unwrap();
        assert_eq!(relative_loss(&[0.5, 0.5], &pi).unwrap(), vec![0.0, 0.0]);
        assert_eq!(relative_loss(&[0.0, 1.0], &pi).unwrap(), vec![-0.5, 0.5]);

        let pi = WeightVector::new(vec![0.5, 0.25, 0.25]).unwrap();
        let centered = relative_loss(&[0.2, 0.8, 0.5], &pi).unwrap();
        for (got, want) in centered.iter().zip([-0.225, 0.375, 0.075]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(pi.dot(&centered).unwrap().abs() < 1e-12);
    }

    #[test]
    fn relative_loss_validates_inputs() {
        use crate::simplex::WeightVector;
        let pi = WeightVector::uniform(2).unwrap();
        assert!(relative_loss(&[0.5], &pi).is_err());
        assert!(relative_loss(&[0.5, 1.5], &pi).is_err());
    }

    #[test]
    fn log_loss_is_rejected() {
        let attempt = LossFunction::custom("log", |p: f64, r: f64| {
            -(r * p.max(1e-300).ln() + (1.0 - r) * (1.0 - p).max(1e-300).ln())
        });
        assert!(attempt.is_err());
    }

    #[test]
    fn bounded_custom_loss_is_accepted() {
        let l = LossFunction::custom("absolute", |p, r| (p - r).abs()).unwrap();
        assert_eq!(l.name(), "absolute");
        let p = Probability::new(0.25).unwrap();
        assert!((l.eval(p, Outcome::One) - 0.75).abs() < 1e-15);
    }
}
