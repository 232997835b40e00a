//! Online learning from strategic forecasters.
//!
//! A panel of experts reports probabilities for a stream of binary events.
//! The learner aggregates the reports, pays in influence rather than money,
//! and wants two properties at once: vanishing regret against the best
//! expert in hindsight, and no incentive for any expert to misreport. The
//! weight-shifted updates implemented here (WSU for full feedback, WSU-UX
//! when only the chosen expert's loss is observed) deliver both, as does the
//! lottery-based ELF-X selection rule. The classical baselines they are
//! measured against (MWU, Hedge, EXP3, ELF) live alongside them, together
//! with an exact-expectation auditor that certifies, on a report grid,
//! whether a given update rewards truthful reporting.
//!
//! Organization:
//!
//! * [`prob`], [`simplex`], [`loss`], [`panel`]: reports, outcomes, weight
//!   vectors, loss functions, and report/outcome panels.
//! * [`wagering`]: one-shot wagering payoffs and the reduction that turns a
//!   budget-balanced mechanism into a weight update.
//! * [`full_info`]: full-information algorithms and the doubling wrapper.
//! * [`bandit`]: WSU-UX and EXP3 under single-expert feedback.
//! * [`audit`]: the incentive auditor.
//! * [`regret`], [`rng`]: regret accounting and deterministic stream
//!   splitting.
//!
//! All randomness flows through [`rng::RngStream`], so every simulation,
//! selection estimate, and audit is reproducible bit for bit from a seed.

pub mod audit;
pub mod bandit;
pub mod error;
pub mod full_info;
pub mod loss;
pub mod panel;
pub mod prob;
pub mod regret;
pub mod rng;
pub mod simplex;
pub mod wagering;

pub use audit::{
    forward_audit, forward_expected_weight, gd_violation_context, mwu_violation_context,
    myopic_audit, myopic_expected_weight, wsu_forward_context, AuditConfig, AuditReport,
    AuditTarget, ForwardContext, MyopicContext, Verdict,
};
pub use bandit::{
    bandit_doubling_wrapper, default_exp3_eta, run_bandit, BanditAlgorithm, BanditDoublingRun,
    BanditParams, BanditPhaseInfo, BanditRound, BanditRun,
};
pub use error::{CoreError, Result};
pub use full_info::{
    default_full_info_eta, doubling_wrapper, run_full_info, DoublingBase, DoublingRun,
    FullInfoAlgorithm, FullInfoRun, LearnerState, PhaseInfo, PredictionMode,
};
pub use full_info::selection::SelectionEstimate;
pub use loss::LossFunction;
pub use panel::ForecastPanel;
pub use prob::{probabilities, Outcome, Probability};
pub use regret::{cumulative_regret, RegretSeries};
pub use rng::RngStream;
pub use simplex::WeightVector;
pub use wagering::{reduce_to_learner, wswm_payoffs, WagerProfile};
