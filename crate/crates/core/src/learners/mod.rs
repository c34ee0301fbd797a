//! Decision makers behind a common select/observe interface.

use alloc::boxed::Box;
use alloc::format;

use crate::instances::Environment;
use crate::linalg::Vector;
use crate::rng::StreamRng;
use crate::{Error, Result};

mod greedy;
mod linucb;
mod phased_elimination;
mod thompson;

pub use greedy::Greedy;
pub use linucb::LinUcb;
pub use phased_elimination::{
    allocation, eliminate, robust_estimate, BudgetKnowledge, EpochRecord, EpochState, Estimate,
    Parameterisation, PeConfig, PhasedElimination,
};
pub use thompson::LinearThompson;

/// Read-only view of a learner's internal state, for diagnostics and for
/// attacks that target the learner.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub theta_hat: Vector,
    /// Remaining arms (elimination learners only).
    pub active: Option<usize>,
    /// Corruption threshold of the current epoch (phased elimination only).
    pub c_hat: Option<f64>,
    pub epoch: Option<usize>,
}

/// One agent. `select` and `observe` must strictly alternate.
pub trait Learner {
    fn name(&self) -> &str;

    /// Chooses an index into `contexts`, which are this round's feature vectors
    /// (the fixed arm set for non-contextual problems).
    fn select(&mut self, contexts: &[Vector]) -> Result<usize>;

    /// Feeds back the (possibly corrupted) reward of the last selection.
    fn observe(&mut self, reward: f64) -> Result<()>;

    /// True once the learner has used up its horizon.
    fn is_finished(&self) -> bool {
        false
    }

    /// Indices of arms still considered, if the learner eliminates arms.
    fn active_arms(&self) -> Option<&[usize]> {
        None
    }

    /// Current `Ĉ_h`, if the learner follows a corruption-threshold schedule.
    fn corruption_threshold(&self) -> Option<f64> {
        None
    }

    /// The unknown-budget `Ĉ_h` of the current epoch, even for learners told
    /// the budget. Delayed attacks key on it so every variant is hit in the
    /// same epoch.
    fn schedule_threshold(&self) -> Option<f64> {
        None
    }

    fn snapshot(&self) -> Snapshot;
}

/// Tracks the select/observe alternation.
#[derive(Debug, Clone, Default)]
pub(crate) struct Turn<T> {
    pending: Option<T>,
}

impl<T> Turn<T> {
    pub(crate) fn begin(&mut self, what: T) -> Result<()> {
        if self.pending.is_some() {
            return Err(Error::Protocol("select called twice without observe".into()));
        }
        self.pending = Some(what);
        Ok(())
    }

    pub(crate) fn end(&mut self) -> Result<T> {
        self.pending
            .take()
            .ok_or_else(|| Error::Protocol("observe called without a pending selection".into()))
    }
}

pub(crate) fn check_contexts(contexts: &[Vector], dim: usize) -> Result<()> {
    if contexts.is_empty() {
        return Err(Error::Protocol("no contexts offered".into()));
    }
    if let Some(bad) = contexts.iter().find(|c| c.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: bad.len() });
    }
    Ok(())
}

/// Which learner to build, with its hyperparameters.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum LearnerSpec {
    PhasedElimination(PeConfig),
    Greedy,
    LinUcb { lambda: f64, delta: f64 },
    Thompson { prior_variance: f64, noise_variance: f64 },
}

impl LearnerSpec {
    pub fn linucb() -> Self {
        Self::LinUcb { lambda: 1.0, delta: 0.1 }
    }

    pub fn thompson() -> Self {
        Self::Thompson { prior_variance: 0.5, noise_variance: 1.0 }
    }

    /// Builds a fresh learner for `env` with horizon `horizon`; `rng` feeds
    /// learners that randomise.
    pub fn build(&self, env: &Environment, horizon: u64, rng: StreamRng) -> Result<Box<dyn Learner>> {
        let dim = env.dim();
        Ok(match self {
            Self::PhasedElimination(cfg) => {
                let arms = env.fixed_arms().ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "{} needs a fixed arm set, not a contextual instance",
                        cfg.name()
                    ))
                })?;
                Box::new(PhasedElimination::new(arms, horizon, cfg.clone())?)
            }
            Self::Greedy => Box::new(Greedy::new(dim)),
            Self::LinUcb { lambda, delta } => Box::new(LinUcb::new(dim, *lambda, *delta)?),
            Self::Thompson { prior_variance, noise_variance } => {
                Box::new(LinearThompson::new(dim, *prior_variance, *noise_variance, rng)?)
            }
        })
    }
}
