//! The interaction protocol, regret bookkeeping and multi-trial aggregation.
//!
//! Round `t` of an episode:
//! 1. contextual problems draw this round's contexts;
//! 2. the learner picks `A_t`;
//! 3. the noise `ε_t` is drawn;
//! 4. the adversary sees `A_t`, `ε_t`, the instance and the learner's public
//!    state, and returns `c_t` (clipped by its ledger);
//! 5. the learner observes `Y_t = ⟨θ, A_t⟩ + ε_t + c_t`.
//!
//! Regret uses true means only. The corruption-included variant counts
//! `⟨θ, A_t⟩ + c_t` as the collected reward.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::adversaries::{Adversary, AttackContext, AttackSpec, LearnerView};
use crate::instances::{
    make_synthetic_contextual, make_synthetic_fixed, Environment, NoiseModel,
};
use crate::learners::{BudgetKnowledge, Learner, LearnerSpec, Snapshot};
use crate::linalg::{argmax, Vector};
use crate::rng::{stream, Stream};
use crate::{Error, Result};

/// Slack on the post-run budget audit.
pub const AUDIT_TOL: f64 = 1e-9;

/// Optional per-round learner state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundDiagnostics {
    pub epoch: Option<usize>,
    pub active: Option<usize>,
    pub c_hat: Option<f64>,
}

/// Per-round record of one episode. Index `t - 1` holds round `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrace {
    pub seed: u64,
    pub learner: String,
    pub attack: String,
    pub budget: f64,
    pub arms: Vec<usize>,
    pub inst_regret: Vec<f64>,
    pub cum_regret: Vec<f64>,
    /// Cumulative regret with `c_t` counted as part of the reward.
    pub cum_regret_with_corruption: Vec<f64>,
    pub corruption: Vec<f64>,
    /// Ledger balance after each round.
    pub spent: Vec<f64>,
    /// Observed rewards `Y_t`.
    pub observed: Vec<f64>,
    pub diagnostics: Option<Vec<RoundDiagnostics>>,
    pub snapshot: Snapshot,
}

impl RegretTrace {
    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn final_regret(&self) -> f64 {
        self.cum_regret.last().copied().unwrap_or(0.0)
    }

    pub fn total_spent(&self) -> f64 {
        self.spent.last().copied().unwrap_or(0.0)
    }

    /// Cumulative regret after round `t` (1-based; 0 gives 0).
    pub fn regret_at(&self, t: u64) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.cum_regret[(t as usize).min(self.len()) - 1]
        }
    }
}

/// Plays one episode of `horizon` rounds. All randomness outside the learner
/// and adversary comes from `seed`.
pub fn run_episode(
    env: &Environment,
    learner: &mut dyn Learner,
    adversary: &mut Adversary,
    horizon: u64,
    seed: u64,
    diagnostics: bool,
) -> Result<RegretTrace> {
    let n = horizon as usize;
    let mut contexts_rng = stream(seed, Stream::Contexts);
    let mut noise_rng = stream(seed, Stream::Noise);
    let theta = env.theta();
    let noise = env.noise();

    let mut trace = RegretTrace {
        seed,
        learner: learner.name().into(),
        attack: adversary.label().into(),
        budget: adversary.ledger().budget(),
        arms: Vec::with_capacity(n),
        inst_regret: Vec::with_capacity(n),
        cum_regret: Vec::with_capacity(n),
        cum_regret_with_corruption: Vec::with_capacity(n),
        corruption: Vec::with_capacity(n),
        spent: Vec::with_capacity(n),
        observed: Vec::with_capacity(n),
        diagnostics: diagnostics.then(|| Vec::with_capacity(n)),
        snapshot: learner.snapshot(),
    };

    let mut drawn: Vec<Vector> = Vec::new();
    let mut means: Vec<f64> = Vec::new();
    let mut cum = 0.0;
    let mut cum_with = 0.0;
    for t in 1..=horizon {
        let contexts: &[Vector] = match env {
            Environment::Fixed(inst) => inst.arm_set().arms(),
            Environment::Contextual(ci) => {
                ci.model().draw(&mut contexts_rng, &mut drawn);
                &drawn
            }
        };
        means.clear();
        means.extend(contexts.iter().map(|a| theta.dot(a)));
        let best = means[argmax(means.iter().copied()).unwrap_or(0)];

        let arm = learner.select(contexts)?;
        if arm >= contexts.len() {
            return Err(Error::Protocol(format!(
                "{} chose arm {arm} of {} in round {t}",
                learner.name(),
                contexts.len()
            )));
        }
        let eps = noise.sample(&mut noise_rng);
        let mean = means[arm];
        let view = LearnerView::of(&*learner);
        if let Some(diag) = trace.diagnostics.as_mut() {
            let s = learner.snapshot();
            diag.push(RoundDiagnostics { epoch: s.epoch, active: s.active, c_hat: s.c_hat });
        }
        let ctx = AttackContext { round: t, arm, contexts, theta, mean, noise: eps, learner: view };
        let c = adversary.corrupt(&ctx);
        let y = mean + eps + c;
        learner.observe(y)?;

        let r = best - mean;
        cum += r;
        cum_with += best - (mean + c);
        trace.arms.push(arm);
        trace.inst_regret.push(r);
        trace.cum_regret.push(cum);
        trace.cum_regret_with_corruption.push(cum_with);
        trace.corruption.push(c);
        trace.spent.push(adversary.ledger().spent());
        trace.observed.push(y);
    }
    trace.snapshot = learner.snapshot();
    audit(&trace, adversary)?;
    Ok(trace)
}

/// Post-run checks: nonnegative regret increments and a balanced budget.
pub fn audit(trace: &RegretTrace, adversary: &Adversary) -> Result<()> {
    if let Some(t) = trace.inst_regret.iter().position(|&r| !(r >= 0.0)) {
        return Err(Error::Invariant(format!(
            "negative or NaN instantaneous regret {} in round {}",
            trace.inst_regret[t],
            t + 1
        )));
    }
    let ledger = adversary.ledger();
    if ledger.spent() > ledger.budget() {
        return Err(Error::Invariant(format!(
            "adversary spent {} over budget {}",
            ledger.spent(),
            ledger.budget()
        )));
    }
    let total: f64 = trace.corruption.iter().map(|c| c.abs()).sum();
    if (total - ledger.spent()).abs() > AUDIT_TOL * ledger.budget().max(1.0) {
        return Err(Error::Invariant(format!(
            "trace corruption {total} disagrees with ledger {}",
            ledger.spent()
        )));
    }
    Ok(())
}

/// How each trial obtains its environment.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvironmentSpec {
    /// Fixed arms with centers uniform on `[−1/√d, 1/√d]^d`.
    SyntheticFixed { dim: usize, k: usize, noise_variance: f64, instance_seed: Option<u64> },
    /// Perturbed contexts around synthetic centers.
    SyntheticContextual { dim: usize, k: usize, eta: f64, noise_variance: f64, instance_seed: Option<u64> },
    /// The same environment for every trial.
    Given(Box<Environment>),
}

impl EnvironmentSpec {
    /// Environment for the trial with `seed`; synthetic instances are drawn from
    /// `instance_seed` when set, else from the trial seed.
    pub fn realise(&self, seed: u64) -> Result<Environment> {
        Ok(match self {
            Self::SyntheticFixed { dim, k, noise_variance, instance_seed } => {
                let inst = make_synthetic_fixed(*dim, *k, instance_seed.unwrap_or(seed))?;
                inst.with_noise(NoiseModel::gaussian(*noise_variance)?).into()
            }
            Self::SyntheticContextual { dim, k, eta, noise_variance, instance_seed } => {
                make_synthetic_contextual(*dim, *k, *eta, *noise_variance, instance_seed.unwrap_or(seed))?.into()
            }
            Self::Given(env) => (**env).clone(),
        })
    }
}

/// Everything needed to run one trial from a seed.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub environment: EnvironmentSpec,
    pub learner: LearnerSpec,
    pub attack: AttackSpec,
    pub budget: f64,
    pub horizon: u64,
    pub diagnostics: bool,
}

/// Runs the trial with `seed`.
pub fn run_trial(spec: &ExperimentSpec, seed: u64) -> Result<RegretTrace> {
    if spec.horizon == 0 {
        return Err(Error::InvalidParameter("horizon T must be >= 1".into()));
    }
    let env = spec.environment.realise(seed)?;
    let mut learner = spec.learner.build(&env, spec.horizon, stream(seed, Stream::Learner))?;
    let mut adversary = spec.attack.build(
        spec.budget,
        env.dim(),
        env.num_arms(),
        &*learner,
        stream(seed, Stream::Adversary),
    )?;
    run_episode(&env, &mut *learner, &mut adversary, spec.horizon, seed, spec.diagnostics)
}

/// Trial `i` uses seed `base_seed + i`.
pub fn trial_seeds(n_trials: usize, base_seed: u64) -> Vec<u64> {
    (0..n_trials as u64).map(|i| base_seed.wrapping_add(i)).collect()
}

/// Runs `n_trials` trials one after another and aggregates them on `grid`.
pub fn run_trials(spec: &ExperimentSpec, n_trials: usize, base_seed: u64, grid: &[u64]) -> Result<TrialSummary> {
    if n_trials == 0 {
        return Err(Error::InvalidParameter("n_trials must be >= 1".into()));
    }
    let traces = trial_seeds(n_trials, base_seed)
        .into_iter()
        .enumerate()
        .map(|(index, seed)| {
            run_trial(spec, seed).map_err(|e| Error::Trial { index, seed, source: Box::new(e) })
        })
        .collect::<Result<Vec<_>>>()?;
    TrialSummary::from_traces(&traces, grid)
}

/// Powers of two up to `horizon`, `horizon` itself and any `extra` rounds
/// within range; sorted, without duplicates.
pub fn checkpoints(horizon: u64, extra: &[u64]) -> Vec<u64> {
    let mut grid: Vec<u64> = (0..64).map(|i| 1u64 << i).take_while(|&p| p <= horizon).collect();
    grid.push(horizon);
    grid.extend(extra.iter().copied().filter(|&t| t >= 1 && t <= horizon));
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// Pointwise statistics over trials on a common round grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSummary {
    /// Trial seeds, ascending.
    pub seeds: Vec<u64>,
    pub final_regrets: Vec<f64>,
    pub final_spent: Vec<f64>,
    pub grid: Vec<u64>,
    pub mean: Vec<f64>,
    /// Sample standard deviation (0 for a single trial).
    pub std: Vec<f64>,
    pub mean_with_corruption: Vec<f64>,
    /// Each trial's cumulative regret on the grid, in seed order.
    pub curves: Vec<Vec<f64>>,
}

impl TrialSummary {
    /// Aggregates traces in seed order, so the input order does not matter.
    pub fn from_traces(traces: &[RegretTrace], grid: &[u64]) -> Result<Self> {
        if traces.is_empty() {
            return Err(Error::InvalidParameter("no traces to aggregate".into()));
        }
        let len = traces[0].len();
        if traces.iter().any(|t| t.len() != len) {
            return Err(Error::Invariant("traces of different lengths".into()));
        }
        if let Some(&bad) = grid.iter().find(|&&t| t == 0 || t as usize > len) {
            return Err(Error::InvalidParameter(format!("checkpoint {bad} outside 1..={len}")));
        }
        let mut order: Vec<&RegretTrace> = traces.iter().collect();
        order.sort_by_key(|t| t.seed);

        let n = order.len() as f64;
        let curves: Vec<Vec<f64>> = order.iter().map(|tr| grid.iter().map(|&t| tr.regret_at(t)).collect()).collect();
        let mut mean = alloc::vec![0.0; grid.len()];
        let mut mean_with = alloc::vec![0.0; grid.len()];
        for (tr, curve) in order.iter().zip(&curves) {
            for (j, &t) in grid.iter().enumerate() {
                mean[j] += curve[j];
                mean_with[j] += tr.cum_regret_with_corruption[t as usize - 1];
            }
        }
        mean.iter_mut().chain(mean_with.iter_mut()).for_each(|m| *m /= n);
        let std = (0..grid.len())
            .map(|j| {
                if order.len() < 2 {
                    return 0.0;
                }
                let ss: f64 = curves.iter().map(|c| (c[j] - mean[j]).powi(2)).sum();
                (ss / (n - 1.0)).sqrt()
            })
            .collect();
        Ok(Self {
            seeds: order.iter().map(|t| t.seed).collect(),
            final_regrets: order.iter().map(|t| t.final_regret()).collect(),
            final_spent: order.iter().map(|t| t.total_spent()).collect(),
            grid: grid.to_vec(),
            mean,
            std,
            mean_with_corruption: mean_with,
            curves,
        })
    }

    pub fn n_trials(&self) -> usize {
        self.seeds.len()
    }

    /// Positions (into `seeds`) of the `k` largest final regrets, worst first;
    /// ties go to the smaller seed.
    pub fn worst(&self, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.seeds.len()).collect();
        idx.sort_by(|&a, &b| {
            self.final_regrets[b]
                .total_cmp(&self.final_regrets[a])
                .then(self.seeds[a].cmp(&self.seeds[b]))
        });
        idx.truncate(k);
        idx
    }

    /// Mean final regret.
    pub fn mean_final(&self) -> f64 {
        self.final_regrets.iter().sum::<f64>() / self.final_regrets.len() as f64
    }

    /// Mean regret at checkpoint `t`, if `t` is on the grid.
    pub fn mean_at(&self, t: u64) -> Option<f64> {
        self.grid.iter().position(|&g| g == t).map(|j| self.mean[j])
    }
}

/// Average per-round regret over rounds `(from, to]`.
pub fn slope(trace: &RegretTrace, from: u64, to: u64) -> f64 {
    if to <= from {
        return 0.0;
    }
    (trace.regret_at(to) - trace.regret_at(from)) / (to - from) as f64
}

/// [`slope`] over the last `fraction` of the horizon.
pub fn tail_slope(trace: &RegretTrace, fraction: f64) -> f64 {
    let t = trace.len() as u64;
    let from = t - ((t as f64 * fraction).round() as u64).min(t);
    slope(trace, from, t)
}

/// Parameter varied by [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    Budget,
    Eta,
    Algorithm,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepValue {
    Real(f64),
    Learner(LearnerSpec),
}

/// Copy of `spec` with `axis` set to `value`. A budget sweep also updates the
/// budget of learners that are told it.
pub fn apply_sweep(spec: &ExperimentSpec, axis: SweepAxis, value: &SweepValue) -> Result<ExperimentSpec> {
    let mut out = spec.clone();
    match (axis, value) {
        (SweepAxis::Budget, SweepValue::Real(c)) => {
            out.budget = *c;
            if let LearnerSpec::PhasedElimination(cfg) = &mut out.learner {
                if let BudgetKnowledge::Known(_) = cfg.budget {
                    if cfg.robust {
                        cfg.budget = BudgetKnowledge::Known(*c);
                    }
                }
            }
        }
        (SweepAxis::Eta, SweepValue::Real(e)) => match &mut out.environment {
            EnvironmentSpec::SyntheticContextual { eta, .. } => *eta = *e,
            _ => return Err(Error::InvalidParameter("an eta sweep needs a synthetic contextual instance".into())),
        },
        (SweepAxis::Algorithm, SweepValue::Learner(l)) => out.learner = l.clone(),
        _ => return Err(Error::InvalidParameter(format!("sweep value {value:?} does not fit axis {axis:?}"))),
    }
    Ok(out)
}

/// One [`run_trials`] per value.
pub fn sweep(
    spec: &ExperimentSpec,
    axis: SweepAxis,
    values: &[SweepValue],
    n_trials: usize,
    base_seed: u64,
    grid: &[u64],
) -> Result<Vec<(SweepValue, TrialSummary)>> {
    values
        .iter()
        .map(|v| {
            let s = apply_sweep(spec, axis, v)?;
            Ok((v.clone(), run_trials(&s, n_trials, base_seed, grid)?))
        })
        .collect()
}
