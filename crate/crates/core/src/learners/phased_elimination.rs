//! Robust Phased Elimination.
//!
//! Epoch `h` computes a near G-optimal design over the surviving arms, plays
//! every supported arm `u_h(a) = ⌈m_h max{ζ_h(a), ν}⌉` times, estimates θ from
//! per-arm reward averages, and keeps the arms whose estimated gap is below a
//! confidence width enlarged by the corruption threshold `Ĉ_h`. `m_{h+1} = 2 m_h`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use nalgebra::{Cholesky, Dyn};
#[allow(unused_imports)]
use num_traits::Float;

use super::{check_contexts, Learner, Snapshot, Turn};
use crate::design::{self, frank_wolfe_design, Design, DesignOptions};
use crate::instances::ArmSet;
use crate::linalg::{self, SpanBasis, Vector};
use crate::{Error, Result};

/// Whether the learner is told the corruption budget.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum BudgetKnowledge {
    Known(f64),
    Unknown,
}

/// Constants from the analysis, or the tuned practical variant
/// (`m₀ = d`, `Ĉ_h = min{√T, 2^{H−h}}`, no `1/ν` in the corruption width).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Parameterisation {
    Theoretical,
    Practical,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PeConfig {
    pub budget: BudgetKnowledge,
    pub params: Parameterisation,
    /// `false` drops the corruption term from the elimination width.
    pub robust: bool,
    /// Confidence `δ`; defaults to 0.1.
    pub delta: Option<f64>,
    /// Truncation `ν`; defaults to `1/m₀` (theoretical) or 0.05 (practical).
    pub nu: Option<f64>,
    pub design: DesignOptions,
}

impl PeConfig {
    fn base(budget: BudgetKnowledge, params: Parameterisation, robust: bool) -> Self {
        Self { budget, params, robust, delta: None, nu: None, design: DesignOptions::default() }
    }

    pub fn known(c: f64) -> Self {
        Self::base(BudgetKnowledge::Known(c), Parameterisation::Theoretical, true)
    }

    pub fn unknown() -> Self {
        Self::base(BudgetKnowledge::Unknown, Parameterisation::Theoretical, true)
    }

    pub fn practical_known(c: f64) -> Self {
        Self::base(BudgetKnowledge::Known(c), Parameterisation::Practical, true)
    }

    pub fn practical_unknown() -> Self {
        Self::base(BudgetKnowledge::Unknown, Parameterisation::Practical, true)
    }

    /// Plain phased elimination: the corruption width is removed.
    pub fn nonrobust(params: Parameterisation) -> Self {
        Self::base(BudgetKnowledge::Known(0.0), params, false)
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = Some(nu);
        self
    }

    pub fn name(&self) -> String {
        let p = match self.params {
            Parameterisation::Theoretical => "",
            Parameterisation::Practical => "_practical",
        };
        if !self.robust {
            return format!("nonrobust_pe{p}");
        }
        match self.budget {
            BudgetKnowledge::Known(_) => format!("rpe{p}_known"),
            BudgetKnowledge::Unknown => format!("rpe{p}_unknown"),
        }
    }
}

/// `u(a) = ⌈m max{ζ(a), ν}⌉` on the support of `ζ`, zero elsewhere.
pub fn allocation(weights: &[f64], m: f64, nu: f64) -> Vec<u64> {
    weights
        .iter()
        .map(|&w| {
            if w > 0.0 {
                let x = m * w.max(nu);
                // Guard against products such as 872 * (1/218) landing a hair above an integer.
                (x - 1e-9 * x.max(1.0)).ceil().max(1.0) as u64
            } else {
                0
            }
        })
        .collect()
}

/// Per-epoch least-squares estimate on the span of the played arms.
#[derive(Debug, Clone)]
pub struct Estimate {
    pub theta_hat: Vector,
    basis: SpanBasis,
    chol: Cholesky<f64, Dyn>,
}

impl Estimate {
    /// `‖b‖²_{Γ⁻¹}` with `Γ = Σ u(a) a aᵀ`.
    pub fn norm_sq(&self, b: &Vector) -> Result<f64> {
        let residual = self.basis.residual(b);
        if residual > 1e-8 * b.norm().max(1.0) {
            return Err(Error::OutsideSpan { residual });
        }
        let x = self.basis.project(b);
        Ok(x.dot(&self.chol.solve(&x)))
    }
}

/// `θ̂ = Γ⁻¹ Σ_a a · (sum of rewards observed for a)`, `Γ = Σ_a u(a) a aᵀ`,
/// computed in an orthonormal basis of the played arms and lifted back.
/// `counts[i]` and `reward_sums[i]` belong to `arms[i]`.
pub fn robust_estimate(arms: &[Vector], counts: &[u64], reward_sums: &[f64]) -> Result<Estimate> {
    if arms.len() != counts.len() || arms.len() != reward_sums.len() {
        return Err(Error::DimensionMismatch { expected: arms.len(), got: counts.len().min(reward_sums.len()) });
    }
    let played: Vec<&Vector> = arms.iter().zip(counts).filter(|(_, &c)| c > 0).map(|(a, _)| a).collect();
    if played.is_empty() {
        return Err(Error::Singular("no arm was played in the epoch".into()));
    }
    let played: Vec<Vector> = played.into_iter().cloned().collect();
    let basis = SpanBasis::of(&played)?;
    let r = basis.rank();
    let mut rhs = Vector::zeros(r);
    let mut gram = linalg::Matrix::zeros(r, r);
    for ((a, &c), &s) in arms.iter().zip(counts).zip(reward_sums) {
        if c == 0 {
            continue;
        }
        let x = basis.project(a);
        gram.ger(c as f64, &x, &x, 1.0);
        rhs.axpy(s, &x, 1.0);
    }
    let chol = linalg::cholesky(gram, "epoch information matrix")?;
    let theta_hat = basis.lift(&chol.solve(&rhs));
    Ok(Estimate { theta_hat, basis, chol })
}

/// Arms of `active` whose estimated gap `max_{a'} ⟨θ̂, a' − a⟩` is at most `threshold`.
pub fn eliminate(arms: &[Vector], active: &[usize], theta_hat: &Vector, threshold: f64) -> Vec<usize> {
    let scores: Vec<f64> = active.iter().map(|&i| theta_hat.dot(&arms[i])).collect();
    let best = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    active
        .iter()
        .zip(&scores)
        .filter(|(_, &s)| best - s <= threshold)
        .map(|(&i, _)| i)
        .collect()
}

/// Summary of one epoch, including the quantities bounded in the analysis.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EpochRecord {
    pub h: usize,
    pub m: f64,
    pub c_hat: f64,
    pub active: usize,
    pub support: usize,
    /// Planned `u_h = Σ u_h(a)`.
    pub length: u64,
    /// Pulls actually made (less than `length` for a truncated last epoch).
    pub played: u64,
    /// `2 m_h (1 + ν m₀)`.
    pub length_bound: f64,
    /// `max_{b ∈ A_h} ‖b‖²_{Γ_h⁻¹}`; NaN for a truncated epoch.
    pub max_norm_sq: f64,
    /// `2d / m_h`.
    pub norm_bound: f64,
    pub threshold: f64,
    pub eliminated: usize,
    pub design_value: f64,
    pub completed: bool,
}

/// State of the running epoch.
#[derive(Debug, Clone)]
pub struct EpochState {
    pub h: usize,
    pub active: Vec<usize>,
    pub m: f64,
    pub c_hat: f64,
    pub design: Design,
    /// `(arm index, u_h(a))` for the support, ascending by arm index.
    pub plan: Vec<(usize, u64)>,
    pub reward_sums: Vec<f64>,
    /// Position in `plan` and pulls made of that entry.
    cursor: (usize, u64),
    pub played: u64,
}

impl EpochState {
    pub fn length(&self) -> u64 {
        self.plan.iter().map(|(_, c)| c).sum()
    }

    fn current_arm(&self) -> usize {
        self.plan[self.cursor.0].0
    }

    fn record(&mut self, reward: f64) -> bool {
        self.reward_sums[self.cursor.0] += reward;
        self.played += 1;
        self.cursor.1 += 1;
        if self.cursor.1 == self.plan[self.cursor.0].1 {
            self.cursor = (self.cursor.0 + 1, 0);
        }
        self.cursor.0 == self.plan.len()
    }
}

#[derive(Debug, Clone)]
pub struct PhasedElimination {
    name: String,
    arms: Vec<Vector>,
    dim: usize,
    horizon: u64,
    cfg: PeConfig,
    delta: f64,
    nu: f64,
    m0: f64,
    /// `⌈log₂ T⌉`, at least 1.
    log_horizon: f64,
    h: usize,
    m: f64,
    active: Vec<usize>,
    epoch: Option<EpochState>,
    theta_hat: Vector,
    t: u64,
    turn: Turn<usize>,
    log: Vec<EpochRecord>,
}

impl PhasedElimination {
    pub fn new(arms: &ArmSet, horizon: u64, cfg: PeConfig) -> Result<Self> {
        let dim = arms.dim();
        if horizon == 0 {
            return Err(Error::InvalidParameter("horizon T must be >= 1".into()));
        }
        let m0 = match cfg.params {
            Parameterisation::Theoretical => design::support_bound(dim).ceil(),
            Parameterisation::Practical => dim as f64,
        };
        let delta = cfg.delta.unwrap_or(0.1);
        let nu = cfg.nu.unwrap_or(match cfg.params {
            Parameterisation::Theoretical => 1.0 / m0,
            Parameterisation::Practical => 0.05,
        });
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
        }
        if !(nu > 0.0 && nu < 1.0) {
            return Err(Error::InvalidParameter(format!("nu must lie in (0, 1), got {nu}")));
        }
        if let BudgetKnowledge::Known(c) = cfg.budget {
            if !(c >= 0.0 && c.is_finite()) {
                return Err(Error::InvalidParameter(format!("known budget must be >= 0, got {c}")));
            }
        }
        let log_horizon = (horizon as f64).log2().ceil().max(1.0);
        Ok(Self {
            name: cfg.name(),
            arms: arms.arms().to_vec(),
            dim,
            horizon,
            delta,
            nu,
            m0,
            log_horizon,
            h: 0,
            m: m0,
            active: (0..arms.len()).collect(),
            epoch: None,
            theta_hat: Vector::zeros(dim),
            t: 0,
            turn: Turn::default(),
            log: Vec::new(),
            cfg,
        })
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Confidence used in the width: `δ / (2k ⌈log₂ T⌉)` with the analysis
    /// constants, plain `δ` in the practical variant.
    pub fn effective_delta(&self) -> f64 {
        match self.cfg.params {
            Parameterisation::Theoretical => self.delta / (2.0 * self.arms.len() as f64 * self.log_horizon),
            Parameterisation::Practical => self.delta,
        }
    }

    /// `Ĉ_h` for epoch `h`.
    pub fn c_hat(&self, h: usize) -> f64 {
        match self.cfg.budget {
            BudgetKnowledge::Known(c) => c,
            BudgetKnowledge::Unknown => self.unknown_c_hat(h),
        }
    }

    /// The unknown-budget schedule `Ĉ_h` under this parameterisation, whatever
    /// the learner is told.
    pub fn unknown_c_hat(&self, h: usize) -> f64 {
        let t = self.horizon as f64;
        let decay = (self.log_horizon - h as f64).exp2();
        match self.cfg.params {
            Parameterisation::Theoretical => {
                (t.sqrt() / (self.m0 * self.log_horizon)).min(self.m0 * (self.dim as f64).sqrt() * decay)
            }
            Parameterisation::Practical => t.sqrt().min(decay),
        }
    }

    /// Right-hand side of the retain condition for an epoch with `m` and `c_hat`.
    pub fn threshold(&self, m: f64, c_hat: f64) -> f64 {
        let d = self.dim as f64;
        let noise = 2.0 * (4.0 * d / m * (1.0 / self.effective_delta()).ln()).sqrt();
        if !self.cfg.robust {
            return noise;
        }
        let corruption = match (self.cfg.params, self.cfg.budget) {
            (Parameterisation::Theoretical, _) => {
                2.0 * c_hat / (m * self.nu) * (4.0 * d * (1.0 + self.nu * self.m0)).sqrt()
            }
            (Parameterisation::Practical, BudgetKnowledge::Unknown) => 2.0 * c_hat / m * (4.0 * d).sqrt(),
            (Parameterisation::Practical, BudgetKnowledge::Known(_)) => c_hat / m * d.sqrt(),
        };
        noise + corruption
    }

    pub fn epoch(&self) -> Option<&EpochState> {
        self.epoch.as_ref()
    }

    pub fn epoch_index(&self) -> usize {
        self.h
    }

    /// Completed (and, at the horizon, truncated) epochs so far.
    pub fn epoch_log(&self) -> &[EpochRecord] {
        &self.log
    }

    pub fn theta_hat(&self) -> &Vector {
        &self.theta_hat
    }

    fn plan_epoch(&self) -> Result<EpochState> {
        let vectors: Vec<Vector> = self.active.iter().map(|&i| self.arms[i].clone()).collect();
        let design = frank_wolfe_design(&vectors, self.cfg.design)?;
        let counts = allocation(&design.weights, self.m, self.nu);
        let plan: Vec<(usize, u64)> = self
            .active
            .iter()
            .zip(&counts)
            .filter(|(_, &c)| c > 0)
            .map(|(&i, &c)| (i, c))
            .collect();
        Ok(EpochState {
            h: self.h,
            active: self.active.clone(),
            m: self.m,
            c_hat: self.c_hat(self.h),
            design,
            reward_sums: vec![0.0; plan.len()],
            plan,
            cursor: (0, 0),
            played: 0,
        })
    }

    fn record_for(&self, epoch: &EpochState, completed: bool) -> EpochRecord {
        EpochRecord {
            h: epoch.h,
            m: epoch.m,
            c_hat: epoch.c_hat,
            active: epoch.active.len(),
            support: epoch.plan.len(),
            length: epoch.length(),
            played: epoch.played,
            length_bound: 2.0 * epoch.m * (1.0 + self.nu * self.m0),
            max_norm_sq: f64::NAN,
            norm_bound: 2.0 * self.dim as f64 / epoch.m,
            threshold: self.threshold(epoch.m, epoch.c_hat),
            eliminated: 0,
            design_value: epoch.design.value,
            completed,
        }
    }

    fn finish_epoch(&mut self, epoch: EpochState) -> Result<()> {
        let support: Vec<Vector> = epoch.plan.iter().map(|&(i, _)| self.arms[i].clone()).collect();
        let counts: Vec<u64> = epoch.plan.iter().map(|&(_, c)| c).collect();
        let estimate = robust_estimate(&support, &counts, &epoch.reward_sums)?;
        let mut record = self.record_for(&epoch, true);
        let mut max_norm_sq = 0.0f64;
        for &b in &epoch.active {
            max_norm_sq = max_norm_sq.max(estimate.norm_sq(&self.arms[b])?);
        }
        record.max_norm_sq = max_norm_sq;
        debug_assert!(
            max_norm_sq <= record.norm_bound * (1.0 + 1e-9),
            "weighted norm {max_norm_sq} exceeds 2d/m = {}",
            record.norm_bound
        );
        let survivors = eliminate(&self.arms, &epoch.active, &estimate.theta_hat, record.threshold);
        record.eliminated = epoch.active.len() - survivors.len();
        self.active = survivors;
        self.theta_hat = estimate.theta_hat;
        self.log.push(record);
        self.h += 1;
        self.m *= 2.0;
        Ok(())
    }
}

impl Learner for PhasedElimination {
    fn name(&self) -> &str {
        &self.name
    }

    fn select(&mut self, contexts: &[Vector]) -> Result<usize> {
        check_contexts(contexts, self.dim)?;
        if contexts.len() != self.arms.len() {
            return Err(Error::Protocol(format!(
                "phased elimination was built for {} arms, offered {}",
                self.arms.len(),
                contexts.len()
            )));
        }
        if self.is_finished() {
            return Err(Error::Protocol("horizon exhausted".into()));
        }
        if self.epoch.is_none() {
            self.epoch = Some(self.plan_epoch()?);
        }
        let arm = self.epoch.as_ref().map(EpochState::current_arm).unwrap_or(0);
        self.turn.begin(arm)?;
        Ok(arm)
    }

    fn observe(&mut self, reward: f64) -> Result<()> {
        self.turn.end()?;
        let mut epoch = self
            .epoch
            .take()
            .ok_or_else(|| Error::Protocol("no epoch in progress".into()))?;
        let done = epoch.record(reward);
        self.t += 1;
        if done {
            self.finish_epoch(epoch)?;
        } else if self.t == self.horizon {
            let record = self.record_for(&epoch, false);
            self.log.push(record);
            self.epoch = Some(epoch);
        } else {
            self.epoch = Some(epoch);
        }
        Ok(())
    }

    fn is_finished(&self) -> bool {
        self.t >= self.horizon
    }

    fn active_arms(&self) -> Option<&[usize]> {
        Some(&self.active)
    }

    fn corruption_threshold(&self) -> Option<f64> {
        Some(if self.cfg.robust { self.c_hat(self.h) } else { 0.0 })
    }

    fn schedule_threshold(&self) -> Option<f64> {
        Some(self.unknown_c_hat(self.h))
    }

    fn snapshot(&self) -> Snapshot {
        Snapshot {
            theta_hat: self.theta_hat.clone(),
            active: Some(self.active.len()),
            c_hat: self.corruption_threshold(),
            epoch: Some(self.h),
        }
    }
}
