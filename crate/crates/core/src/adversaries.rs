//! Reward-corruption attacks.
//!
//! An [`Adversary`] pairs one attack rule with a [`BudgetLedger`]. Each round it
//! sees the pulled arm and the noise draw, proposes a corruption `c_t`, and the
//! ledger clips it so that `Σ|c_t|` never exceeds the budget `C`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal};

use crate::learners::Learner;
use crate::linalg::{argmax, Vector};
use crate::rng::StreamRng;
use crate::{Error, Result};

pub const DEFAULT_V_TARGET: f64 = -1.0;
pub const DEFAULT_EPS0: f64 = 0.01;

/// Running account of the corruption budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetLedger {
    budget: f64,
    spent: f64,
}

impl BudgetLedger {
    pub fn new(budget: f64) -> Result<Self> {
        if !(budget >= 0.0 && budget.is_finite()) {
            return Err(Error::InvalidParameter(format!("budget C must be finite and >= 0, got {budget}")));
        }
        Ok(Self { budget, spent: 0.0 })
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn spent(&self) -> f64 {
        self.spent
    }

    pub fn remaining(&self) -> f64 {
        self.budget - self.spent
    }

    pub fn is_exhausted(&self) -> bool {
        self.spent >= self.budget
    }

    /// Applies as much of `proposed` as the budget allows, keeping its sign.
    /// Returns the applied corruption.
    pub fn charge(&mut self, proposed: f64) -> f64 {
        if proposed == 0.0 || proposed.is_nan() || self.is_exhausted() {
            return 0.0;
        }
        let remaining = self.remaining();
        if proposed.abs() >= remaining {
            self.spent = self.budget;
            remaining.copysign(proposed)
        } else {
            self.spent += proposed.abs();
            proposed
        }
    }
}

/// What the learner exposes to the adversary.
#[derive(Debug, Clone, Copy, Default)]
pub struct LearnerView<'a> {
    pub active: Option<&'a [usize]>,
    pub c_hat: Option<f64>,
    /// See [`Learner::schedule_threshold`].
    pub schedule: Option<f64>,
}

impl<'a> LearnerView<'a> {
    pub fn of(learner: &'a dyn Learner) -> Self {
        Self {
            active: learner.active_arms(),
            c_hat: learner.corruption_threshold(),
            schedule: learner.schedule_threshold(),
        }
    }
}

/// Everything the adversary observes before choosing `c_t`.
#[derive(Debug, Clone, Copy)]
pub struct AttackContext<'a> {
    /// 1-based round.
    pub round: u64,
    pub arm: usize,
    /// This round's feature vectors (the arm set for fixed instances).
    pub contexts: &'a [Vector],
    pub theta: &'a Vector,
    /// `⟨θ, A_t⟩`.
    pub mean: f64,
    /// `ε_t`.
    pub noise: f64,
    pub learner: LearnerView<'a>,
}

impl AttackContext<'_> {
    pub fn mean_of(&self, i: usize) -> f64 {
        self.theta.dot(&self.contexts[i])
    }
}

/// A corruption rule before budget clipping.
pub trait Attack: core::fmt::Debug {
    fn propose(&mut self, ctx: &AttackContext<'_>) -> f64;
}

/// Shift every non-target arm's mean to `v_target`.
#[derive(Debug, Clone)]
pub struct Garcelon {
    pub target: usize,
    pub v_target: f64,
}

impl Attack for Garcelon {
    fn propose(&mut self, ctx: &AttackContext<'_>) -> f64 {
        if ctx.arm == self.target {
            0.0
        } else {
            self.v_target - ctx.mean
        }
    }
}

/// Push every non-target arm at least `eps0` below the target's mean.
#[derive(Debug, Clone)]
pub struct OracleMab {
    pub target: usize,
    pub eps0: f64,
}

impl Attack for OracleMab {
    fn propose(&mut self, ctx: &AttackContext<'_>) -> f64 {
        if ctx.arm == self.target {
            return 0.0;
        }
        let shift = ctx.mean - ctx.mean_of(self.target) + self.eps0;
        if shift > 0.0 {
            -shift
        } else {
            0.0
        }
    }
}

/// Garcelon's rule with the target re-chosen each round as the best context
/// under a decoy parameter.
#[derive(Debug, Clone)]
pub struct SimpleTheta {
    pub theta_target: Vector,
    pub v_target: f64,
}

impl SimpleTheta {
    /// Decoy drawn uniformly from the unit sphere.
    pub fn random(dim: usize, v_target: f64, rng: &mut StreamRng) -> Self {
        loop {
            let z = Vector::from_fn(dim, |_, _| StandardNormal.sample(&mut *rng));
            let n = z.norm();
            if n > 0.0 {
                return Self { theta_target: z / n, v_target };
            }
        }
    }

    pub fn target(&self, contexts: &[Vector]) -> usize {
        argmax(contexts.iter().map(|a| self.theta_target.dot(a))).unwrap_or(0)
    }
}

impl Attack for SimpleTheta {
    fn propose(&mut self, ctx: &AttackContext<'_>) -> f64 {
        let mut inner = Garcelon { target: self.target(ctx.contexts), v_target: self.v_target };
        inner.propose(ctx)
    }
}

/// Observed mean becomes `⟨−θ, A_t⟩`.
#[derive(Debug, Clone, Default)]
pub struct FlipTheta;

impl Attack for FlipTheta {
    fn propose(&mut self, ctx: &AttackContext<'_>) -> f64 {
        -2.0 * ctx.mean
    }
}

/// When one of the `n` best remaining arms is pulled, the observed reward is
/// forced to `-1`.
#[derive(Debug, Clone)]
pub struct TopN {
    pub n: usize,
}

impl TopN {
    /// The `n` best candidates by true mean; ties go to the lower index.
    pub fn top(&self, ctx: &AttackContext<'_>) -> Vec<usize> {
        let mut candidates: Vec<usize> = match ctx.learner.active {
            Some(active) => active.to_vec(),
            None => (0..ctx.contexts.len()).collect(),
        };
        candidates.sort_by(|&i, &j| ctx.mean_of(j).total_cmp(&ctx.mean_of(i)).then(i.cmp(&j)));
        candidates.truncate(self.n);
        candidates
    }
}

impl Attack for TopN {
    fn propose(&mut self, ctx: &AttackContext<'_>) -> f64 {
        if self.top(ctx).contains(&ctx.arm) {
            -1.0 - (ctx.mean + ctx.noise)
        } else {
            0.0
        }
    }
}

/// Moves every mean to zero, for the first `rounds` rounds if given.
#[derive(Debug, Clone)]
pub struct Zeroing {
    pub rounds: Option<u64>,
}

impl Attack for Zeroing {
    fn propose(&mut self, ctx: &AttackContext<'_>) -> f64 {
        match self.rounds {
            Some(r) if ctx.round > r => 0.0,
            _ => -ctx.mean,
        }
    }
}

/// Makes arm `i` look as if its mean were `means[i]`.
#[derive(Debug, Clone)]
pub struct Mimic {
    pub means: Vec<f64>,
}

impl Attack for Mimic {
    fn propose(&mut self, ctx: &AttackContext<'_>) -> f64 {
        self.means.get(ctx.arm).map_or(0.0, |m| m - ctx.mean)
    }
}

/// Stays silent until the learner's unknown-budget threshold drops below the true
/// budget, then hands over to `inner` for good.
#[derive(Debug)]
pub struct DelayedStart {
    pub inner: Box<dyn Attack>,
    pub budget: f64,
    started: Option<u64>,
}

impl DelayedStart {
    pub fn new(inner: Box<dyn Attack>, budget: f64) -> Self {
        Self { inner, budget, started: None }
    }

    /// Round at which the attack switched on.
    pub fn started(&self) -> Option<u64> {
        self.started
    }
}

impl Attack for DelayedStart {
    fn propose(&mut self, ctx: &AttackContext<'_>) -> f64 {
        if self.started.is_none() {
            match ctx.learner.schedule {
                Some(c) if c < self.budget => self.started = Some(ctx.round),
                _ => return 0.0,
            }
        }
        self.inner.propose(ctx)
    }
}

/// Serializable description of an attack.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum AttackSpec {
    None,
    Garcelon { target: usize, v_target: f64 },
    OracleMab { target: usize, eps0: f64 },
    SimpleTheta { v_target: f64 },
    FlipTheta,
    TopN { n: usize },
    Zeroing { rounds: Option<u64> },
    Mimic { means: Vec<f64> },
    DelayedStart(Box<AttackSpec>),
}

impl AttackSpec {
    pub fn garcelon(target: usize) -> Self {
        Self::Garcelon { target, v_target: DEFAULT_V_TARGET }
    }

    pub fn oracle_mab(target: usize) -> Self {
        Self::OracleMab { target, eps0: DEFAULT_EPS0 }
    }

    pub fn simple_theta() -> Self {
        Self::SimpleTheta { v_target: DEFAULT_V_TARGET }
    }

    pub fn delayed(self) -> Self {
        match self {
            Self::DelayedStart(_) => self,
            other => Self::DelayedStart(Box::new(other)),
        }
    }

    pub fn is_delayed(&self) -> bool {
        matches!(self, Self::DelayedStart(_))
    }

    /// Short name, e.g. `flip_theta+delayed_start` or `top_n:3`.
    pub fn label(&self) -> String {
        match self {
            Self::None => "none".into(),
            Self::Garcelon { target, .. } => format!("garcelon:{target}"),
            Self::OracleMab { target, .. } => format!("oracle_mab:{target}"),
            Self::SimpleTheta { .. } => "simple_theta".into(),
            Self::FlipTheta => "flip_theta".into(),
            Self::TopN { n } => format!("top_n:{n}"),
            Self::Zeroing { .. } => "zeroing".into(),
            Self::Mimic { .. } => "mimic".into(),
            Self::DelayedStart(inner) => format!("{}+delayed_start", inner.label()),
        }
    }

    fn validate(&self, num_arms: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            Self::Garcelon { target, v_target } => {
                if *target >= num_arms {
                    return bad(format!("attack target {target} out of range for {num_arms} arms"));
                }
                if !v_target.is_finite() {
                    return bad("v_target must be finite".into());
                }
            }
            Self::OracleMab { target, eps0 } => {
                if *target >= num_arms {
                    return bad(format!("attack target {target} out of range for {num_arms} arms"));
                }
                if !(*eps0 > 0.0 && eps0.is_finite()) {
                    return bad(format!("eps0 must be > 0, got {eps0}"));
                }
            }
            Self::SimpleTheta { v_target } if !v_target.is_finite() => {
                return bad("v_target must be finite".into());
            }
            Self::TopN { n } if *n == 0 => return bad("top_n needs N >= 1".into()),
            Self::Mimic { means } => {
                if means.len() != num_arms || means.iter().any(|m| !m.is_finite()) {
                    return bad(format!("mimic needs {num_arms} finite means, got {}", means.len()));
                }
            }
            Self::DelayedStart(inner) => {
                if inner.is_delayed() {
                    return bad("delayed start cannot be nested".into());
                }
                inner.validate(num_arms)?;
            }
            _ => {}
        }
        Ok(())
    }

    fn rule(&self, dim: usize, budget: f64, rng: &mut StreamRng) -> Option<Box<dyn Attack>> {
        Some(match self {
            Self::None => return None,
            Self::Garcelon { target, v_target } => Box::new(Garcelon { target: *target, v_target: *v_target }),
            Self::OracleMab { target, eps0 } => Box::new(OracleMab { target: *target, eps0: *eps0 }),
            Self::SimpleTheta { v_target } => Box::new(SimpleTheta::random(dim, *v_target, rng)),
            Self::FlipTheta => Box::new(FlipTheta),
            Self::TopN { n } => Box::new(TopN { n: *n }),
            Self::Zeroing { rounds } => Box::new(Zeroing { rounds: *rounds }),
            Self::Mimic { means } => Box::new(Mimic { means: means.clone() }),
            Self::DelayedStart(inner) => {
                let inner = inner.rule(dim, budget, rng).unwrap_or_else(|| Box::new(Zeroing { rounds: Some(0) }));
                Box::new(DelayedStart::new(inner, budget))
            }
        })
    }

    /// Builds the adversary facing `learner` on a problem with `num_arms` arms
    /// in `ℝ^dim`. A delayed start needs a learner with a corruption-threshold
    /// schedule.
    pub fn build(
        &self,
        budget: f64,
        dim: usize,
        num_arms: usize,
        learner: &dyn Learner,
        mut rng: StreamRng,
    ) -> Result<Adversary> {
        self.validate(num_arms)?;
        if self.is_delayed() && learner.schedule_threshold().is_none() {
            return Err(Error::InvalidParameter(format!(
                "delayed start needs a learner with a corruption threshold schedule, {} has none",
                learner.name()
            )));
        }
        Ok(Adversary {
            label: self.label(),
            rule: self.rule(dim, budget, &mut rng),
            ledger: BudgetLedger::new(budget)?,
        })
    }
}

/// An attack rule bound to its ledger.
#[derive(Debug)]
pub struct Adversary {
    label: String,
    rule: Option<Box<dyn Attack>>,
    ledger: BudgetLedger,
}

impl Adversary {
    pub fn new(rule: Option<Box<dyn Attack>>, budget: f64, label: impl Into<String>) -> Result<Self> {
        Ok(Self { label: label.into(), rule, ledger: BudgetLedger::new(budget)? })
    }

    /// No corruption at all.
    pub fn none() -> Self {
        Self { label: "none".into(), rule: None, ledger: BudgetLedger { budget: 0.0, spent: 0.0 } }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ledger(&self) -> &BudgetLedger {
        &self.ledger
    }

    /// Applied corruption `c_t` for this round.
    pub fn corrupt(&mut self, ctx: &AttackContext<'_>) -> f64 {
        match &mut self.rule {
            Some(rule) if !self.ledger.is_exhausted() => {
                let proposed = rule.propose(ctx);
                self.ledger.charge(proposed)
            }
            _ => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{Greedy, Learner, Parameterisation, PeConfig, PhasedElimination};
    use crate::instances::ArmSet;
    use crate::rng::{stream, Stream};
    use alloc::vec;
    use approx::assert_relative_eq;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_vec(xs.to_vec())
    }

    struct Fix {
        contexts: Vec<Vector>,
        theta: Vector,
    }

    impl Fix {
        fn new(contexts: &[&[f64]], theta: &[f64]) -> Self {
            Self { contexts: contexts.iter().map(|c| v(c)).collect(), theta: v(theta) }
        }

        fn ctx(&self, round: u64, arm: usize, noise: f64) -> AttackContext<'_> {
            AttackContext {
                round,
                arm,
                contexts: &self.contexts,
                theta: &self.theta,
                mean: self.theta.dot(&self.contexts[arm]),
                noise,
                learner: LearnerView::default(),
            }
        }
    }

    #[test]
    fn ledger_clips_and_keeps_sign() {
        let mut l = BudgetLedger::new(0.5).unwrap();
        assert_eq!(l.charge(-1.4), -0.5);
        assert!(l.is_exhausted());
        assert_eq!(l.spent(), 0.5);
        assert_eq!(l.charge(0.3), 0.0);

        let mut l = BudgetLedger::new(1.0).unwrap();
        assert_eq!(l.charge(0.25), 0.25);
        assert_eq!(l.charge(-0.25), -0.25);
        assert_eq!(l.remaining(), 0.5);
        assert_eq!(l.charge(2.0), 0.5);
        assert!(BudgetLedger::new(-1.0).is_err());
        assert!(BudgetLedger::new(f64::INFINITY).is_err());
    }

    #[test]
    fn garcelon_examples() {
        // ⟨θ, a₁⟩ = 0.4
        let f = Fix::new(&[&[1.0, 0.0], &[0.4, 0.0]], &[0.5, 0.5]);
        let mut g = Garcelon { target: 0, v_target: -1.0 };
        assert_eq!(g.propose(&f.ctx(1, 0, 0.3)), 0.0);
        assert_relative_eq!(g.propose(&f.ctx(1, 1, 0.3)), -1.2, epsilon = 1e-15);
        let f = Fix::new(&[&[1.0, 0.0], &[0.8, 0.0]], &[0.5, 0.5]);
        assert_relative_eq!(g.propose(&f.ctx(1, 1, 0.0)), -1.4, epsilon = 1e-15);

        let mut adv = Adversary::new(Some(Box::new(g)), 0.5, "garcelon").unwrap();
        assert_eq!(adv.corrupt(&f.ctx(1, 1, 0.0)), -0.5);
        assert!(adv.ledger().is_exhausted());
        assert_eq!(adv.corrupt(&f.ctx(2, 1, 0.0)), 0.0);
    }

    #[test]
    fn oracle_mab_examples() {
        let f = Fix::new(&[&[0.3], &[0.5], &[0.1]], &[1.0]);
        let mut o = OracleMab { target: 0, eps0: 0.01 };
        let c = o.propose(&f.ctx(1, 1, 0.0));
        assert_relative_eq!(c, -0.21, epsilon = 1e-15);
        assert_relative_eq!(0.5 + c, 0.29, epsilon = 1e-15);
        assert_eq!(o.propose(&f.ctx(1, 2, 0.0)), 0.0);
        assert_eq!(o.propose(&f.ctx(1, 0, 0.0)), 0.0);
    }

    #[test]
    fn simple_theta_examples() {
        let f = Fix::new(&[&[0.9, 0.0], &[0.0, 0.9]], &[0.1, 0.2]);
        let s = SimpleTheta { theta_target: v(&[1.0, 0.0]), v_target: -1.0 };
        assert_eq!(s.target(&f.contexts), 0);
        let s2 = SimpleTheta { theta_target: v(&[0.0, 1.0]), v_target: -1.0 };
        assert_eq!(s2.target(&f.contexts), 1);
    }

    #[test]
    fn random_decoy_is_unit() {
        let mut rng = stream(3, Stream::Adversary);
        for d in 1..8 {
            let s = SimpleTheta::random(d, -1.0, &mut rng);
            assert_relative_eq!(s.theta_target.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn flip_examples() {
        let f = Fix::new(&[&[0.3], &[0.0]], &[1.0]);
        let mut fl = FlipTheta;
        assert_relative_eq!(fl.propose(&f.ctx(1, 0, 0.0)), -0.6, epsilon = 1e-15);
        assert_eq!(fl.propose(&f.ctx(1, 1, 0.0)), 0.0);

        let mut adv = Adversary::new(Some(Box::new(FlipTheta)), 0.6, "flip").unwrap();
        assert_relative_eq!(adv.corrupt(&f.ctx(1, 0, 0.0)), -0.6, epsilon = 1e-15);
        assert!(adv.ledger().is_exhausted());
        assert_eq!(adv.corrupt(&f.ctx(2, 0, 0.0)), 0.0);
    }

    #[test]
    fn top_n_examples() {
        let f = Fix::new(&[&[0.8], &[0.5], &[0.2], &[0.1]], &[1.0]);
        let mut t = TopN { n: 2 };
        let c = t.propose(&f.ctx(1, 0, 0.1));
        assert_relative_eq!(c, -1.9, epsilon = 1e-15);
        assert_relative_eq!(0.8 + 0.1 + c, -1.0, epsilon = 1e-15);
        assert_eq!(t.propose(&f.ctx(1, 2, 0.1)), 0.0);

        // Restricted to the learner's remaining arms.
        let active = [2usize, 3];
        let mut ctx = f.ctx(1, 2, 0.0);
        ctx.learner.active = Some(&active);
        let mut t1 = TopN { n: 1 };
        assert_eq!(t1.top(&ctx), vec![2]);
        assert_relative_eq!(t1.propose(&ctx), -1.2, epsilon = 1e-15);

        let mut all = TopN { n: 10 };
        for arm in 0..4 {
            assert!(all.propose(&f.ctx(1, arm, 0.0)) < 0.0);
        }
    }

    #[test]
    fn zeroing_examples() {
        let f = Fix::new(&[&[1.0], &[-1.0]], &[1.0]);
        let mut z = Zeroing { rounds: Some(3) };
        let ctx = f.ctx(1, 0, 0.0);
        assert_eq!(ctx.mean + z.propose(&ctx), 0.0);
        assert_eq!(z.propose(&f.ctx(4, 0, 0.0)), 0.0);
        let mut forever = Zeroing { rounds: None };
        assert_eq!(forever.propose(&f.ctx(1_000, 1, 0.0)), 1.0);
    }

    #[test]
    fn mimic_cost_quarter() {
        let f = Fix::new(&[&[0.5, 0.0], &[0.0, 0.75]], &[0.5, 0.5]);
        let mut m = Mimic { means: vec![0.25, 0.125] };
        assert_eq!(m.propose(&f.ctx(1, 0, 0.0)), 0.0);
        assert_relative_eq!(m.propose(&f.ctx(1, 1, 0.0)), -0.25, epsilon = 1e-15);
    }

    #[test]
    fn delayed_start_waits_for_threshold() {
        let f = Fix::new(&[&[0.5]], &[1.0]);
        let mut d = DelayedStart::new(Box::new(FlipTheta), 150.0);
        for (round, c_hat) in [(1, 256.0), (2, 150.0), (3, 128.0), (4, 512.0)] {
            let mut ctx = f.ctx(round, 0, 0.0);
            ctx.learner.schedule = Some(c_hat);
            let c = d.propose(&ctx);
            if round < 3 {
                assert_eq!(c, 0.0);
            } else {
                assert_eq!(c, -1.0);
            }
        }
        assert_eq!(d.started(), Some(3));
    }

    #[test]
    fn delayed_start_zero_budget_never_starts() {
        let f = Fix::new(&[&[0.5]], &[1.0]);
        let mut d = DelayedStart::new(Box::new(FlipTheta), 0.0);
        let mut ctx = f.ctx(1, 0, 0.0);
        ctx.learner.schedule = Some(0.0);
        assert_eq!(d.propose(&ctx), 0.0);
        assert_eq!(d.started(), None);
    }

    #[test]
    fn delayed_start_on_fig3_schedule_begins_at_epoch_nine() {
        let d = 5;
        let k = 50;
        let mut rng = stream(0, Stream::Instance);
        let arms: Vec<Vector> = (0..k)
            .map(|_| {
                use rand::Rng;
                let z = Vector::from_fn(d, |_, _| rng.random_range(-1.0..1.0));
                z / (d as f64).sqrt()
            })
            .collect();
        let arms = ArmSet::new(arms).unwrap();
        let pe = PhasedElimination::new(&arms, 40_000, PeConfig::practical_unknown()).unwrap();
        let first = (1..=16).find(|&h| pe.c_hat(h) < 150.0).unwrap();
        assert_eq!(first, 9);
        assert_eq!(pe.c_hat(8), 200.0);
        assert_eq!(pe.c_hat(9), 128.0);
        for cfg in [PeConfig::practical_known(150.0), PeConfig::nonrobust(Parameterisation::Practical)] {
            let other = PhasedElimination::new(&arms, 40_000, cfg).unwrap();
            assert_eq!(other.unknown_c_hat(9), 128.0);
            assert_eq!(other.schedule_threshold(), pe.schedule_threshold());
        }
    }

    #[test]
    fn build_checks() {
        let greedy = Greedy::new(2);
        let rng = || stream(0, Stream::Adversary);
        assert!(AttackSpec::FlipTheta.delayed().build(10.0, 2, 3, &greedy, rng()).is_err());
        assert!(AttackSpec::garcelon(3).build(10.0, 2, 3, &greedy, rng()).is_err());
        assert!(AttackSpec::TopN { n: 0 }.build(10.0, 2, 3, &greedy, rng()).is_err());
        assert!(AttackSpec::FlipTheta.build(-1.0, 2, 3, &greedy, rng()).is_err());
        assert!(AttackSpec::FlipTheta.build(1.0, 2, 3, &greedy, rng()).is_ok());

        let arms = ArmSet::new(vec![v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap();
        let pe = PhasedElimination::new(&arms, 100, PeConfig::practical_unknown()).unwrap();
        let adv = AttackSpec::FlipTheta.delayed().build(10.0, 2, 2, &pe, rng()).unwrap();
        assert_eq!(adv.label(), "flip_theta+delayed_start");
    }

    #[test]
    fn labels() {
        assert_eq!(AttackSpec::TopN { n: 3 }.label(), "top_n:3");
        assert_eq!(AttackSpec::FlipTheta.delayed().delayed(), AttackSpec::FlipTheta.delayed());
    }
}
