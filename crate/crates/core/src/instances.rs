//! Bandit instances: fixed arm sets, perturbed-context models, synthetic
//! generators and the lower-bound constructions.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::adversaries::AttackSpec;
use crate::linalg::{SpanBasis, Vector};
use crate::rng::{self, Stream};
use crate::{Error, Result};

/// Slack allowed on the unit-ball checks.
pub const NORM_TOL: f64 = 1e-12;

/// Observation-noise variance of the synthetic experiments.
pub const SYNTHETIC_NOISE_VARIANCE: f64 = 0.05;

/// Ordered, validated set of `k` distinct arms in `ℝ^d` with `‖a‖₂ ≤ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmSet {
    arms: Vec<Vector>,
    dim: usize,
    rank: usize,
}

impl ArmSet {
    pub fn new(arms: Vec<Vector>) -> Result<Self> {
        let dim = arms
            .first()
            .map(|a| a.len())
            .ok_or_else(|| Error::InvalidArmSet("no arms".into()))?;
        if dim == 0 {
            return Err(Error::InvalidArmSet("zero-dimensional arms".into()));
        }
        for (i, a) in arms.iter().enumerate() {
            if a.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: a.len() });
            }
            if a.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArmSet(format!("arm {i} has a non-finite entry")));
            }
            if a.norm() > 1.0 + NORM_TOL {
                return Err(Error::InvalidArmSet(format!(
                    "arm {i} has norm {} > 1",
                    a.norm()
                )));
            }
        }
        for i in 0..arms.len() {
            for j in (i + 1)..arms.len() {
                if arms[i] == arms[j] {
                    return Err(Error::InvalidArmSet(format!("arms {i} and {j} coincide")));
                }
            }
        }
        let rank = if arms.iter().all(|a| a.iter().all(|&x| x == 0.0)) {
            0
        } else {
            SpanBasis::of(&arms)?.rank()
        };
        Ok(Self { arms, dim, rank })
    }

    pub fn arms(&self) -> &[Vector] {
        &self.arms
    }

    pub fn len(&self) -> usize {
        self.arms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arms.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the span of the arms.
    pub fn effective_rank(&self) -> usize {
        self.rank
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum NoiseModel {
    None,
    Gaussian { variance: f64 },
}

impl NoiseModel {
    pub fn gaussian(variance: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&variance) {
            return Err(Error::InvalidParameter(format!(
                "noise variance must lie in [0, 1], got {variance}"
            )));
        }
        Ok(Self::Gaussian { variance })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::None => 0.0,
            Self::Gaussian { variance } => {
                let z: f64 = StandardNormal.sample(rng);
                z * variance.sqrt()
            }
        }
    }
}

fn check_theta(theta: &Vector, dim: usize) -> Result<()> {
    if theta.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: theta.len() });
    }
    if theta.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("theta has a non-finite entry".into()));
    }
    if theta.norm() > 1.0 + NORM_TOL {
        return Err(Error::InvalidParameter(format!(
            "theta has norm {} > 1",
            theta.norm()
        )));
    }
    Ok(())
}

/// A fixed arm set with its hidden parameter and noise model.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    arms: ArmSet,
    theta: Vector,
    noise: NoiseModel,
}

impl Instance {
    pub fn new(arms: ArmSet, theta: Vector, noise: NoiseModel) -> Result<Self> {
        check_theta(&theta, arms.dim())?;
        Ok(Self { arms, theta, noise })
    }

    pub fn arm_set(&self) -> &ArmSet {
        &self.arms
    }

    pub fn theta(&self) -> &Vector {
        &self.theta
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = noise;
        self
    }

    pub fn mean(&self, arm: usize) -> f64 {
        self.theta.dot(&self.arms.arms()[arm])
    }

    pub fn means(&self) -> Vec<f64> {
        (0..self.arms.len()).map(|i| self.mean(i)).collect()
    }

    /// Index of the best arm (lowest index on ties).
    pub fn best_arm(&self) -> usize {
        crate::linalg::argmax(self.means()).unwrap_or(0)
    }
}

/// How the per-round contexts are produced.
#[derive(Debug, Clone, PartialEq)]
pub enum ContextModel {
    /// `a_{i,t} = μ_i + ξ_{i,t}` with `ξ_{i,t} ~ N(0, (η²/d) I)` drawn fresh each round.
    Perturbed { centers: Vec<Vector>, eta: f64 },
    /// `k` rows sampled uniformly without replacement from a pool each round.
    Subsample { pool: Vec<Vector>, k: usize },
}

impl ContextModel {
    pub fn perturbed(centers: Vec<Vector>, eta: f64) -> Result<Self> {
        let dim = centers
            .first()
            .map(|c| c.len())
            .ok_or_else(|| Error::InvalidArmSet("no centers".into()))?;
        if !(eta >= 0.0 && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!("eta must be >= 0, got {eta}")));
        }
        for (i, c) in centers.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: c.len() });
            }
            if c.norm() > 1.0 + NORM_TOL {
                return Err(Error::InvalidArmSet(format!("center {i} has norm > 1")));
            }
        }
        Ok(Self::Perturbed { centers, eta })
    }

    pub fn subsample(pool: Vec<Vector>, k: usize) -> Result<Self> {
        if k == 0 || k > pool.len() {
            return Err(Error::InvalidParameter(format!(
                "cannot draw {k} contexts from a pool of {}",
                pool.len()
            )));
        }
        let dim = pool[0].len();
        if let Some(bad) = pool.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: bad.len() });
        }
        Ok(Self::Subsample { pool, k })
    }

    pub fn num_arms(&self) -> usize {
        match self {
            Self::Perturbed { centers, .. } => centers.len(),
            Self::Subsample { k, .. } => *k,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Perturbed { centers, .. } => centers[0].len(),
            Self::Subsample { pool, .. } => pool[0].len(),
        }
    }

    /// Fills `out` with this round's contexts.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<Vector>) {
        out.clear();
        match self {
            Self::Perturbed { centers, eta } => {
                let dim = centers[0].len();
                let scale = eta / (dim as f64).sqrt();
                for c in centers {
                    if *eta == 0.0 {
                        out.push(c.clone());
                    } else {
                        out.push(Vector::from_fn(dim, |j, _| {
                            let z: f64 = StandardNormal.sample(rng);
                            c[j] + scale * z
                        }));
                    }
                }
            }
            Self::Subsample { pool, k } => {
                for i in rand::seq::index::sample(rng, pool.len(), *k).iter() {
                    out.push(pool[i].clone());
                }
            }
        }
    }
}

/// Contexts regenerated every round, one hidden parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextualInstance {
    model: ContextModel,
    theta: Vector,
    noise: NoiseModel,
}

impl ContextualInstance {
    pub fn new(model: ContextModel, theta: Vector, noise: NoiseModel) -> Result<Self> {
        check_theta(&theta, model.dim())?;
        Ok(Self { model, theta, noise })
    }

    pub fn model(&self) -> &ContextModel {
        &self.model
    }

    pub fn theta(&self) -> &Vector {
        &self.theta
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }
}

/// Anything the harness can run an episode against.
#[derive(Debug, Clone, PartialEq)]
pub enum Environment {
    Fixed(Instance),
    Contextual(ContextualInstance),
}

impl Environment {
    pub fn dim(&self) -> usize {
        match self {
            Self::Fixed(i) => i.arm_set().dim(),
            Self::Contextual(c) => c.model().dim(),
        }
    }

    pub fn num_arms(&self) -> usize {
        match self {
            Self::Fixed(i) => i.arm_set().len(),
            Self::Contextual(c) => c.model().num_arms(),
        }
    }

    pub fn theta(&self) -> &Vector {
        match self {
            Self::Fixed(i) => i.theta(),
            Self::Contextual(c) => c.theta(),
        }
    }

    pub fn noise(&self) -> NoiseModel {
        match self {
            Self::Fixed(i) => i.noise(),
            Self::Contextual(c) => c.noise(),
        }
    }

    pub fn fixed_arms(&self) -> Option<&ArmSet> {
        match self {
            Self::Fixed(i) => Some(i.arm_set()),
            Self::Contextual(_) => None,
        }
    }
}

impl From<Instance> for Environment {
    fn from(i: Instance) -> Self {
        Self::Fixed(i)
    }
}

impl From<ContextualInstance> for Environment {
    fn from(c: ContextualInstance) -> Self {
        Self::Contextual(c)
    }
}

/// `(1/√d, …, 1/√d)`.
pub fn uniform_theta(dim: usize) -> Vector {
    Vector::from_element(dim, 1.0 / (dim as f64).sqrt())
}

fn synthetic_centers<R: Rng + ?Sized>(dim: usize, k: usize, rng: &mut R) -> Vec<Vector> {
    let half_width = 1.0 / (dim as f64).sqrt();
    (0..k)
        .map(|_| Vector::from_fn(dim, |_, _| rng.random_range(-half_width..=half_width)))
        .collect()
}

fn check_dims(dim: usize, k: usize, min_k: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidParameter("d must be >= 1".into()));
    }
    if k < min_k {
        return Err(Error::InvalidParameter(format!("k must be >= {min_k}, got {k}")));
    }
    Ok(())
}

/// Synthetic contextual instance: `k` centers with i.i.d. entries uniform on
/// `[-1/√d, 1/√d]`, Gaussian perturbations of covariance `(η²/d) I`,
/// `θ = (1/√d, …)` and Gaussian observation noise of variance `sigma2`.
pub fn make_synthetic_contextual(
    dim: usize,
    k: usize,
    eta: f64,
    sigma2: f64,
    seed: u64,
) -> Result<ContextualInstance> {
    check_dims(dim, k, 2)?;
    let mut rng = rng::stream(seed, Stream::Instance);
    let centers = synthetic_centers(dim, k, &mut rng);
    ContextualInstance::new(
        ContextModel::perturbed(centers, eta)?,
        uniform_theta(dim),
        NoiseModel::gaussian(sigma2)?,
    )
}

/// Fixed-arm synthetic instance: the centers of [`make_synthetic_contextual`]
/// under the same seed, with noise variance [`SYNTHETIC_NOISE_VARIANCE`].
pub fn make_synthetic_fixed(dim: usize, k: usize, seed: u64) -> Result<Instance> {
    check_dims(dim, k, 1)?;
    let mut rng = rng::stream(seed, Stream::Instance);
    let arms = ArmSet::new(synthetic_centers(dim, k, &mut rng))?;
    Instance::new(
        arms,
        uniform_theta(dim),
        NoiseModel::gaussian(SYNTHETIC_NOISE_VARIANCE)?,
    )
}

/// Feature rows and parameter brought into the unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledFeatures {
    pub rows: Vec<Vector>,
    pub theta: Vector,
    /// Common factor applied to every row (1 when already inside the ball).
    pub row_scale: f64,
    /// Factor applied to θ.
    pub theta_scale: f64,
}

/// Rescales externally produced features: all rows by one global factor so the
/// largest norm is 1, and θ onto the unit ball. `strict` rejects instead.
pub fn rescale_features(rows: Vec<Vec<f64>>, theta: Vec<f64>, strict: bool) -> Result<ScaledFeatures> {
    let dim = theta.len();
    if rows.is_empty() {
        return Err(Error::InvalidArmSet("feature file has no rows".into()));
    }
    if dim == 0 {
        return Err(Error::InvalidParameter("theta is empty".into()));
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
        }
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArmSet(format!("row {i} has a non-finite entry")));
        }
    }
    if theta.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("theta has a non-finite entry".into()));
    }
    let mut rows: Vec<Vector> = rows.into_iter().map(Vector::from_vec).collect();
    let mut theta = Vector::from_vec(theta);
    let max_norm = rows.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let theta_norm = theta.norm();
    if strict && (max_norm > 1.0 + NORM_TOL || theta_norm > 1.0 + NORM_TOL) {
        return Err(Error::InvalidArmSet("vectors outside the unit ball (strict mode)".into()));
    }
    let row_scale = if max_norm > 1.0 { 1.0 / max_norm } else { 1.0 };
    let theta_scale = if theta_norm > 1.0 { 1.0 / theta_norm } else { 1.0 };
    if row_scale != 1.0 {
        for r in &mut rows {
            *r *= row_scale;
        }
    }
    if theta_scale != 1.0 {
        theta *= theta_scale;
    }
    Ok(ScaledFeatures { rows, theta, row_scale, theta_scale })
}

/// Names of the lower-bound constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FixtureName {
    /// `d = 1`, arms `±1`, `θ = ±1`, every reward zeroed for `⌊C⌋` rounds.
    Zeroing1d,
    /// `d = k`, standard-basis arms, `θ = e_i`, the rewarding arm zeroed while budget lasts.
    BasisDk,
    /// `d = k = 2` pair of instances made indistinguishable at cost 1/4 per pull.
    UnknownC2d,
    /// Perturbed-context instance with all rewards zeroed while budget lasts.
    DiverseZeroing,
}

impl FixtureName {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "zeroing_1d" => Ok(Self::Zeroing1d),
            "basis_dk" => Ok(Self::BasisDk),
            "unknownC_2d" | "unknown_c_2d" => Ok(Self::UnknownC2d),
            "diverse_zeroing" => Ok(Self::DiverseZeroing),
            other => Err(Error::UnknownFixture(other.into())),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Zeroing1d => "zeroing_1d",
            Self::BasisDk => "basis_dk",
            Self::UnknownC2d => "unknownC_2d",
            Self::DiverseZeroing => "diverse_zeroing",
        }
    }
}

/// Parameters for [`make_lower_bound`]; each fixture reads the fields it needs.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FixtureParams {
    /// Corruption budget `C` (for `unknownC_2d` it is derived as `2 R̄⁰`).
    pub budget: f64,
    /// Dimension for `basis_dk` and `diverse_zeroing`.
    pub dim: usize,
    /// Number of arms for `diverse_zeroing`.
    pub k: usize,
    /// Perturbation scale for `diverse_zeroing`.
    pub eta: f64,
    /// Uncorrupted regret bound `R̄⁰_T` for `unknownC_2d`.
    pub uncorrupted_regret: f64,
    pub seed: u64,
}

impl Default for FixtureParams {
    fn default() -> Self {
        Self { budget: 0.0, dim: 2, k: 25, eta: 0.5, uncorrupted_regret: 1.0, seed: 0 }
    }
}

/// A lower-bound construction: one or more environments plus the attack that
/// makes them hard to tell apart.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundFixture {
    pub name: FixtureName,
    /// For `unknownC_2d`, index 0 is the uncorrupted reference instance and
    /// index 1 the attacked one. Otherwise every entry is attacked.
    pub environments: Vec<Environment>,
    pub attack: AttackSpec,
    pub budget: f64,
}

fn vec_of(xs: &[f64]) -> Vector {
    Vector::from_vec(xs.to_vec())
}

pub fn make_lower_bound(name: &str, params: &FixtureParams) -> Result<LowerBoundFixture> {
    let name = FixtureName::parse(name)?;
    let budget = params.budget;
    if !(budget >= 0.0 && budget.is_finite()) {
        return Err(Error::InvalidParameter(format!("budget must be >= 0, got {budget}")));
    }
    let fixture = match name {
        FixtureName::Zeroing1d => {
            let arms = ArmSet::new(vec![vec_of(&[1.0]), vec_of(&[-1.0])])?;
            let environments = [1.0, -1.0]
                .iter()
                .map(|&t| Instance::new(arms.clone(), vec_of(&[t]), NoiseModel::None).map(Environment::from))
                .collect::<Result<Vec<_>>>()?;
            LowerBoundFixture {
                name,
                environments,
                attack: AttackSpec::Zeroing { rounds: Some(budget.floor() as u64) },
                budget,
            }
        }
        FixtureName::BasisDk => {
            let d = params.dim;
            if d < 2 {
                return Err(Error::InvalidParameter("basis_dk needs d >= 2".into()));
            }
            let basis: Vec<Vector> = (0..d)
                .map(|i| Vector::from_fn(d, |j, _| if i == j { 1.0 } else { 0.0 }))
                .collect();
            let arms = ArmSet::new(basis.clone())?;
            let environments = basis
                .into_iter()
                .map(|theta| Instance::new(arms.clone(), theta, NoiseModel::None).map(Environment::from))
                .collect::<Result<Vec<_>>>()?;
            LowerBoundFixture { name, environments, attack: AttackSpec::Zeroing { rounds: None }, budget }
        }
        FixtureName::UnknownC2d => {
            let r0 = params.uncorrupted_regret;
            if !(r0 > 0.0 && r0.is_finite()) {
                return Err(Error::InvalidParameter("unknownC_2d needs R0 > 0".into()));
            }
            let theta = vec_of(&[0.5, 0.5]);
            let reference = ArmSet::new(vec![vec_of(&[0.5, 0.0]), vec_of(&[0.0, 0.25])])?;
            let attacked = ArmSet::new(vec![vec_of(&[0.5, 0.0]), vec_of(&[0.0, 0.75])])?;
            let reference = Instance::new(reference, theta.clone(), NoiseModel::None)?;
            let attacked = Instance::new(attacked, theta, NoiseModel::None)?;
            let means = reference.means();
            LowerBoundFixture {
                name,
                environments: vec![reference.into(), attacked.into()],
                attack: AttackSpec::Mimic { means },
                budget: 2.0 * r0,
            }
        }
        FixtureName::DiverseZeroing => {
            let env = make_synthetic_contextual(
                params.dim,
                params.k,
                params.eta,
                SYNTHETIC_NOISE_VARIANCE,
                params.seed,
            )?;
            LowerBoundFixture {
                name,
                environments: vec![env.into()],
                attack: AttackSpec::Zeroing { rounds: None },
                budget,
            }
        }
    };
    Ok(fixture)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn arm_set_rejects_duplicates_and_large_norms() {
        assert!(ArmSet::new(vec![vec_of(&[0.1, 0.2]), vec_of(&[0.1, 0.2])]).is_err());
        assert!(ArmSet::new(vec![vec_of(&[1.0, 0.1])]).is_err());
        assert!(ArmSet::new(vec![]).is_err());
        assert!(ArmSet::new(vec![vec_of(&[0.1]), vec_of(&[0.1, 0.2])]).is_err());
    }

    #[test]
    fn arm_set_records_effective_rank() {
        let s = ArmSet::new(vec![vec_of(&[0.1, 0.2, 0.0]), vec_of(&[0.2, 0.4, 0.0])]).unwrap();
        assert_eq!(s.effective_rank(), 1);
        assert_eq!(s.dim(), 3);
    }

    #[test]
    fn synthetic_contextual_reference_config() {
        let inst = make_synthetic_contextual(5, 25, 0.5, 0.05, 3).unwrap();
        assert_eq!(inst.model().num_arms(), 25);
        assert_eq!(inst.model().dim(), 5);
        assert_eq!(inst.noise(), NoiseModel::Gaussian { variance: 0.05 });
        let ContextModel::Perturbed { centers, eta } = inst.model() else { panic!() };
        assert_eq!(*eta, 0.5);
        let w = 1.0 / 5f64.sqrt();
        assert!(centers.iter().all(|c| c.iter().all(|x| x.abs() <= w)));
        assert_relative_eq!(inst.theta().norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn synthetic_contextual_one_dimensional() {
        let inst = make_synthetic_contextual(1, 2, 0.0, 0.05, 11).unwrap();
        assert_eq!(inst.theta().as_slice(), &[1.0]);
        let ContextModel::Perturbed { centers, .. } = inst.model() else { panic!() };
        assert!(centers.iter().all(|c| c[0].abs() <= 1.0));
    }

    #[test]
    fn theta_is_exactly_unit_in_four_dimensions() {
        let inst = make_synthetic_fixed(4, 6, 0).unwrap();
        assert_eq!(inst.theta().as_slice(), &[0.5, 0.5, 0.5, 0.5]);
        assert_eq!(inst.theta().norm(), 1.0);
    }

    #[test]
    fn synthetic_generators_validate_dimensions() {
        assert!(make_synthetic_contextual(0, 5, 0.1, 0.05, 0).is_err());
        assert!(make_synthetic_contextual(3, 1, 0.1, 0.05, 0).is_err());
        assert!(make_synthetic_contextual(3, 5, -0.1, 0.05, 0).is_err());
        assert!(make_synthetic_fixed(0, 5, 0).is_err());
    }

    #[test]
    fn fixed_instance_equals_contextual_centers() {
        for seed in 0..5 {
            let fixed = make_synthetic_fixed(5, 50, seed).unwrap();
            let ctx = make_synthetic_contextual(5, 50, 0.0, 0.05, seed).unwrap();
            let ContextModel::Perturbed { centers, .. } = ctx.model() else { panic!() };
            assert_eq!(fixed.arm_set().arms(), centers.as_slice());
            let mut rng = rng::stream(seed, Stream::Contexts);
            let mut out = Vec::new();
            ctx.model().draw(&mut rng, &mut out);
            assert_eq!(&out, centers);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(make_synthetic_fixed(2, 2, 9).unwrap(), make_synthetic_fixed(2, 2, 9).unwrap());
        assert_ne!(make_synthetic_fixed(2, 2, 9).unwrap(), make_synthetic_fixed(2, 2, 10).unwrap());
        let s = make_synthetic_fixed(2, 2, 9).unwrap();
        assert_eq!(s.arm_set().len(), 2);
        assert!(s.arm_set().arms().iter().all(|a| a.norm() <= 1.0));
    }

    #[test]
    fn perturbation_moments() {
        let (d, eta) = (4usize, 0.5f64);
        let model = ContextModel::perturbed(vec![Vector::zeros(d)], eta).unwrap();
        let mut rng = rng::stream(1, Stream::Contexts);
        let n = 100_000usize;
        let mut sum = Vector::zeros(d);
        let mut sq = Vector::zeros(d);
        let mut out = Vec::new();
        for _ in 0..n {
            model.draw(&mut rng, &mut out);
            sum += &out[0];
            sq += out[0].component_mul(&out[0]);
        }
        let var = eta * eta / d as f64;
        for j in 0..d {
            let mean = sum[j] / n as f64;
            let v = sq[j] / n as f64 - mean * mean;
            assert!(mean.abs() <= 5.0 * var.sqrt() / (n as f64).sqrt(), "mean {mean}");
            assert!((v - var).abs() <= 0.05 * var, "var {v} vs {var}");
        }
    }

    #[test]
    fn subsample_draws_distinct_rows() {
        let pool: Vec<Vector> = (0..10).map(|i| vec_of(&[i as f64 / 10.0])).collect();
        let model = ContextModel::subsample(pool, 4).unwrap();
        let mut rng = rng::stream(0, Stream::Contexts);
        let mut out = Vec::new();
        model.draw(&mut rng, &mut out);
        assert_eq!(out.len(), 4);
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert_ne!(out[i], out[j]);
            }
        }
        assert!(ContextModel::subsample(vec![vec_of(&[0.1])], 2).is_err());
    }

    #[test]
    fn rescale_halves_rows_with_norm_two() {
        let rows = vec![vec![2.0, 0.0], vec![0.0, 1.0], vec![0.6, 0.8]];
        let s = rescale_features(rows, vec![0.3, 0.4], false).unwrap();
        assert_eq!(s.row_scale, 0.5);
        assert_eq!(s.rows[0].as_slice(), &[1.0, 0.0]);
        assert_eq!(s.rows[2].as_slice(), &[0.3, 0.4]);
        assert_eq!(s.theta_scale, 1.0);
    }

    #[test]
    fn rescale_identity_and_errors() {
        let rows = vec![vec![0.5, 0.0], vec![0.0, 0.5]];
        let s = rescale_features(rows.clone(), vec![3.0, 4.0], false).unwrap();
        assert_eq!(s.row_scale, 1.0);
        assert_eq!(s.rows[0].as_slice(), &[0.5, 0.0]);
        assert_relative_eq!(s.theta.norm(), 1.0, epsilon = 1e-15);
        assert!(rescale_features(vec![], vec![1.0], false).is_err());
        assert!(rescale_features(vec![vec![1.0]], vec![0.1, 0.1], false).is_err());
        assert!(rescale_features(vec![vec![f64::NAN, 0.0]], vec![0.1, 0.1], false).is_err());
        assert!(rescale_features(vec![vec![2.0, 0.0]], vec![0.1, 0.1], true).is_err());
        assert!(rescale_features(rows, vec![0.1, 0.1], true).is_ok());
    }

    #[test]
    fn zeroing_fixture() {
        let f = make_lower_bound("zeroing_1d", &FixtureParams { budget: 10.0, ..Default::default() }).unwrap();
        assert_eq!(f.environments.len(), 2);
        assert_eq!(f.attack, AttackSpec::Zeroing { rounds: Some(10) });
        let arms = f.environments[0].fixed_arms().unwrap();
        assert_eq!(arms.arms()[0][0], 1.0);
        assert_eq!(arms.arms()[1][0], -1.0);
        assert_eq!(f.environments[0].theta()[0], 1.0);
        assert_eq!(f.environments[1].theta()[0], -1.0);
        assert_eq!(f.environments[0].noise(), NoiseModel::None);
    }

    #[test]
    fn basis_fixture() {
        let f = make_lower_bound("basis_dk", &FixtureParams { budget: 6.0, dim: 3, ..Default::default() }).unwrap();
        assert_eq!(f.environments.len(), 3);
        for (i, env) in f.environments.iter().enumerate() {
            let arms = env.fixed_arms().unwrap();
            assert_eq!(arms.arms()[i][i], 1.0);
            assert_eq!(env.theta(), &arms.arms()[i]);
        }
    }

    #[test]
    fn unknown_budget_fixture() {
        let r0 = 5.0;
        let f = make_lower_bound(
            "unknownC_2d",
            &FixtureParams { uncorrupted_regret: r0, ..Default::default() },
        )
        .unwrap();
        assert_eq!(f.budget, 2.0 * r0);
        let Environment::Fixed(b) = &f.environments[1] else { panic!() };
        assert_eq!(b.mean(1), 0.375);
        let AttackSpec::Mimic { means } = &f.attack else { panic!() };
        assert_eq!(means[1], 0.125);
        let cost = b.mean(1) - means[1];
        assert_eq!(cost, 0.25);
        assert_eq!(f.budget / cost, 8.0 * r0);
    }

    #[test]
    fn unknown_fixture_name() {
        assert!(matches!(
            make_lower_bound("nope", &FixtureParams::default()),
            Err(Error::UnknownFixture(_))
        ));
    }
}
