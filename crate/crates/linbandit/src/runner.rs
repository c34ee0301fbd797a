//! Expands a configuration into cells and runs their trials.

use std::path::Path;

use linbandit_core::adversaries::AttackSpec;
use linbandit_core::harness::{self, EnvironmentSpec, ExperimentSpec, RegretTrace, TrialSummary};
use linbandit_core::instances::{make_lower_bound, Environment, FixtureParams, NoiseModel};
use linbandit_core::Error as CoreError;
use rayon::prelude::*;

use crate::config::{AttackChoice, LearnerKind, RunConfig};
use crate::error::RunError;
use crate::fmt::g12;
use crate::io;
use crate::output;

/// One (learner, attack, budget, eta) combination.
#[derive(Debug, Clone)]
pub struct Cell {
    pub learner: String,
    pub attack: String,
    pub budget: f64,
    pub eta: Option<f64>,
    /// Output subdirectory.
    pub dir: String,
    pub spec: ExperimentSpec,
}

/// Per-trial numbers kept after the trace is dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub seed: u64,
    pub final_regret: f64,
    pub final_with_corruption: f64,
    pub spent: f64,
    /// Mean per-round regret over the last 10% of rounds.
    pub slope_last_decile: f64,
    /// Mean per-round regret over the last 20% of rounds.
    pub slope_last_fifth: f64,
    /// First round with a non-zero corruption.
    pub first_attacked: Option<u64>,
}

impl TrialStats {
    pub fn of(trace: &RegretTrace) -> Self {
        Self {
            seed: trace.seed,
            final_regret: trace.final_regret(),
            final_with_corruption: trace.cum_regret_with_corruption.last().copied().unwrap_or(0.0),
            spent: trace.total_spent(),
            slope_last_decile: harness::tail_slope(trace, 0.1),
            slope_last_fifth: harness::tail_slope(trace, 0.2),
            first_attacked: trace.corruption.iter().position(|&c| c != 0.0).map(|i| i as u64 + 1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CellReport {
    pub cell: Cell,
    pub summary: TrialSummary,
    /// In seed order.
    pub trials: Vec<TrialStats>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub config: RunConfig,
    pub grid: Vec<u64>,
    pub cells: Vec<CellReport>,
}

impl RunReport {
    pub fn cell(&self, learner: &str, attack: &str) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.cell.learner == learner && c.cell.attack == attack)
    }
}

fn theta_of(cfg: &RunConfig) -> Result<Vec<f64>, RunError> {
    let inst = &cfg.instance;
    match (&inst.theta, &inst.theta_file) {
        (Some(t), _) => Ok(t.clone()),
        (None, Some(path)) => Ok(io::read_vector(Path::new(path), inst.header)?),
        (None, None) => Err(RunError::Usage("instance needs `theta` or `theta_file`".into())),
    }
}

/// Environment for everything but fixtures, which depend on the budget.
fn base_environment(cfg: &RunConfig, eta: Option<f64>) -> Result<Option<EnvironmentSpec>, RunError> {
    let inst = &cfg.instance;
    let noise = || NoiseModel::gaussian(inst.noise_variance);
    Ok(Some(match inst.kind.as_str() {
        "synthetic_fixed" => EnvironmentSpec::SyntheticFixed {
            dim: inst.dim.unwrap_or_default(),
            k: inst.k.unwrap_or_default(),
            noise_variance: inst.noise_variance,
            instance_seed: inst.instance_seed,
        },
        "synthetic_contextual" => EnvironmentSpec::SyntheticContextual {
            dim: inst.dim.unwrap_or_default(),
            k: inst.k.unwrap_or_default(),
            eta: eta.unwrap_or_default(),
            noise_variance: inst.noise_variance,
            instance_seed: inst.instance_seed,
        },
        "csv_fixed" => {
            let path = inst.arms.as_deref().unwrap_or_default();
            let (instance, _) = io::load_instance_csv(Path::new(path), theta_of(cfg)?, inst.header, inst.strict, noise()?)?;
            EnvironmentSpec::Given(Box::new(instance.into()))
        }
        "csv_contextual" => {
            let path = inst.pool.as_deref().unwrap_or_default();
            let k = inst.k.unwrap_or_default();
            let (instance, _) = io::load_pool_csv(Path::new(path), k, theta_of(cfg)?, inst.header, inst.strict, noise()?)?;
            EnvironmentSpec::Given(Box::new(instance.into()))
        }
        _ => return Ok(None),
    }))
}

fn fixture_environment(cfg: &RunConfig, budget: f64, eta: Option<f64>) -> Result<(Environment, AttackSpec, f64), RunError> {
    let inst = &cfg.instance;
    let defaults = FixtureParams::default();
    let params = FixtureParams {
        budget,
        dim: inst.dim.unwrap_or(defaults.dim),
        k: inst.k.unwrap_or(defaults.k),
        eta: eta.unwrap_or(defaults.eta),
        uncorrupted_regret: inst.uncorrupted_regret.unwrap_or(defaults.uncorrupted_regret),
        seed: inst.instance_seed.unwrap_or(defaults.seed),
    };
    let name = inst.fixture.as_deref().unwrap_or_default();
    let fixture = make_lower_bound(name, &params)?;
    let count = fixture.environments.len();
    let env = fixture.environments.into_iter().nth(inst.variant).ok_or_else(|| {
        CoreError::InvalidParameter(format!("fixture {name} has {count} instances, variant {} requested", inst.variant))
    })?;
    Ok((env, fixture.attack, fixture.budget))
}

fn undelayed(spec: AttackSpec) -> AttackSpec {
    match spec {
        AttackSpec::DelayedStart(inner) => *inner,
        other => other,
    }
}

fn cell_dir(cfg: &RunConfig, learner: &str, attack: &str, budget: f64, eta: Option<f64>) -> String {
    let mut dir = format!("{learner}__{attack}");
    if cfg.attack.budget.len() > 1 {
        dir.push_str(&format!("__C{}", g12(budget)));
    }
    if let Some(e) = eta.filter(|_| cfg.instance.eta.len() > 1) {
        dir.push_str(&format!("__eta{}", g12(e)));
    }
    dir.replace(':', "_")
}

/// Every cell of `cfg`, in learner, attack, budget, eta order.
pub fn plan(cfg: &RunConfig) -> Result<Vec<Cell>, RunError> {
    cfg.validate()?;
    let etas: Vec<Option<f64>> = match cfg.instance.kind.as_str() {
        "synthetic_contextual" | "fixture" if !cfg.instance.eta.is_empty() => cfg.instance.eta.iter().map(|&e| Some(e)).collect(),
        _ => vec![None],
    };
    let mut bases = Vec::with_capacity(etas.len());
    for &eta in &etas {
        bases.push(base_environment(cfg, eta)?);
    }

    let mut cells = Vec::new();
    for learner in &cfg.learner.name {
        let kind = LearnerKind::parse(learner).ok_or_else(|| RunError::Usage(format!("unknown learner `{learner}`")))?;
        for attack in &cfg.attack.name {
            let choice = cfg.attack.parse(attack).map_err(RunError::Usage)?;
            for &budget in &cfg.attack.budget {
                for (&eta, base) in etas.iter().zip(&bases) {
                    let (environment, attack_spec, budget) = match (base, &choice) {
                        (Some(env), AttackChoice::Spec(a)) => (env.clone(), a.clone(), budget),
                        (None, choice) => {
                            let (env, fixture_attack, fixture_budget) = fixture_environment(cfg, budget, eta)?;
                            let env = EnvironmentSpec::Given(Box::new(env));
                            match choice {
                                AttackChoice::Spec(a) => (env, a.clone(), budget),
                                AttackChoice::Fixture { delayed: false } => (env, fixture_attack, fixture_budget),
                                AttackChoice::Fixture { delayed: true } => (env, fixture_attack.delayed(), fixture_budget),
                            }
                        }
                        (Some(_), AttackChoice::Fixture { .. }) => {
                            return Err(RunError::Usage("attack `fixture` needs a fixture instance".into()))
                        }
                    };
                    let attack_spec = if kind.is_phased_elimination() { attack_spec } else { undelayed(attack_spec) };
                    cells.push(Cell {
                        learner: learner.clone(),
                        attack: attack.clone(),
                        budget,
                        eta,
                        dir: cell_dir(cfg, learner, attack, budget, eta),
                        spec: ExperimentSpec {
                            environment,
                            learner: cfg.learner.spec(kind, budget),
                            attack: attack_spec,
                            budget,
                            horizon: cfg.run.horizon,
                            diagnostics: cfg.run.diagnostics,
                        },
                    });
                }
            }
        }
    }
    Ok(cells)
}

/// Runs all trials of one cell in parallel; traces come back in seed order.
pub fn run_cell(cell: &Cell, seeds: &[u64]) -> Result<Vec<RegretTrace>, RunError> {
    seeds
        .par_iter()
        .enumerate()
        .map(|(index, &seed)| {
            harness::run_trial(&cell.spec, seed)
                .map_err(|e| CoreError::Trial { index, seed, source: Box::new(e) }.into())
        })
        .collect()
}

/// Runs every cell. With `out`, writes trial files, curves and the summary.
pub fn execute(cfg: &RunConfig, out: Option<&Path>) -> Result<RunReport, RunError> {
    let go = || -> Result<RunReport, RunError> {
        let cells = plan(cfg)?;
        let grid = harness::checkpoints(cfg.run.horizon, &cfg.run.checkpoints);
        let seeds = harness::trial_seeds(cfg.run.trials, cfg.run.seed);
        let mut reports = Vec::with_capacity(cells.len());
        for cell in cells {
            let traces = run_cell(&cell, &seeds)?;
            let summary = TrialSummary::from_traces(&traces, &grid)?;
            if let Some(out) = out {
                output::write_cell(out, cfg, &cell, &traces, &summary)?;
            }
            let trials = traces.iter().map(TrialStats::of).collect();
            reports.push(CellReport { cell, summary, trials });
        }
        let report = RunReport { config: cfg.clone(), grid, cells: reports };
        if let Some(out) = out {
            output::write_summary(out, &report)?;
        }
        Ok(report)
    };
    if cfg.run.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.run.threads)
            .build()
            .map_err(|e| RunError::Usage(format!("thread pool: {e}")))?;
        pool.install(go)
    } else {
        go()
    }
}
