//! Run configuration: TOML with one table per component, `--set` overrides,
//! validation that reports every bad key at once, and name parsing.

use std::fmt;
use std::path::Path;

use linbandit_core::adversaries::{AttackSpec, DEFAULT_EPS0, DEFAULT_V_TARGET};
use linbandit_core::design::DesignOptions;
use linbandit_core::instances::{FixtureName, SYNTHETIC_NOISE_VARIANCE};
use linbandit_core::learners::{LearnerSpec, Parameterisation, PeConfig};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

/// All problems found in a configuration, one per line.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationError(pub Vec<String>);

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration ({} problem{}):", self.0.len(), if self.0.len() == 1 { "" } else { "s" })?;
        for e in &self.0 {
            writeln!(f, "  - {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationError {}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub instance: InstanceConfig,
    pub learner: LearnerConfig,
    pub attack: AttackConfig,
    pub run: RunSection,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    /// `synthetic_fixed`, `synthetic_contextual`, `csv_fixed`, `csv_contextual` or `fixture`.
    pub kind: String,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    /// Perturbation scales; several values give one cell each.
    #[serde(default)]
    pub eta: Vec<f64>,
    #[serde(default = "default_noise")]
    pub noise_variance: f64,
    #[serde(default)]
    pub instance_seed: Option<u64>,
    /// Arm file for `csv_fixed`.
    #[serde(default)]
    pub arms: Option<String>,
    /// Context pool for `csv_contextual`.
    #[serde(default)]
    pub pool: Option<String>,
    #[serde(default)]
    pub theta: Option<Vec<f64>>,
    #[serde(default)]
    pub theta_file: Option<String>,
    #[serde(default)]
    pub header: bool,
    /// Reject feature files outside the unit ball instead of rescaling them.
    #[serde(default)]
    pub strict: bool,
    #[serde(default)]
    pub fixture: Option<String>,
    /// Which environment of a multi-instance fixture to run.
    #[serde(default)]
    pub variant: usize,
    #[serde(default)]
    pub uncorrupted_regret: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LearnerConfig {
    pub name: Vec<String>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub nu: Option<f64>,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_prior_variance")]
    pub prior_variance: f64,
    #[serde(default = "default_ts_noise")]
    pub noise_variance: f64,
    #[serde(default = "default_design_tol")]
    pub design_tol: f64,
    #[serde(default)]
    pub design_max_iters: Option<usize>,
    /// Budget told to known-budget learners; defaults to the attack budget.
    #[serde(default)]
    pub known_budget: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AttackConfig {
    #[serde(default = "default_attack")]
    pub name: Vec<String>,
    #[serde(default = "default_budget")]
    pub budget: Vec<f64>,
    #[serde(default)]
    pub target: usize,
    #[serde(default = "default_v_target")]
    pub v_target: f64,
    #[serde(default = "default_eps0")]
    pub eps0: f64,
    #[serde(default = "default_top_n")]
    pub n: usize,
    #[serde(default)]
    pub rounds: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub horizon: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub checkpoints: Vec<u64>,
    #[serde(default = "default_worst_k")]
    pub worst_k: usize,
    #[serde(default)]
    pub diagnostics: bool,
    #[serde(default)]
    pub full_trace: bool,
    /// Worker threads; 0 lets the pool decide. Not echoed into outputs, since
    /// it cannot change them.
    #[serde(default, skip_serializing)]
    pub threads: usize,
}

fn default_noise() -> f64 {
    SYNTHETIC_NOISE_VARIANCE
}
fn default_lambda() -> f64 {
    1.0
}
fn default_prior_variance() -> f64 {
    0.5
}
fn default_ts_noise() -> f64 {
    1.0
}
fn default_design_tol() -> f64 {
    DesignOptions::default().tol
}
fn default_attack() -> Vec<String> {
    vec!["none".into()]
}
fn default_budget() -> Vec<f64> {
    vec![0.0]
}
fn default_v_target() -> f64 {
    DEFAULT_V_TARGET
}
fn default_eps0() -> f64 {
    DEFAULT_EPS0
}
fn default_top_n() -> usize {
    3
}
fn default_trials() -> usize {
    10
}
fn default_worst_k() -> usize {
    2
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Int,
    Float,
    Str,
    Bool,
    IntList,
    FloatList,
    StrList,
}

impl Kind {
    fn describe(self) -> &'static str {
        match self {
            Kind::Int => "a non-negative integer",
            Kind::Float => "a number",
            Kind::Str => "a string",
            Kind::Bool => "a boolean",
            Kind::IntList => "a non-negative integer or a list of them",
            Kind::FloatList => "a number or a list of numbers",
            Kind::StrList => "a string or a list of strings",
        }
    }
}

const SCHEMA: &[(&str, &str, Kind)] = &[
    ("instance", "kind", Kind::Str),
    ("instance", "dim", Kind::Int),
    ("instance", "k", Kind::Int),
    ("instance", "eta", Kind::FloatList),
    ("instance", "noise_variance", Kind::Float),
    ("instance", "instance_seed", Kind::Int),
    ("instance", "arms", Kind::Str),
    ("instance", "pool", Kind::Str),
    ("instance", "theta", Kind::FloatList),
    ("instance", "theta_file", Kind::Str),
    ("instance", "header", Kind::Bool),
    ("instance", "strict", Kind::Bool),
    ("instance", "fixture", Kind::Str),
    ("instance", "variant", Kind::Int),
    ("instance", "uncorrupted_regret", Kind::Float),
    ("learner", "name", Kind::StrList),
    ("learner", "delta", Kind::Float),
    ("learner", "nu", Kind::Float),
    ("learner", "lambda", Kind::Float),
    ("learner", "prior_variance", Kind::Float),
    ("learner", "noise_variance", Kind::Float),
    ("learner", "design_tol", Kind::Float),
    ("learner", "design_max_iters", Kind::Int),
    ("learner", "known_budget", Kind::Float),
    ("attack", "name", Kind::StrList),
    ("attack", "budget", Kind::FloatList),
    ("attack", "target", Kind::Int),
    ("attack", "v_target", Kind::Float),
    ("attack", "eps0", Kind::Float),
    ("attack", "n", Kind::Int),
    ("attack", "rounds", Kind::Int),
    ("run", "horizon", Kind::Int),
    ("run", "trials", Kind::Int),
    ("run", "seed", Kind::Int),
    ("run", "checkpoints", Kind::IntList),
    ("run", "worst_k", Kind::Int),
    ("run", "diagnostics", Kind::Bool),
    ("run", "full_trace", Kind::Bool),
    ("run", "threads", Kind::Int),
];

const REQUIRED: &[(&str, &str)] = &[("instance", "kind"), ("learner", "name"), ("run", "horizon")];
const SECTIONS: &[&str] = &["instance", "learner", "attack", "run"];

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::String(_) => "a string",
        Value::Integer(i) if *i < 0 => "a negative integer",
        Value::Integer(_) => "an integer",
        Value::Float(_) => "a float",
        Value::Boolean(_) => "a boolean",
        Value::Datetime(_) => "a datetime",
        Value::Array(_) => "an array",
        Value::Table(_) => "a table",
    }
}

/// Checks one value against `kind`, returning it in canonical shape (lists
/// for list kinds, floats for numeric kinds).
fn normalise(v: &Value, kind: Kind) -> Option<Value> {
    let int = |v: &Value| matches!(v, Value::Integer(i) if *i >= 0).then(|| v.clone());
    let float = |v: &Value| match v {
        Value::Float(f) => Some(Value::Float(*f)),
        Value::Integer(i) => Some(Value::Float(*i as f64)),
        _ => None,
    };
    let string = |v: &Value| matches!(v, Value::String(_)).then(|| v.clone());
    let list = |v: &Value, each: &dyn Fn(&Value) -> Option<Value>| match v {
        Value::Array(xs) => xs.iter().map(each).collect::<Option<Vec<_>>>().map(Value::Array),
        other => each(other).map(|x| Value::Array(vec![x])),
    };
    match kind {
        Kind::Int => int(v),
        Kind::Float => float(v),
        Kind::Str => string(v),
        Kind::Bool => matches!(v, Value::Boolean(_)).then(|| v.clone()),
        Kind::IntList => list(v, &int),
        Kind::FloatList => list(v, &float),
        Kind::StrList => list(v, &string),
    }
}

/// Structural pass over the raw table: unknown sections or keys, wrong types,
/// missing required keys. Returns the normalised table.
pub fn check_structure(raw: &Table) -> Result<Table, ValidationError> {
    let mut errors = Vec::new();
    let mut out = Table::new();
    for (section, value) in raw {
        if !SECTIONS.contains(&section.as_str()) {
            errors.push(format!("unknown section `{section}`"));
            continue;
        }
        let Value::Table(entries) = value else {
            errors.push(format!("`{section}` must be a table, got {}", type_name(value)));
            continue;
        };
        let mut clean = Table::new();
        for (key, v) in entries {
            match SCHEMA.iter().find(|(s, k, _)| s == section && k == key) {
                None => errors.push(format!("unknown key `{section}.{key}`")),
                Some(&(_, _, kind)) => match normalise(v, kind) {
                    Some(v) => {
                        clean.insert(key.clone(), v);
                    }
                    None => errors.push(format!("`{section}.{key}` must be {}, got {}", kind.describe(), type_name(v))),
                },
            }
        }
        out.insert(section.clone(), Value::Table(clean));
    }
    for (section, key) in REQUIRED {
        let present = raw.get(*section).and_then(Value::as_table).is_some_and(|t| t.contains_key(*key));
        if !present {
            errors.push(format!("missing key `{section}.{key}`"));
        }
    }
    for section in SECTIONS {
        out.entry(section.to_string()).or_insert_with(|| Value::Table(Table::new()));
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(ValidationError(errors))
    }
}

/// Applies `section.key=value` overrides. The value is read as a TOML value
/// and falls back to a bare string.
pub fn apply_overrides(table: &mut Table, overrides: &[String]) -> Result<(), ValidationError> {
    let mut errors = Vec::new();
    for o in overrides {
        let Some((path, value)) = o.split_once('=') else {
            errors.push(format!("override `{o}` is not of the form section.key=value"));
            continue;
        };
        let path = path.trim();
        let Some((section, key)) = path.split_once('.') else {
            errors.push(format!("override key `{path}` must be section.key"));
            continue;
        };
        let value = parse_value(value.trim());
        let entry = table.entry(section.to_string()).or_insert_with(|| Value::Table(Table::new()));
        match entry {
            Value::Table(t) => {
                t.insert(key.to_string(), value);
            }
            other => errors.push(format!("`{section}` must be a table, got {}", type_name(other))),
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(ValidationError(errors))
    }
}

pub fn parse_value(text: &str) -> Value {
    format!("v = {text}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(text.to_string()))
}

/// Reads, overrides and validates a TOML configuration.
pub fn load_str(text: &str, overrides: &[String], base_dir: Option<&Path>) -> Result<RunConfig, ValidationError> {
    let mut raw: Table = text
        .parse()
        .map_err(|e: toml::de::Error| ValidationError(vec![format!("TOML syntax: {}", e.message())]))?;
    apply_overrides(&mut raw, overrides)?;
    let table = check_structure(&raw)?;
    let mut cfg: RunConfig = Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| ValidationError(vec![e.message().to_string()]))?;
    if let Some(dir) = base_dir {
        cfg.resolve_paths(dir);
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Reads a configuration echoed into an output file and re-validates it.
pub fn from_json(json: &str) -> Result<RunConfig, ValidationError> {
    let cfg: RunConfig =
        serde_json::from_str(json).map_err(|e| ValidationError(vec![format!("embedded config: {e}")]))?;
    cfg.validate()?;
    Ok(cfg)
}

/// How a learner name maps onto the core specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerKind {
    RpeKnown,
    RpeUnknown,
    RpePracticalKnown,
    RpePracticalUnknown,
    NonrobustPe,
    NonrobustPePractical,
    Greedy,
    LinUcb,
    Thompson,
}

pub const LEARNER_NAMES: &[&str] = &[
    "rpe_known",
    "rpe_unknown",
    "rpe_practical_known",
    "rpe_practical_unknown",
    "nonrobust_pe",
    "nonrobust_pe_practical",
    "greedy",
    "linucb",
    "thompson",
];

impl LearnerKind {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "rpe_known" => Self::RpeKnown,
            "rpe_unknown" => Self::RpeUnknown,
            "rpe_practical_known" => Self::RpePracticalKnown,
            "rpe_practical_unknown" => Self::RpePracticalUnknown,
            "nonrobust_pe" => Self::NonrobustPe,
            "nonrobust_pe_practical" => Self::NonrobustPePractical,
            "greedy" => Self::Greedy,
            "linucb" => Self::LinUcb,
            "thompson" => Self::Thompson,
            _ => return None,
        })
    }

    pub fn is_phased_elimination(self) -> bool {
        matches!(
            self,
            Self::RpeKnown
                | Self::RpeUnknown
                | Self::RpePracticalKnown
                | Self::RpePracticalUnknown
                | Self::NonrobustPe
                | Self::NonrobustPePractical
        )
    }
}

impl LearnerConfig {
    /// Core specification for `kind` facing an adversary with budget `budget`.
    pub fn spec(&self, kind: LearnerKind, budget: f64) -> LearnerSpec {
        let known = self.known_budget.unwrap_or(budget);
        let design = DesignOptions { tol: self.design_tol, max_iters: self.design_max_iters };
        let pe = |mut cfg: PeConfig| {
            cfg.delta = self.delta;
            cfg.nu = self.nu;
            cfg.design = design;
            LearnerSpec::PhasedElimination(cfg)
        };
        match kind {
            LearnerKind::RpeKnown => pe(PeConfig::known(known)),
            LearnerKind::RpeUnknown => pe(PeConfig::unknown()),
            LearnerKind::RpePracticalKnown => pe(PeConfig::practical_known(known)),
            LearnerKind::RpePracticalUnknown => pe(PeConfig::practical_unknown()),
            LearnerKind::NonrobustPe => pe(PeConfig::nonrobust(Parameterisation::Theoretical)),
            LearnerKind::NonrobustPePractical => pe(PeConfig::nonrobust(Parameterisation::Practical)),
            LearnerKind::Greedy => LearnerSpec::Greedy,
            LearnerKind::LinUcb => LearnerSpec::LinUcb { lambda: self.lambda, delta: self.delta.unwrap_or(0.1) },
            LearnerKind::Thompson => LearnerSpec::Thompson {
                prior_variance: self.prior_variance,
                noise_variance: self.noise_variance,
            },
        }
    }
}

/// A parsed attack name.
#[derive(Debug, Clone, PartialEq)]
pub enum AttackChoice {
    Spec(AttackSpec),
    /// The attack bundled with the configured fixture.
    Fixture { delayed: bool },
}

impl AttackConfig {
    /// Parses names such as `flip_theta`, `top_n:5`, `garcelon:2` or
    /// `flip_theta+delayed_start`.
    pub fn parse(&self, name: &str) -> Result<AttackChoice, String> {
        let (base, delayed) = match name.strip_suffix("+delayed_start") {
            Some(b) => (b, true),
            None => (name, false),
        };
        let (head, arg) = match base.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (base, None),
        };
        let num = |what: &str| -> Result<Option<u64>, String> {
            arg.map(|a| a.parse::<u64>().map_err(|_| format!("attack `{name}`: {what} `{a}` is not an integer")))
                .transpose()
        };
        let spec = match head {
            "none" => AttackSpec::None,
            "garcelon" => AttackSpec::Garcelon {
                target: num("target")?.map_or(self.target, |t| t as usize),
                v_target: self.v_target,
            },
            "oracle_mab" => AttackSpec::OracleMab {
                target: num("target")?.map_or(self.target, |t| t as usize),
                eps0: self.eps0,
            },
            "simple_theta" => AttackSpec::SimpleTheta { v_target: self.v_target },
            "flip_theta" => AttackSpec::FlipTheta,
            "top_n" => AttackSpec::TopN { n: num("N")?.map_or(self.n, |n| n as usize) },
            "zeroing" => AttackSpec::Zeroing { rounds: num("rounds")?.or(self.rounds) },
            "fixture" => return Ok(AttackChoice::Fixture { delayed }),
            _ => return Err(format!("unknown attack `{name}`")),
        };
        if arg.is_some() && !matches!(head, "garcelon" | "oracle_mab" | "top_n" | "zeroing") {
            return Err(format!("attack `{head}` takes no `:` argument"));
        }
        if delayed && spec == AttackSpec::None {
            return Err("`none` cannot be delayed".into());
        }
        Ok(AttackChoice::Spec(if delayed { spec.delayed() } else { spec }))
    }
}

impl RunConfig {
    fn resolve_paths(&mut self, base: &Path) {
        for p in [&mut self.instance.arms, &mut self.instance.pool, &mut self.instance.theta_file]
            .into_iter()
            .flatten()
        {
            let path = Path::new(p.as_str());
            if path.is_relative() {
                *p = base.join(path).to_string_lossy().into_owned();
            }
        }
    }

    /// Value checks that need more than the type; lists every problem.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut e = Vec::new();
        let inst = &self.instance;
        let need = |e: &mut Vec<String>, present: bool, key: &str, kind: &str| {
            if !present {
                e.push(format!("missing key `instance.{key}` (required for kind `{kind}`)"));
            }
        };
        match inst.kind.as_str() {
            "synthetic_fixed" => {
                need(&mut e, inst.dim.is_some(), "dim", &inst.kind);
                need(&mut e, inst.k.is_some(), "k", &inst.kind);
            }
            "synthetic_contextual" => {
                need(&mut e, inst.dim.is_some(), "dim", &inst.kind);
                need(&mut e, inst.k.is_some(), "k", &inst.kind);
                need(&mut e, !inst.eta.is_empty(), "eta", &inst.kind);
            }
            "csv_fixed" => {
                need(&mut e, inst.arms.is_some(), "arms", &inst.kind);
                need(&mut e, inst.theta.is_some() || inst.theta_file.is_some(), "theta", &inst.kind);
            }
            "csv_contextual" => {
                need(&mut e, inst.pool.is_some(), "pool", &inst.kind);
                need(&mut e, inst.k.is_some(), "k", &inst.kind);
                need(&mut e, inst.theta.is_some() || inst.theta_file.is_some(), "theta", &inst.kind);
            }
            "fixture" => match inst.fixture.as_deref() {
                None => need(&mut e, false, "fixture", &inst.kind),
                Some(f) => {
                    if let Err(err) = FixtureName::parse(f) {
                        e.push(format!("`instance.fixture`: {err}"));
                    }
                }
            },
            other => e.push(format!(
                "`instance.kind`: unknown kind `{other}` (expected synthetic_fixed, synthetic_contextual, csv_fixed, csv_contextual or fixture)"
            )),
        }
        if inst.theta.is_some() && inst.theta_file.is_some() {
            e.push("`instance.theta` and `instance.theta_file` are mutually exclusive".into());
        }
        if matches!(inst.dim, Some(0)) {
            e.push("`instance.dim` must be >= 1".into());
        }
        if matches!(inst.k, Some(0)) {
            e.push("`instance.k` must be >= 1".into());
        }
        if !(0.0..=1.0).contains(&inst.noise_variance) {
            e.push(format!("`instance.noise_variance` must lie in [0, 1], got {}", inst.noise_variance));
        }
        if !inst.eta.is_empty() && !matches!(inst.kind.as_str(), "synthetic_contextual" | "fixture") {
            e.push(format!("`instance.eta` does not apply to kind `{}`", inst.kind));
        }
        if inst.eta.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            e.push("`instance.eta` values must be finite and >= 0".into());
        }
        if let Some(r) = inst.uncorrupted_regret {
            if !(r > 0.0 && r.is_finite()) {
                e.push("`instance.uncorrupted_regret` must be > 0".into());
            }
        }

        if self.learner.name.is_empty() {
            e.push("`learner.name` must list at least one learner".into());
        }
        for n in &self.learner.name {
            match LearnerKind::parse(n) {
                None => e.push(format!("`learner.name`: unknown learner `{n}` (expected one of {})", LEARNER_NAMES.join(", "))),
                Some(k) if k.is_phased_elimination() && inst.kind.contains("contextual") => {
                    e.push(format!("`learner.name`: `{n}` needs a fixed arm set, not `{}`", inst.kind))
                }
                _ => {}
            }
        }
        let l = &self.learner;
        if let Some(d) = l.delta {
            if !(d > 0.0 && d < 1.0) {
                e.push(format!("`learner.delta` must lie in (0, 1), got {d}"));
            }
        }
        if let Some(nu) = l.nu {
            if !(nu > 0.0 && nu < 1.0) {
                e.push(format!("`learner.nu` must lie in (0, 1), got {nu}"));
            }
        }
        for (key, v) in [("lambda", l.lambda), ("prior_variance", l.prior_variance), ("noise_variance", l.noise_variance)] {
            if !(v > 0.0 && v.is_finite()) {
                e.push(format!("`learner.{key}` must be > 0, got {v}"));
            }
        }
        if !(l.design_tol > 0.0 && l.design_tol.is_finite()) {
            e.push(format!("`learner.design_tol` must be > 0, got {}", l.design_tol));
        }
        if let Some(c) = l.known_budget {
            if !(c >= 0.0 && c.is_finite()) {
                e.push(format!("`learner.known_budget` must be >= 0, got {c}"));
            }
        }

        let a = &self.attack;
        if a.name.is_empty() {
            e.push("`attack.name` must list at least one attack".into());
        }
        for n in &a.name {
            match a.parse(n) {
                Err(msg) => e.push(format!("`attack.name`: {msg}")),
                Ok(AttackChoice::Fixture { .. }) if inst.kind != "fixture" => {
                    e.push("`attack.name`: `fixture` needs `instance.kind = \"fixture\"`".into())
                }
                Ok(AttackChoice::Spec(AttackSpec::TopN { n: 0 })) => e.push("`attack.n` must be >= 1".into()),
                _ => {}
            }
        }
        if a.budget.is_empty() {
            e.push("`attack.budget` must list at least one value".into());
        }
        if a.budget.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            e.push("`attack.budget` values must be finite and >= 0".into());
        }
        if !a.v_target.is_finite() {
            e.push("`attack.v_target` must be finite".into());
        }
        if !(a.eps0 > 0.0 && a.eps0.is_finite()) {
            e.push(format!("`attack.eps0` must be > 0, got {}", a.eps0));
        }
        if let Some(k) = inst.k {
            if a.target >= k && a.name.iter().any(|n| n.starts_with("garcelon") || n.starts_with("oracle_mab")) {
                e.push(format!("`attack.target` {} out of range for k = {k}", a.target));
            }
        }

        let r = &self.run;
        if r.horizon == 0 {
            e.push("`run.horizon` must be >= 1".into());
        }
        if r.trials == 0 {
            e.push("`run.trials` must be >= 1".into());
        }
        if let Some(&bad) = r.checkpoints.iter().find(|&&t| t == 0 || t > r.horizon) {
            e.push(format!("`run.checkpoints`: {bad} lies outside 1..={}", r.horizon));
        }
        if e.is_empty() {
            Ok(())
        } else {
            Err(ValidationError(e))
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }
}
