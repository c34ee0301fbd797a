//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use linbandit_core::design::{frank_wolfe_design, support_bound, Design, DesignOptions};
use linbandit_core::Error as CoreError;
use linbandit_core::Vector;

use crate::config::{self, LearnerKind, RunConfig};
use crate::error::{core_exit_code, RunError, EXIT_OK, EXIT_VALIDATION};
use crate::fmt::g12;
use crate::io::{read_matrix, InputError};
use crate::output;
use crate::presets::{self, PRESETS};
use crate::runner::{self, RunReport};

pub const OUT_ENV: &str = "LINBANDIT_OUT";
const DEFAULT_OUT: &str = "linbandit-out";

#[derive(Debug, Parser)]
#[command(name = "linbandit", version, about = "Linear bandits under adversarial reward corruption")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every cell of a configuration.
    Run(RunArgs),
    /// Run a configuration once per value of one parameter.
    Sweep(SweepArgs),
    /// Compute a near G-optimal design for an arm file.
    Design(DesignArgs),
    /// List the shipped presets, or print one.
    Presets { name: Option<String> },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Shipped configuration (see `linbandit presets`).
    #[arg(long)]
    pub preset: Option<String>,
    /// Replay the configuration embedded in an output file.
    #[arg(long)]
    pub from: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Override a configuration value, e.g. `--set run.horizon=1000`.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    pub set: Vec<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Base seed; trial i uses seed + i.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = OUT_ENV)]
    pub out: Option<PathBuf>,
    /// Record epoch, active-set size and threshold per round.
    #[arg(long)]
    pub diagnostics: bool,
    /// Write every round instead of the checkpoint grid.
    #[arg(long)]
    pub full_trace: bool,
    /// Feature files start with a header line.
    #[arg(long)]
    pub header: bool,
    /// Worker threads (0: one per core).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub common: Common,
    /// `C`, `eta` or `algorithm`.
    #[arg(long)]
    pub axis: String,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<String>,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Arm file, one comma-separated vector per line.
    #[arg(long)]
    pub arms: PathBuf,
    #[arg(long)]
    pub header: bool,
    #[arg(long, default_value_t = DesignOptions::default().tol)]
    pub tol: f64,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Weight file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Common {
    fn overrides(&self) -> Vec<String> {
        let mut o = self.set.clone();
        if let Some(n) = self.trials {
            o.push(format!("run.trials={n}"));
        }
        if let Some(s) = self.seed {
            o.push(format!("run.seed={s}"));
        }
        if let Some(n) = self.threads {
            o.push(format!("run.threads={n}"));
        }
        if self.diagnostics {
            o.push("run.diagnostics=true".into());
        }
        if self.full_trace {
            o.push("run.full_trace=true".into());
        }
        if self.header {
            o.push("instance.header=true".into());
        }
        o
    }

    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    }
}

/// Resolves the configuration source and applies overrides.
pub fn load_config(source: &Source, overrides: &[String]) -> Result<RunConfig, RunError> {
    if let Some(path) = &source.config {
        let text = std::fs::read_to_string(path).map_err(|e| InputError::Io { path: path.clone(), source: e })?;
        return Ok(config::load_str(&text, overrides, path.parent())?);
    }
    if let Some(name) = &source.preset {
        let preset = presets::find(name).ok_or_else(|| {
            let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
            RunError::Usage(format!("unknown preset `{name}` (available: {})", names.join(", ")))
        })?;
        return Ok(config::load_str(preset.text, overrides, None)?);
    }
    if let Some(path) = &source.from {
        let cfg = output::embedded_config(path)?;
        if overrides.is_empty() {
            return Ok(cfg);
        }
        let text = toml::to_string(&cfg).map_err(|e| RunError::Usage(format!("re-encoding config: {e}")))?;
        return Ok(config::load_str(&text, overrides, None)?);
    }
    Err(RunError::Usage("one of --config, --preset or --from is required".into()))
}

fn report_table(report: &RunReport, out: &Path) -> String {
    let mut s = String::new();
    for c in &report.cells {
        let spent = c.summary.final_spent.iter().cloned().fold(0.0, f64::max);
        let _ = writeln!(
            s,
            "{:<60} mean final regret {:>12}  max spent {}",
            c.cell.dir,
            g12(c.summary.mean_final()),
            g12(spent)
        );
    }
    let _ = writeln!(s, "wrote {}", out.join(output::SUMMARY_FILE).display());
    s
}

pub fn cmd_run(args: &RunArgs) -> Result<(), RunError> {
    let cfg = load_config(&args.source, &args.common.overrides())?;
    let out = args.common.out_dir();
    let report = runner::execute(&cfg, Some(&out))?;
    print!("{}", report_table(&report, &out));
    Ok(())
}

/// Configuration key varied by a sweep axis.
pub fn sweep_key(axis: &str) -> Result<&'static str, RunError> {
    match axis {
        "C" | "c" | "budget" => Ok("attack.budget"),
        "eta" => Ok("instance.eta"),
        "algorithm" | "learner" => Ok("learner.name"),
        other => Err(RunError::Usage(format!("unknown sweep axis `{other}` (expected C, eta or algorithm)"))),
    }
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<(), RunError> {
    let key = sweep_key(&args.axis)?;
    let base_overrides = args.common.overrides();
    let base = load_config(&args.source, &base_overrides)?;
    let mut values = Vec::with_capacity(args.values.len());
    for v in &args.values {
        let v = v.trim();
        let literal = if key == "learner.name" {
            if LearnerKind::parse(v).is_none() {
                return Err(RunError::Usage(format!("unknown learner `{v}` in sweep values")));
            }
            format!("\"{v}\"")
        } else {
            let x: f64 = v.parse().map_err(|_| RunError::Usage(format!("sweep value `{v}` is not a number")))?;
            g12(x)
        };
        values.push((v.to_string(), literal));
    }
    let out = args.common.out_dir();
    let axis = key.rsplit('.').next().unwrap_or(key);

    let mut table = format!("# config: {}\n", base.to_json());
    table.push_str("value,cell,learner,attack,budget,eta,round,mean,std,mean_with_corruption\n");
    let mut overrides = base_overrides.clone();
    overrides.push(String::new());
    for (raw, literal) in &values {
        *overrides.last_mut().expect("pushed above") = format!("{key}=[{literal}]");
        let cfg = load_config(&args.source, &overrides)?;
        let dir = out.join(format!("{axis}_{}", raw.replace(':', "_")));
        let report = runner::execute(&cfg, Some(&dir))?;
        let mut rounds = cfg.run.checkpoints.clone();
        rounds.push(cfg.run.horizon);
        for c in &report.cells {
            for (j, t) in c.summary.grid.iter().enumerate() {
                if !rounds.contains(t) {
                    continue;
                }
                let _ = writeln!(
                    table,
                    "{raw},{},{},{},{},{},{t},{},{},{}",
                    c.cell.dir,
                    c.cell.learner,
                    c.cell.attack,
                    g12(c.cell.budget),
                    c.cell.eta.map(g12).unwrap_or_default(),
                    g12(c.summary.mean[j]),
                    g12(c.summary.std[j]),
                    g12(c.summary.mean_with_corruption[j]),
                );
            }
        }
        print!("{}", report_table(&report, &dir));
    }
    std::fs::create_dir_all(&out).map_err(crate::error::write_err(&out))?;
    let path = out.join(format!("sweep_{axis}.csv"));
    output::write_file(&path, &table)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn design_csv(design: &Design) -> String {
    let mut s = String::from("arm_index,weight\n");
    for (i, w) in design.weights.iter().enumerate() {
        let _ = writeln!(s, "{i},{}", g12(*w));
    }
    s
}

fn design_line(design: &Design, dim: usize) -> String {
    format!(
        "# value={} rank={} bound={} support={} support_bound={} iterations={}",
        g12(design.value),
        design.rank,
        2 * design.rank,
        design.support_len(),
        g12(support_bound(dim)),
        design.iterations
    )
}

/// Runs the design solver. Returns the process exit code; a solver failure
/// still writes the best design found.
pub fn cmd_design(args: &DesignArgs) -> Result<i32, RunError> {
    let rows = read_matrix(&args.arms, args.header)?;
    let dim = rows[0].len();
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(InputError::Invalid { path: args.arms.clone(), what: "non-finite entry".into() }.into());
    }
    let arms: Vec<Vector> = rows.into_iter().map(Vector::from_vec).collect();
    let opts = DesignOptions { tol: args.tol, max_iters: args.max_iters };
    let (design, code, err) = match frank_wolfe_design(&arms, opts) {
        Ok(d) => (d, EXIT_OK, None),
        Err(CoreError::DesignNotConverged { best, iterations, value, bound }) => {
            let e = CoreError::DesignNotConverged { best: best.clone(), iterations, value, bound };
            (*best, core_exit_code(&e), Some(e))
        }
        Err(e) => return Err(e.into()),
    };
    let csv = design_csv(&design);
    match &args.out {
        Some(path) => output::write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    println!("{}", design_line(&design, dim));
    if let Some(e) = err {
        eprintln!("error: {e}");
    }
    Ok(code)
}

pub fn cmd_presets(name: Option<&str>) -> Result<(), RunError> {
    match name {
        None => {
            for p in PRESETS {
                println!("{:<20} {}", p.name, p.description());
            }
            Ok(())
        }
        Some(n) => {
            let p = presets::find(n).ok_or_else(|| RunError::Usage(format!("unknown preset `{n}`")))?;
            print!("{}", p.text);
            Ok(())
        }
    }
}

/// Parses `args` and runs the command; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a).map(|_| EXIT_OK),
        Command::Sweep(a) => cmd_sweep(a).map(|_| EXIT_OK),
        Command::Design(a) => cmd_design(a),
        Command::Presets { name } => cmd_presets(name.as_deref()).map(|_| EXIT_OK),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
