//! Output files. Every file carries the resolved configuration so a run can be
//! replayed from any of them.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use linbandit_core::harness::{RegretTrace, TrialSummary};
use serde_json::{json, Value};

use crate::config::{self, RunConfig, ValidationError};
use crate::error::{write_err, RunError};
use crate::fmt::g12;
use crate::runner::{Cell, RunReport};

pub const SUMMARY_FILE: &str = "summary.json";
const CONFIG_PREFIX: &str = "# config: ";

fn create_dir(dir: &Path) -> Result<(), RunError> {
    fs::create_dir_all(dir).map_err(write_err(dir))
}

pub fn write_file(path: &Path, text: &str) -> Result<(), RunError> {
    fs::write(path, text).map_err(write_err(path))
}

fn preamble(cfg: &RunConfig, cell: &Cell) -> String {
    format!("{CONFIG_PREFIX}{}\n# cell: {}\n", cfg.to_json(), cell.dir)
}

fn opt(x: Option<impl ToString>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Trial trace at checkpoint rows, or every round with `full_trace`.
pub fn trial_csv(cfg: &RunConfig, cell: &Cell, trace: &RegretTrace, grid: &[u64]) -> String {
    let mut s = preamble(cfg, cell);
    let _ = writeln!(s, "# seed: {}", trace.seed);
    s.push_str("round,arm,inst_regret,cum_regret,cum_regret_with_corruption,corruption,spent");
    if trace.diagnostics.is_some() {
        s.push_str(",epoch,active,c_hat");
    }
    s.push('\n');
    let all: Vec<u64>;
    let rounds = if cfg.run.full_trace {
        all = (1..=trace.len() as u64).collect();
        &all[..]
    } else {
        grid
    };
    for &t in rounds {
        let i = t as usize - 1;
        let _ = write!(
            s,
            "{t},{},{},{},{},{},{}",
            trace.arms[i],
            g12(trace.inst_regret[i]),
            g12(trace.cum_regret[i]),
            g12(trace.cum_regret_with_corruption[i]),
            g12(trace.corruption[i]),
            g12(trace.spent[i]),
        );
        if let Some(d) = &trace.diagnostics {
            let d = d[i];
            let _ = write!(s, ",{},{},{}", opt(d.epoch), opt(d.active), d.c_hat.map(g12).unwrap_or_default());
        }
        s.push('\n');
    }
    s
}

/// Mean, standard deviation and the worst trials on the checkpoint grid.
pub fn curve_csv(cfg: &RunConfig, cell: &Cell, summary: &TrialSummary) -> String {
    let worst = summary.worst(cfg.run.worst_k);
    let mut s = preamble(cfg, cell);
    let seeds: Vec<String> = summary.seeds.iter().map(u64::to_string).collect();
    let _ = writeln!(s, "# seeds: {}", seeds.join(","));
    let worst_seeds: Vec<String> = worst.iter().map(|&i| summary.seeds[i].to_string()).collect();
    let _ = writeln!(s, "# worst_seeds: {}", worst_seeds.join(","));
    s.push_str("round,mean,std,mean_with_corruption");
    for i in 1..=worst.len() {
        let _ = write!(s, ",worst_{i}");
    }
    s.push('\n');
    for (j, &t) in summary.grid.iter().enumerate() {
        let _ = write!(s, "{t},{},{},{}", g12(summary.mean[j]), g12(summary.std[j]), g12(summary.mean_with_corruption[j]));
        for &w in &worst {
            let _ = write!(s, ",{}", g12(summary.curves[w][j]));
        }
        s.push('\n');
    }
    s
}

pub fn write_cell(out: &Path, cfg: &RunConfig, cell: &Cell, traces: &[RegretTrace], summary: &TrialSummary) -> Result<(), RunError> {
    let dir = out.join(&cell.dir);
    create_dir(&dir)?;
    for trace in traces {
        write_file(&dir.join(format!("trial_{}.csv", trace.seed)), &trial_csv(cfg, cell, trace, &summary.grid))?;
    }
    write_file(&dir.join("curve.csv"), &curve_csv(cfg, cell, summary))
}

/// A real rounded to 12 significant digits, or null when not finite.
pub fn num(x: f64) -> Value {
    g12(x).parse::<f64>().ok().filter(|v| v.is_finite()).map_or(Value::Null, Value::from)
}

fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

fn std_of(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

pub fn summary_json(report: &RunReport) -> String {
    let k = report.config.run.worst_k;
    let cells: Vec<Value> = report
        .cells
        .iter()
        .map(|c| {
            let s = &c.summary;
            let finals_with: Vec<f64> = c.trials.iter().map(|t| t.final_with_corruption).collect();
            let worst: Vec<Value> = s
                .worst(k)
                .into_iter()
                .map(|i| json!({"seed": s.seeds[i], "final_regret": num(s.final_regrets[i])}))
                .collect();
            json!({
                "dir": c.cell.dir,
                "learner": c.cell.learner,
                "attack": c.cell.attack,
                "attack_applied": c.cell.spec.attack.label(),
                "budget": num(c.cell.budget),
                "eta": c.cell.eta.map(num),
                "seeds": s.seeds,
                "final_regret": nums(&s.final_regrets),
                "final_regret_with_corruption": nums(&finals_with),
                "final_spent": nums(&s.final_spent),
                "first_attacked": c.trials.iter().map(|t| t.first_attacked).collect::<Vec<_>>(),
                "mean_final": num(s.mean_final()),
                "std_final": num(std_of(&s.final_regrets)),
                "worst": worst,
                "mean": nums(&s.mean),
                "std": nums(&s.std),
            })
        })
        .collect();
    let doc = json!({
        "config": report.config,
        "seeds": report.cells.first().map(|c| c.summary.seeds.clone()).unwrap_or_default(),
        "grid": report.grid,
        "cells": cells,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("summary serialises");
    text.push('\n');
    text
}

pub fn write_summary(out: &Path, report: &RunReport) -> Result<(), RunError> {
    create_dir(out)?;
    write_file(&out.join(SUMMARY_FILE), &summary_json(report))
}

/// The configuration embedded in an output file.
pub fn embedded_config(path: &Path) -> Result<RunConfig, RunError> {
    let text = fs::read_to_string(path)
        .map_err(|source| crate::io::InputError::Io { path: PathBuf::from(path), source })?;
    let bad = |what: &str| ValidationError(vec![format!("{}: {what}", path.display())]);
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(&text).map_err(|e| bad(&format!("not a summary file: {e}")))?;
        let cfg = doc.get("config").ok_or_else(|| bad("no `config` entry"))?;
        return Ok(config::from_json(&cfg.to_string())?);
    }
    let line = text
        .lines()
        .find_map(|l| l.strip_prefix(CONFIG_PREFIX))
        .ok_or_else(|| bad("no embedded `# config:` line"))?;
    Ok(config::from_json(line)?)
}
