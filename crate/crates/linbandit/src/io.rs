//! Reading feature files.

use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use linbandit_core::instances::{rescale_features, ContextModel, ContextualInstance, Instance, NoiseModel, ScaledFeatures};
use linbandit_core::instances::ArmSet;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}, line {line}: `{field}` is not a number")]
    NotANumber { path: PathBuf, line: u64, field: String },
    #[error("{path}, line {line}: expected {expected} columns, got {got}")]
    Ragged { path: PathBuf, line: u64, expected: usize, got: usize },
    #[error("{path}: no data rows")]
    Empty { path: PathBuf },
    #[error("{path}: {what}")]
    Invalid { path: PathBuf, what: String },
}

/// Reads a comma-separated matrix of reals. `header` skips the first line.
pub fn read_matrix(path: &Path, header: bool) -> Result<Vec<Vec<f64>>, InputError> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| InputError::Io { path: path.into(), source })?;
    parse_matrix(&text, header).map_err(|e| e.at(path))
}

/// Error before the path is known.
#[derive(Debug)]
pub enum ParseError {
    Csv(csv::Error),
    NotANumber { line: u64, field: String },
    Ragged { line: u64, expected: usize, got: usize },
    Empty,
}

impl ParseError {
    fn at(self, path: &Path) -> InputError {
        let path = path.to_path_buf();
        match self {
            ParseError::Csv(source) => InputError::Csv { path, source },
            ParseError::NotANumber { line, field } => InputError::NotANumber { path, line, field },
            ParseError::Ragged { line, expected, got } => InputError::Ragged { path, line, expected, got },
            ParseError::Empty => InputError::Empty { path },
        }
    }
}

pub fn parse_matrix(text: &str, header: bool) -> Result<Vec<Vec<f64>>, ParseError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(ParseError::Csv)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|f| f.parse::<f64>().map_err(|_| ParseError::NotANumber { line, field: f.to_string() }))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(ParseError::Ragged { line, expected: first.len(), got: row.len() });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ParseError::Empty);
    }
    Ok(rows)
}

/// A parameter vector stored as one row or one column.
pub fn read_vector(path: &Path, header: bool) -> Result<Vec<f64>, InputError> {
    let rows = read_matrix(path, header)?;
    if rows.len() == 1 {
        Ok(rows.into_iter().next().unwrap_or_default())
    } else if rows.iter().all(|r| r.len() == 1) {
        Ok(rows.into_iter().map(|r| r[0]).collect())
    } else {
        Err(InputError::Invalid { path: path.into(), what: "expected a single row or a single column".into() })
    }
}

fn scaled(path: &Path, rows: Vec<Vec<f64>>, theta: Vec<f64>, strict: bool) -> Result<ScaledFeatures, InputError> {
    rescale_features(rows, theta, strict).map_err(|e| InputError::Invalid { path: path.into(), what: e.to_string() })
}

/// Fixed-arm instance from an arm file. Rows and θ are rescaled into the unit
/// ball unless `strict`.
pub fn load_instance_csv(
    arms: &Path,
    theta: Vec<f64>,
    header: bool,
    strict: bool,
    noise: NoiseModel,
) -> Result<(Instance, ScaledFeatures), InputError> {
    let f = scaled(arms, read_matrix(arms, header)?, theta, strict)?;
    let invalid = |e: linbandit_core::Error| InputError::Invalid { path: arms.into(), what: e.to_string() };
    let set = ArmSet::new(f.rows.clone()).map_err(invalid)?;
    let inst = Instance::new(set, f.theta.clone(), noise).map_err(invalid)?;
    Ok((inst, f))
}

/// Contextual instance presenting `k` rows of `pool` per round, drawn without
/// replacement.
pub fn load_pool_csv(
    pool: &Path,
    k: usize,
    theta: Vec<f64>,
    header: bool,
    strict: bool,
    noise: NoiseModel,
) -> Result<(ContextualInstance, ScaledFeatures), InputError> {
    let f = scaled(pool, read_matrix(pool, header)?, theta, strict)?;
    let invalid = |e: linbandit_core::Error| InputError::Invalid { path: pool.into(), what: e.to_string() };
    let model = ContextModel::subsample(f.rows.clone(), k).map_err(invalid)?;
    let inst = ContextualInstance::new(model, f.theta.clone(), noise).map_err(invalid)?;
    Ok((inst, f))
}
