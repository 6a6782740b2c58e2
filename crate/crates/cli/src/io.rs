use std::fs;
use std::path::{Path, PathBuf};

use dtpassive::inclusion::MatrixSet;
use dtpassive::mconvex::IsometryTuple;
use dtpassive::stein::SteinSetSpec;
use dtpassive::{ComplexMatrix, HermitianMatrix, RealizationArray};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

/// Process outcome; the discriminant is the exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or flag combinations.
    Usage(String),
    /// Unreadable or malformed input, or input rejected by the library.
    Input(String),
    /// Output could not be written.
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Input(_) => 65,
            CliError::Output(_) => 74,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Output(m) => write!(f, "output error: {m}"),
        }
    }
}

impl From<dtpassive::Error> for CliError {
    fn from(e: dtpassive::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn read_value(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn decode<T: DeserializeOwned>(path: &Path, v: Value) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Descends into each of `keys` in turn when present. Lets the output of one
/// command (which wraps its payload) be fed to another.
fn unwrap_keys(mut v: Value, keys: &[&str]) -> Value {
    for key in keys {
        match v.get(*key) {
            Some(inner) if !inner.is_null() => v = inner.clone(),
            _ => {}
        }
    }
    v
}

pub fn load_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    decode(path, read_value(path)?)
}

pub fn load_matrices(paths: &[PathBuf]) -> CliResult<Vec<ComplexMatrix>> {
    paths.iter().map(|p| load_matrix(p)).collect()
}

/// A Hermitian matrix, or any command output carrying one as
/// `certificate` / `p` (e.g. `certify-riccati` or `db-check` results).
pub fn load_certificate(path: &Path) -> CliResult<HermitianMatrix> {
    let v = unwrap_keys(read_value(path)?, &["certificate", "p"]);
    decode(path, v)
}

pub fn load_hermitian(path: &Path) -> CliResult<HermitianMatrix> {
    decode(path, read_value(path)?)
}

/// A realization, or a command output carrying one under `realization`.
pub fn load_realization(path: &Path) -> CliResult<RealizationArray> {
    let v = unwrap_keys(read_value(path)?, &["realization"]);
    decode(path, v)
}

pub fn load_realizations(paths: &[PathBuf]) -> CliResult<Vec<RealizationArray>> {
    paths.iter().map(|p| load_realization(p)).collect()
}

pub fn load_stein_set(path: &Path) -> CliResult<SteinSetSpec> {
    decode(path, read_value(path)?)
}

pub fn load_tuple(path: &Path) -> CliResult<IsometryTuple> {
    decode(path, read_value(path)?)
}

pub fn load_matrix_set(path: &Path) -> CliResult<MatrixSet> {
    decode(path, read_value(path)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

/// Writes to `out` if given, else to standard output.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Output(e.to_string()))
        }
    }
}

/// Comma-separated reals, e.g. `1.01,2,10`.
pub fn parse_reals(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("{t:?}: {e}"))
                .and_then(|x| {
                    if x.is_finite() {
                        Ok(x)
                    } else {
                        Err(format!("{t:?} is not finite"))
                    }
                })
        })
        .collect()
}
