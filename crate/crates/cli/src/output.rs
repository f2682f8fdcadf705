//! Output assembly and error mapping. Domain errors exit 1, parse errors 2.

use bohr_core::{BlockError, FrameError, HeytingError, LatticeError};
use bohr_matrix::MatrixError;

pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into() }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Document(_) => CliError::parse(e.to_string()),
            _ => CliError::domain(e.to_string()),
        }
    }
}

impl From<BlockError> for CliError {
    fn from(e: BlockError) -> Self {
        match e {
            BlockError::Lattice(LatticeError::Document(_)) => CliError::parse(e.to_string()),
            _ => CliError::domain(e.to_string()),
        }
    }
}

impl From<HeytingError> for CliError {
    fn from(e: HeytingError) -> Self {
        CliError::domain(e.to_string())
    }
}

impl From<FrameError> for CliError {
    fn from(e: FrameError) -> Self {
        CliError::domain(e.to_string())
    }
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        match e {
            MatrixError::Document(_) => CliError::parse(e.to_string()),
            _ => CliError::domain(e.to_string()),
        }
    }
}

pub fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read `{path}`: {e}")))
}

pub fn json_line(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
