use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the mathematical domain of a function.
    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    /// A series or iteration did not reach its tolerance.
    #[error("{what} did not converge: {detail}")]
    Convergence { what: &'static str, detail: String },

    /// An input violates a documented precondition. `field` names the offender.
    #[error("invalid configuration `{field}`: {detail}")]
    Config { field: String, detail: String },

    /// The integrator produced a non-finite or runaway state.
    #[error("solution diverged after t = {last_valid_time}")]
    Divergence { last_valid_time: f64 },

    /// A least-squares fit had nothing to fit (all errors zero or non-finite).
    #[error("degenerate convergence fit: {0}")]
    DegenerateFit(String),

    /// An operation needing an interior equilibrium was given parameters without one.
    #[error("no feasible interior equilibrium for these parameters")]
    NoInteriorEquilibrium,

    #[error("parameter file {path}, line {line}: {detail}")]
    Parse { path: PathBuf, line: usize, detail: String },

    #[error("i/o error on {path}: {detail}")]
    Io { path: PathBuf, detail: String },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            detail: detail.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            detail: err.to_string(),
        }
    }
}
