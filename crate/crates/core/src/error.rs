use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    CorruptDataset {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("no ordinates in {0}")]
    NoOrdinates(PathBuf),
    #[error("requested {requested} zeros exceeds the cap of {cap}")]
    ZeroCapExceeded { requested: usize, cap: usize },
    #[error("failed to separate zeros in Gram block [{lo}, {hi}]: expected {expected} sign changes, found {found}")]
    MissedZero {
        lo: f64,
        hi: f64,
        expected: usize,
        found: usize,
    },
    #[error("T = {t} exceeds the table coverage t_max = {t_max}")]
    OutOfCoverage { t: f64, t_max: f64 },
    #[error("argument {name} = {value} is outside the domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("y = {y} exceeds the singular series table range K_max = {k_max}")]
    TableOverflow { y: f64, k_max: usize },
    #[error("quadrature did not reach tolerance {tol:e} (estimate {estimate:e}) within {budget} subdivisions")]
    QuadratureBudget {
        tol: f64,
        estimate: f64,
        budget: usize,
    },
    #[error("truncation bound {bound:e} on {term} exceeds 1% of the running total {total:e}; raise the caps")]
    Truncation {
        term: &'static str,
        bound: f64,
        total: f64,
    },
    #[error("kernel is not even: r({u}) = {plus} but r(-{u}) = {minus}")]
    KernelNotEven { u: f64, plus: f64, minus: f64 },
    #[error("invalid cache file: {0}")]
    Cache(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            reason,
        }
    }
}
