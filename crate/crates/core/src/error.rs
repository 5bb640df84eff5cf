use std::path::PathBuf;

use crate::pursuit::PursuitTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("matrix entry at ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric: max |A - A^T| = {asymmetry:e}")]
    Asymmetric { asymmetry: f64 },

    #[error("matrix is rank deficient: column {column} of {cols} is numerically dependent")]
    Singular { column: usize, cols: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal {off:e})")]
    NotConverged { sweeps: usize, off: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("restricted isometry hypothesis fails: delta = {delta} >= 1")]
    RipViolation { delta: f64 },

    #[error("enumeration needs {required} subsets, budget is {budget}")]
    Budget { required: u128, budget: u128 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("pursuit re-selected atom {atom} at iteration {t}")]
    Reselection {
        atom: usize,
        t: usize,
        trace: Box<PursuitTrace>,
    },

    #[error("pursuit support became rank deficient at iteration {t}: {source}")]
    PursuitSingular {
        t: usize,
        trace: Box<PursuitTrace>,
        #[source]
        source: Box<Error>,
    },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("trial with seed {seed} failed: {source}")]
    Trial {
        seed: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn dim(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Dimension {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
