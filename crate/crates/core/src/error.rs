use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Pipeline stage that produced a wrapped error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Transform,
    Deflation,
    Coefficients,
    Location,
    RootFinding,
    Eigenvectors,
    Assembly,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Transform => "transform",
            Stage::Deflation => "deflation",
            Stage::Coefficients => "secular coefficients",
            Stage::Location => "root location",
            Stage::RootFinding => "root finding",
            Stage::Eigenvectors => "eigenvectors",
            Stage::Assembly => "assembly",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("poles not strictly increasing at index {index} (gap {gap:e})")]
    NonDistinctPoles { index: usize, gap: f64 },

    #[error("evaluation point {x} coincides with a pole")]
    AtPole { x: f64 },

    #[error("expected {expected} roots in ({lo}, {hi}) but isolated {found}")]
    RootCount {
        lo: f64,
        hi: f64,
        expected: usize,
        found: usize,
    },

    #[error("no sign change in ({lo}, {hi}) and |f| = {residual:e} at the best sample")]
    NoRoot { lo: f64, hi: f64, residual: f64 },

    #[error("{value} is not an eigenvalue of the updated matrix (null residual {residual:e})")]
    NotAnEigenvalue { value: f64, residual: f64 },

    #[error("Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("eigenvalue gap {gap:e} too small for first-order perturbation")]
    GapTooSmall { gap: f64 },

    #[error("Sturm chain terminated at step {step}: leading constant {c:e}")]
    ChainTerminated { step: usize, c: f64 },

    #[error(
        "root census stalled after {restarts} restarts: {certified} of {total} roots certified"
    )]
    Stalled {
        restarts: usize,
        certified: usize,
        total: usize,
        partial: Vec<usize>,
    },

    #[error(
        "location vector disagrees with root count in interval {interval}: {claimed} vs {counted}"
    )]
    LocationMismatch {
        interval: usize,
        claimed: usize,
        counted: usize,
    },

    #[error("inertia count {count} for interval {interval} is inconsistent")]
    Inertia { interval: usize, count: i64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn at(self, stage: Stage) -> Error {
        match self {
            e @ Error::Stage { .. } => e,
            e => Error::Stage {
                stage,
                source: Box::new(e),
            },
        }
    }

    /// Innermost error, with stage wrappers removed.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root_cause(),
            e => e,
        }
    }

    /// True for errors caused by malformed input rather than numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self.root_cause(),
            Error::Dimension(_)
                | Error::InvalidInput(_)
                | Error::NonDistinctPoles { .. }
                | Error::Parse { .. }
                | Error::Io(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) trait StageExt<T> {
    fn stage(self, stage: Stage) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: Stage) -> Result<T> {
        self.map_err(|e| e.at(stage))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_wrapping_is_idempotent() {
        let e = Error::AtPole { x: 1.0 }
            .at(Stage::RootFinding)
            .at(Stage::Assembly);
        match &e {
            Error::Stage { stage, .. } => assert_eq!(*stage, Stage::RootFinding),
            _ => panic!("expected stage wrapper"),
        }
        assert_eq!(e.root_cause(), &Error::AtPole { x: 1.0 });
        assert!(e.to_string().starts_with("root finding:"));
    }

    #[test]
    fn input_errors_are_classified() {
        assert!(Error::InvalidInput("x".into())
            .at(Stage::Transform)
            .is_input_error());
        assert!(!Error::NoConvergence {
            sweeps: 1,
            off: 1.0
        }
        .is_input_error());
    }
}
