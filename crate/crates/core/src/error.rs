use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} must be finite")]
    NonFinite(&'static str),

    #[error("invalid {what}: {reason}")]
    Invalid { what: &'static str, reason: String },

    #[error("{joint} angle {value:.4} rad outside joint limits [{lo:.4}, {hi:.4}]")]
    JointLimit {
        joint: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("gait file row {row}: {kind}")]
    GaitRow { row: u64, kind: GaitRowError },

    #[error("gait file: {0}")]
    Gait(String),

    #[error("trajectory needs at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("correlation undefined: {0} has zero variance")]
    UndefinedCorrelation(&'static str),

    #[error("series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("signal too short: {len} samples, need more than {min} for filter warm-up")]
    SignalTooShort { len: usize, min: usize },

    #[error("empty window: {0}")]
    EmptyWindow(String),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("simulation diverged at step {step}: {reason}")]
    Diverged { step: usize, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaitRowError {
    #[error("missing column `{0}`")]
    MissingColumn(&'static str),
    #[error("cannot parse `{value}` in column `{column}`")]
    Parse { column: &'static str, value: String },
    #[error("gc_percent {value} does not increase (previous {previous})")]
    NonMonotone { previous: f64, value: f64 },
    #[error("gc_percent {0} outside [0, 100]")]
    GcOutOfRange(f64),
    #[error("first sample must be at gc_percent 0, got {0}")]
    FirstNotZero(f64),
    #[error("{joint} angle {deg} deg outside joint limits")]
    AngleOutOfLimits { joint: &'static str, deg: f64 },
    #[error("closing sample differs from the 0% sample by {gap_deg:.3} deg at the {joint} (limit 0.5 deg)")]
    NotPeriodic { joint: &'static str, gap_deg: f64 },
}

impl Error {
    pub(crate) fn invalid(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
