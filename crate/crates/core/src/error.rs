//! Error type shared by every module of the crate.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// ABCD to S conversion hit a vanishing denominator.
    #[error("singular conversion: a + b/z_ref + c*z_ref + d vanishes")]
    SingularConversion,

    /// An impedance that is infinite by construction (open circuit seen
    /// through a matrix with c = 0, or a zero admittance). This is a
    /// legitimate network state, not a numeric overflow.
    #[error("unbounded impedance")]
    UnboundedImpedance,

    #[error("lossless pole at {frequency} Hz")]
    PoleSingularity { frequency: f64 },

    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    #[error("frequency {frequency} Hz lies in a stopband (|1 + ZY| > 1)")]
    StopbandPhase { frequency: f64 },

    #[error("infeasible targets: {0}")]
    InfeasibleTargets(String),

    #[error("nonphysical solution: {element} = {value:e}")]
    NonphysicalSolution { element: &'static str, value: f64 },

    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    #[error("degenerate plan: f_rf equals f_lo ({0} Hz)")]
    DegeneratePlan(f64),

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("parse error in {path}, line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    /// Short machine-readable category, printed by the CLI on failure.
    pub fn category(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::SingularConversion => "singular-conversion",
            Error::UnboundedImpedance => "unbounded-impedance",
            Error::PoleSingularity { .. } => "pole-singularity",
            Error::UnsupportedMode(_) => "unsupported-mode",
            Error::StopbandPhase { .. } => "stopband-phase",
            Error::InfeasibleTargets(_) => "infeasible-targets",
            Error::NonphysicalSolution { .. } => "nonphysical-solution",
            Error::ConvergenceFailure(_) => "convergence-failure",
            Error::DegeneratePlan(_) => "degenerate-plan",
            Error::Config { .. } => "config",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io",
            Error::Verification(_) => "verification",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
