use thiserror::Error;

/// Errors raised by the engine.
///
/// Variants are grouped by what the caller can do about them: configuration
/// and domain problems point at bad inputs, insufficient-data and degenerate
/// cases point at recordings or logs that cannot support the computation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{field}: value {value} outside {}", range_text(*.lo, *.hi))]
    Domain {
        field: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("{field}: {message}")]
    Config { field: String, message: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("undefined normalization: {0}")]
    UndefinedNormalization(String),

    #[error("missing joint `{0}`")]
    MissingJoint(String),

    #[error("topology mismatch: expected `{expected}`, found `{found}`")]
    TopologyMismatch { expected: String, found: String },

    #[error("non-finite value in {0}")]
    NonFinite(String),
}

impl Error {
    pub(crate) fn domain(field: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Error::Domain {
            field: field.into(),
            value,
            lo,
            hi,
        }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Dotted path of the offending field, when the error names one.
    pub fn field(&self) -> Option<&str> {
        match self {
            Error::Domain { field, .. } | Error::Config { field, .. } => Some(field),
            _ => None,
        }
    }

    /// Prefix the field path, e.g. `band` becomes `plan.band`.
    pub fn within(self, prefix: &str) -> Self {
        match self {
            Error::Domain { field, value, lo, hi } => Error::Domain {
                field: join_path(prefix, &field),
                value,
                lo,
                hi,
            },
            Error::Config { field, message } => Error::Config {
                field: join_path(prefix, &field),
                message,
            },
            other => other,
        }
    }
}

fn range_text(lo: f64, hi: f64) -> String {
    match (lo, hi) {
        (lo, hi) if lo == f64::MIN_POSITIVE && hi == f64::MAX => "(0, inf)".into(),
        (lo, hi) if hi == f64::MAX => format!("[{lo}, inf)"),
        (lo, hi) => format!("[{lo}, {hi}]"),
    }
}

fn join_path(prefix: &str, field: &str) -> String {
    if field.is_empty() {
        prefix.to_string()
    } else {
        format!("{prefix}.{field}")
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Check `value` lies in the closed interval `[lo, hi]` (NaN fails).
pub(crate) fn check_closed(field: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::domain(field, value, lo, hi))
    }
}
