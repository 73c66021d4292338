use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("input state is not pure (least symplectic eigenvalue {0})")]
    NotPure(f64),

    #[error("covariance matrix is unphysical (least symplectic eigenvalue {0})")]
    Unphysical(f64),

    #[error("matrix is singular")]
    Singular,

    #[error("transfer matrix is not a scalar multiple of the identity")]
    NonScalarTransfer,

    #[error("channel triad cannot be split into loss plus classical noise: {0}")]
    NonDecomposable(&'static str),

    #[error("photon-number cutoff {cutoff} too small (truncated tail mass {tail:e})")]
    CutoffTooSmall { cutoff: usize, tail: f64 },

    #[error("symplectic-spectrum and closed-form routes disagree: {spectral} vs {closed_form}")]
    RouteMismatch { spectral: f64, closed_form: f64 },

    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

/// Checks that `value` lies in the closed unit interval.
pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::param(name, value, "must lie in [0, 1]"))
    }
}
