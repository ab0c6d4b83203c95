use thiserror::Error;

use crate::series::SeriesResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Gamma evaluated at zero or a negative integer.
    #[error("pole of the gamma function at {arg}")]
    Pole { arg: f64 },

    /// A lower-parameter Pochhammer symbol vanished before the series terminated.
    #[error("lower parameter {param} vanishes at series index {index}")]
    LowerPole { param: f64, index: u64 },

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("series diverges: parametric excess {excess} <= 0")]
    Divergence { excess: f64 },

    #[error("parametric excess {excess} below {min}; rewrite with a transformation first")]
    SlowConvergence { excess: f64, min: f64 },

    #[error("no convergence after {} terms (estimate {}, tail {})", .best.terms_used, .best.value, .best.tail_bound)]
    MaxTermsExceeded { best: Box<SeriesResult> },

    #[error("precondition violated{}: {condition}", stage.as_ref().map(|s| format!(" at stage {s}")).unwrap_or_default())]
    Precondition {
        condition: String,
        stage: Option<String>,
    },

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("no valid representation: excess {excess} and neither Thomae nor Kummer applies")]
    NoValidRepresentation { excess: f64 },

    #[error("quadrature did not reach target (estimate {estimate}, error {achieved_error})")]
    AccuracyNotReached { estimate: f64, achieved_error: f64 },

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid rational literal {0:?}")]
    ParseRational(String),
}

impl Error {
    pub(crate) fn precondition(condition: impl Into<String>) -> Self {
        Error::Precondition {
            condition: condition.into(),
            stage: None,
        }
    }

    pub(crate) fn at_stage(self, stage: &str) -> Self {
        match self {
            Error::Precondition { condition, .. } => Error::Precondition {
                condition,
                stage: Some(stage.to_string()),
            },
            other => other,
        }
    }

    /// True for failures caused by the inputs rather than by numerical accuracy.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            Error::MaxTermsExceeded { .. } | Error::AccuracyNotReached { .. }
        )
    }
}
