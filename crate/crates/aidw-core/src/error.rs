//! Error type shared across the interpolation pipeline.

use core::fmt;

/// Errors reported by cloud construction, neighbor search, the adaptive
/// pipeline, and the prediction engines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The data bounding box has zero width or zero height, so an
    /// automatically derived study area would be zero.
    DegenerateExtent,
    /// Fewer samples than the requested neighbor count `k`.
    InsufficientData { have: usize, need: usize },
    /// Prediction requested against a cloud with no samples.
    EmptyCloud,
    /// Mean neighbor distance requested over an empty distance list.
    EmptyNeighborhood,
    /// Study area is zero, negative, or not finite.
    InvalidArea,
    /// Expected nearest-neighbor distance is zero, negative, or not finite.
    InvalidExpectedDistance,
    /// Statistic bounds violate `r_min < r_max`.
    InvalidBounds,
    /// Membership value outside `[0, 1]` beyond tolerance.
    InvalidMu,
    /// Parameter validation failure.
    InvalidParams(&'static str),
    /// Non-finite coordinate or value at sample `index`.
    NonFinite { index: usize },
    /// SoA columns of unequal length.
    LengthMismatch,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegenerateExtent => {
                write!(f, "degenerate extent: data bounding box has zero width or height")
            }
            Error::InsufficientData { have, need } => write!(
                f,
                "insufficient data: k = {need} neighbors requested but only {have} samples"
            ),
            Error::EmptyCloud => write!(f, "empty cloud: at least one sample is required"),
            Error::EmptyNeighborhood => write!(f, "empty neighborhood: no distances to average"),
            Error::InvalidArea => write!(f, "invalid area: study area must be positive and finite"),
            Error::InvalidExpectedDistance => {
                write!(f, "invalid expected distance: must be positive and finite")
            }
            Error::InvalidBounds => write!(f, "invalid bounds: r_min must be less than r_max"),
            Error::InvalidMu => write!(f, "invalid mu: membership value outside [0, 1]"),
            Error::InvalidParams(reason) => write!(f, "invalid parameters: {reason}"),
            Error::NonFinite { index } => {
                write!(f, "non-finite coordinate or value at sample {index}")
            }
            Error::LengthMismatch => write!(f, "column length mismatch in SoA storage"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
