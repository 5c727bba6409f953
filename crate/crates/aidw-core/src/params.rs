//! Interpolation parameter sets.

use crate::cloud::PointCloud;
use crate::error::{Error, Result};
use crate::real::{c, Real};

/// Runtime precision selector.
///
/// The kernels are generic over [`Real`]; this enum is the runtime tag the
/// CLI and file layers use to pick the `f32` or `f64` instantiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    Single,
    Double,
}

impl Precision {
    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Single => "single",
            Precision::Double => "double",
        }
    }
}

impl core::str::FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" | "f32" => Ok(Precision::Single),
            "double" | "f64" => Ok(Precision::Double),
            _ => Err(Error::InvalidParams("precision must be `single` or `double`")),
        }
    }
}

/// How the study area `A` is obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AreaSpec<R> {
    /// Derive from the axis-aligned bounding box of the data points.
    Auto,
    /// Explicit positive area.
    Fixed(R),
}

/// Parameters of the adaptive decay-exponent pipeline.
///
/// Defaults: `k = 10`, statistic bounds `[0, 2]`, decay levels
/// `(1.0, 1.5, 2.0, 2.5, 3.0)` centered on the standard IDW exponent 2,
/// automatic study area, and a precision-dependent coincidence tolerance
/// (`1e-12` double, `1e-6` single).
#[derive(Debug, Clone, PartialEq)]
pub struct AidwParams<R> {
    /// Number of nearest neighbors entering the observed mean distance.
    pub k: usize,
    /// The five distance-decay category levels.
    pub alpha_levels: [R; 5],
    /// Lower bound of the nearest-neighbor statistic.
    pub r_min: R,
    /// Upper bound of the nearest-neighbor statistic.
    pub r_max: R,
    /// Study area used by the expected-distance formula.
    pub area: AreaSpec<R>,
    /// Distances below this short-circuit the weighted average.
    pub zero_dist_tol: R,
}

impl<R: Real> Default for AidwParams<R> {
    fn default() -> Self {
        Self {
            k: 10,
            alpha_levels: [c(1.0), c(1.5), c(2.0), c(2.5), c(3.0)],
            r_min: R::zero(),
            r_max: c(2.0),
            area: AreaSpec::Auto,
            zero_dist_tol: R::default_zero_tol(),
        }
    }
}

impl<R: Real> AidwParams<R> {
    /// Checks the structural invariants: `k >= 1`, `r_min < r_max`, all
    /// decay levels positive and finite, positive tolerance.
    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return Err(Error::InvalidParams("k must be at least 1"));
        }
        if self.r_min >= self.r_max || !self.r_min.is_finite() || !self.r_max.is_finite() {
            return Err(Error::InvalidBounds);
        }
        for level in &self.alpha_levels {
            if *level <= R::zero() || !level.is_finite() {
                return Err(Error::InvalidParams("alpha levels must be positive and finite"));
            }
        }
        if self.zero_dist_tol <= R::zero() || !self.zero_dist_tol.is_finite() {
            return Err(Error::InvalidParams("zero_dist_tol must be positive and finite"));
        }
        if let AreaSpec::Fixed(a) = self.area {
            if a <= R::zero() || !a.is_finite() {
                return Err(Error::InvalidArea);
            }
        }
        Ok(())
    }

    /// Resolves the study area against a cloud: fixed value, or the data
    /// bounding-box area when automatic.
    pub fn resolve_area(&self, cloud: &PointCloud<R>) -> Result<R> {
        match self.area {
            AreaSpec::Fixed(a) => {
                if a > R::zero() && a.is_finite() {
                    Ok(a)
                } else {
                    Err(Error::InvalidArea)
                }
            }
            AreaSpec::Auto => cloud.bounding_area(),
        }
    }
}
