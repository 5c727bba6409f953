//! Per-query determination of the distance-decay exponent.
//!
//! The pipeline, composed by [`adaptive_alpha`]:
//!
//! 1. [`expected_nn_distance`] — mean nearest-neighbor distance a random
//!    pattern of `m` points over area `A` would show: `1 / (2 sqrt(m/A))`.
//! 2. [`observed_nn_distance`] — mean of the k nearest sample distances
//!    measured from the query point.
//! 3. [`nn_statistic`] — their ratio `R`; below 1 indicates clustering
//!    around the query, above 1 dispersion.
//! 4. [`normalize_statistic`] — cosine membership function squashing `R`
//!    into `mu` in `[0, 1]`, clamped outside `[r_min, r_max]`.
//! 5. [`decay_parameter`] — piecewise-linear ramp over the five decay
//!    levels with breakpoints at mu = 0.1, 0.3, 0.5, 0.7, 0.9.
//!
//! Note on `r_min > 0`: the membership argument is `pi/r_max * (R - r_min)`
//! as defined, which does not reach `pi` at `R = r_max`, so the function
//! jumps to the upper clamp there. With the default `r_min = 0` it is
//! continuous everywhere.

use alloc::vec::Vec;

use crate::cloud::{PointCloud, QueryPoint};
use crate::error::{Error, Result};
use crate::knn::nearest_k_distances;
use crate::params::AidwParams;
use crate::real::{c, Real};

/// All intermediate quantities of the adaptive pipeline, kept for
/// inspection and trace export.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaTrace<R> {
    /// Expected nearest-neighbor distance for a random pattern.
    pub r_exp: R,
    /// Observed mean distance to the k nearest samples.
    pub r_obs: R,
    /// Nearest-neighbor statistic `r_obs / r_exp`.
    pub r_stat: R,
    /// Normalized statistic in `[0, 1]`.
    pub mu: R,
    /// Resulting distance-decay exponent.
    pub alpha: R,
}

impl<R: Real> Default for AlphaTrace<R> {
    fn default() -> Self {
        let z = R::zero();
        Self { r_exp: z, r_obs: z, r_stat: z, mu: z, alpha: z }
    }
}

/// Expected nearest-neighbor distance `1 / (2 sqrt(m / A))` for a random
/// pattern of `m` points over study area `A`.
pub fn expected_nn_distance<R: Real>(m: usize, area: R) -> Result<R> {
    if m == 0 {
        return Err(Error::EmptyCloud);
    }
    if area <= R::zero() || !area.is_finite() {
        return Err(Error::InvalidArea);
    }
    let m_r = R::from_usize(m).ok_or(Error::InvalidParams("point count out of range"))?;
    Ok(R::one() / (c::<R>(2.0) * (m_r / area).sqrt()))
}

/// Mean of the given neighbor distances, summed in slice order.
pub fn observed_nn_distance<R: Real>(dists: &[R]) -> Result<R> {
    if dists.is_empty() {
        return Err(Error::EmptyNeighborhood);
    }
    let mut sum = R::zero();
    for &d in dists {
        sum = sum + d;
    }
    let k = R::from_usize(dists.len()).ok_or(Error::InvalidParams("neighbor count out of range"))?;
    Ok(sum / k)
}

/// Nearest-neighbor statistic `R = r_obs / r_exp`.
pub fn nn_statistic<R: Real>(r_obs: R, r_exp: R) -> Result<R> {
    if r_exp <= R::zero() || !r_exp.is_finite() {
        return Err(Error::InvalidExpectedDistance);
    }
    Ok(r_obs / r_exp)
}

/// Cosine membership function mapping the statistic into `[0, 1]`:
/// 0 at or below `r_min`, 1 at or above `r_max`, and
/// `0.5 - 0.5 cos(pi/r_max * (R - r_min))` in between.
///
/// The cosine is evaluated as `sin(pi/2 - theta)`, which is exact at the
/// half-way argument: the midpoint of the default `[0, 2]` range maps to
/// exactly 0.5, and the endpoints map to exactly 0 and 1.
pub fn normalize_statistic<R: Real>(r_stat: R, r_min: R, r_max: R) -> Result<R> {
    if r_min >= r_max || !r_min.is_finite() || !r_max.is_finite() {
        return Err(Error::InvalidBounds);
    }
    if r_stat <= r_min {
        return Ok(R::zero());
    }
    if r_stat >= r_max {
        return Ok(R::one());
    }
    let theta = (R::PI() / r_max) * (r_stat - r_min);
    let half = c::<R>(0.5);
    Ok(half - half * (R::FRAC_PI_2() - theta).sin())
}

/// Piecewise-linear ramp over the five decay levels:
/// constant `a1` on `[0, 0.1]`, linear `a1 -> a2` on `[0.1, 0.3]`,
/// `a2 -> a3` on `[0.3, 0.5]`, `a3 -> a4` on `[0.5, 0.7]`,
/// `a4 -> a5` on `[0.7, 0.9]`, constant `a5` on `[0.9, 1]`.
///
/// `mu` outside `[0, 1]` by more than 1e-9 is rejected; inside that
/// tolerance it is clamped. Each segment is evaluated as
/// `lo + (hi - lo) * t` and clamped to its endpoint range, so equal levels
/// collapse to that constant exactly and the result always lies within
/// `[min(levels), max(levels)]`.
pub fn decay_parameter<R: Real>(mu: R, levels: &[R; 5]) -> Result<R> {
    let tol = c::<R>(1e-9);
    if mu < -tol || mu > R::one() + tol || !mu.is_finite() {
        return Err(Error::InvalidMu);
    }
    let mu = mu.max(R::zero()).min(R::one());

    let seg = |lo_level: R, hi_level: R, knot: R| -> R {
        let t = c::<R>(5.0) * (mu - knot);
        let v = lo_level + (hi_level - lo_level) * t;
        v.max(lo_level.min(hi_level)).min(lo_level.max(hi_level))
    };

    let alpha = if mu <= c(0.1) {
        levels[0]
    } else if mu <= c(0.3) {
        seg(levels[0], levels[1], c(0.1))
    } else if mu <= c(0.5) {
        seg(levels[1], levels[2], c(0.3))
    } else if mu <= c(0.7) {
        seg(levels[2], levels[3], c(0.5))
    } else if mu <= c(0.9) {
        seg(levels[3], levels[4], c(0.7))
    } else {
        levels[4]
    };
    Ok(alpha)
}

/// Runs the full pipeline for one query point and returns the trace.
///
/// `m` is the sample count of the cloud and the study area comes from
/// `params.area` (explicit or bounding box).
pub fn adaptive_alpha<R: Real>(
    cloud: &PointCloud<R>,
    query: &QueryPoint<R>,
    params: &AidwParams<R>,
) -> Result<AlphaTrace<R>> {
    params.validate()?;
    let area = params.resolve_area(cloud)?;
    let r_exp = expected_nn_distance(cloud.len(), area)?;
    let dists = nearest_k_distances(cloud, query, params.k)?;
    trace_from_distances(&dists, r_exp, params)
}

/// Completes the pipeline from an already computed sorted distance list.
pub(crate) fn trace_from_distances<R: Real>(
    dists: &[R],
    r_exp: R,
    params: &AidwParams<R>,
) -> Result<AlphaTrace<R>> {
    let r_obs = observed_nn_distance(dists)?;
    let r_stat = nn_statistic(r_obs, r_exp)?;
    let mu = normalize_statistic(r_stat, params.r_min, params.r_max)?;
    let alpha = decay_parameter(mu, &params.alpha_levels)?;
    Ok(AlphaTrace { r_exp, r_obs, r_stat, mu, alpha })
}

/// As [`trace_from_distances`], but from sorted squared distances as the
/// engines produce them. Square roots are taken in ascending order, which
/// yields the same distance sequence bit-for-bit as the distance-space
/// search (sqrt is monotone and correctly rounded).
pub(crate) fn trace_from_sorted_sq<R: Real>(
    sq_dists: &[R],
    scratch: &mut Vec<R>,
    r_exp: R,
    params: &AidwParams<R>,
) -> Result<AlphaTrace<R>> {
    scratch.clear();
    scratch.extend(sq_dists.iter().map(|&sq| sq.sqrt()));
    trace_from_distances(scratch, r_exp, params)
}
