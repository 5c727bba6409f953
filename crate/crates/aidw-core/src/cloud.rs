//! Point clouds in two memory layouts, plus planar geometry helpers.
//!
//! A cloud stores samples either as three parallel coordinate/value arrays
//! (structure of arrays, SoA) or as one interleaved record array (array of
//! structures, AoS). The layout is a representation choice only: for any
//! index `i`, [`PointCloud::sample_at`] yields bit-identical samples under
//! either tag, and every kernel in this crate produces bit-identical output
//! for both.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::real::Real;

/// A known data point: planar location plus the scalar attribute being
/// interpolated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<R> {
    pub x: R,
    pub y: R,
    pub value: R,
}

impl<R> Sample<R> {
    pub fn new(x: R, y: R, value: R) -> Self {
        Self { x, y, value }
    }
}

/// A location at which a value is to be predicted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryPoint<R> {
    pub x: R,
    pub y: R,
}

impl<R> QueryPoint<R> {
    pub fn new(x: R, y: R) -> Self {
        Self { x, y }
    }
}

/// Memory layout tag for cloud storage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layout {
    /// Structure of arrays: all x, then all y, then all values.
    Soa,
    /// Array of structures: interleaved `(x, y, value)` records.
    Aos,
}

impl Layout {
    pub fn as_str(self) -> &'static str {
        match self {
            Layout::Soa => "soa",
            Layout::Aos => "aos",
        }
    }
}

impl core::str::FromStr for Layout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "soa" | "SoA" => Ok(Layout::Soa),
            "aos" | "AoS" => Ok(Layout::Aos),
            _ => Err(Error::InvalidParams("layout must be `soa` or `aos`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Storage<R> {
    Soa { xs: Vec<R>, ys: Vec<R>, values: Vec<R> },
    Aos(Vec<Sample<R>>),
}

/// Borrowed view of cloud storage, for layout-specialized inner loops.
#[derive(Debug, Clone, Copy)]
pub enum LayoutView<'a, R> {
    Soa { xs: &'a [R], ys: &'a [R], values: &'a [R] },
    Aos(&'a [Sample<R>]),
}

impl<'a, R> LayoutView<'a, R> {
    /// Sub-view over the index range `start..end`.
    #[inline]
    pub fn slice(&self, start: usize, end: usize) -> LayoutView<'a, R> {
        match *self {
            LayoutView::Soa { xs, ys, values } => LayoutView::Soa {
                xs: &xs[start..end],
                ys: &ys[start..end],
                values: &values[start..end],
            },
            LayoutView::Aos(samples) => LayoutView::Aos(&samples[start..end]),
        }
    }
}

/// Extremes cached at construction: coordinate bounding box and value range.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Bounds<R> {
    min_x: R,
    max_x: R,
    min_y: R,
    max_y: R,
    min_value: R,
    max_value: R,
}

/// An immutable collection of samples in a chosen memory layout.
///
/// Construction validates that every coordinate and value is finite, so the
/// kernels never see NaN or infinity. Clouds are safe to share across any
/// number of reader threads.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud<R> {
    storage: Storage<R>,
    bounds: Option<Bounds<R>>,
}

impl<R: Real> PointCloud<R> {
    /// Builds a cloud in the given layout from sample records.
    pub fn from_samples(layout: Layout, samples: Vec<Sample<R>>) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            if !(s.x.is_finite() && s.y.is_finite() && s.value.is_finite()) {
                return Err(Error::NonFinite { index: i });
            }
        }
        let bounds = compute_bounds(samples.iter().copied());
        let storage = match layout {
            Layout::Aos => Storage::Aos(samples),
            Layout::Soa => {
                let mut xs = Vec::with_capacity(samples.len());
                let mut ys = Vec::with_capacity(samples.len());
                let mut values = Vec::with_capacity(samples.len());
                for s in &samples {
                    xs.push(s.x);
                    ys.push(s.y);
                    values.push(s.value);
                }
                Storage::Soa { xs, ys, values }
            }
        };
        Ok(Self { storage, bounds })
    }

    /// Builds an SoA cloud directly from parallel columns.
    pub fn from_columns(xs: Vec<R>, ys: Vec<R>, values: Vec<R>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() != values.len() {
            return Err(Error::LengthMismatch);
        }
        for i in 0..xs.len() {
            if !(xs[i].is_finite() && ys[i].is_finite() && values[i].is_finite()) {
                return Err(Error::NonFinite { index: i });
            }
        }
        let bounds = compute_bounds(
            xs.iter()
                .zip(ys.iter())
                .zip(values.iter())
                .map(|((&x, &y), &value)| Sample { x, y, value }),
        );
        Ok(Self { storage: Storage::Soa { xs, ys, values }, bounds })
    }

    /// An empty cloud with the given layout tag.
    pub fn empty(layout: Layout) -> Self {
        let storage = match layout {
            Layout::Soa => Storage::Soa { xs: Vec::new(), ys: Vec::new(), values: Vec::new() },
            Layout::Aos => Storage::Aos(Vec::new()),
        };
        Self { storage, bounds: None }
    }

    pub fn layout(&self) -> Layout {
        match self.storage {
            Storage::Soa { .. } => Layout::Soa,
            Storage::Aos(_) => Layout::Aos,
        }
    }

    /// Number of samples.
    pub fn len(&self) -> usize {
        match &self.storage {
            Storage::Soa { xs, .. } => xs.len(),
            Storage::Aos(samples) => samples.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The sample at index `i`, identical for both layouts.
    #[inline]
    pub fn sample_at(&self, i: usize) -> Sample<R> {
        match &self.storage {
            Storage::Soa { xs, ys, values } => Sample { x: xs[i], y: ys[i], value: values[i] },
            Storage::Aos(samples) => samples[i],
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Sample<R>> + '_ {
        (0..self.len()).map(move |i| self.sample_at(i))
    }

    /// Borrowed storage view for layout-specialized loops.
    #[inline]
    pub fn view(&self) -> LayoutView<'_, R> {
        match &self.storage {
            Storage::Soa { xs, ys, values } => LayoutView::Soa { xs, ys, values },
            Storage::Aos(samples) => LayoutView::Aos(samples),
        }
    }

    /// Re-represents the cloud in `target` layout. Values are copied
    /// bit-for-bit, so converting back round-trips exactly.
    pub fn convert_layout(&self, target: Layout) -> PointCloud<R> {
        if self.layout() == target {
            return self.clone();
        }
        let samples: Vec<Sample<R>> = self.iter().collect();
        let storage = match target {
            Layout::Aos => Storage::Aos(samples),
            Layout::Soa => {
                let mut xs = Vec::with_capacity(samples.len());
                let mut ys = Vec::with_capacity(samples.len());
                let mut values = Vec::with_capacity(samples.len());
                for s in &samples {
                    xs.push(s.x);
                    ys.push(s.y);
                    values.push(s.value);
                }
                Storage::Soa { xs, ys, values }
            }
        };
        PointCloud { storage, bounds: self.bounds }
    }

    /// Axis-aligned bounding-box area of the sample locations, used as the
    /// automatic study area.
    ///
    /// Fails with [`Error::DegenerateExtent`] when the box has zero width
    /// or zero height (fewer than two samples, or collinear along an axis),
    /// since a zero area would make the expected-distance formula undefined.
    pub fn bounding_area(&self) -> Result<R> {
        let b = self.bounds.ok_or(Error::DegenerateExtent)?;
        let width = b.max_x - b.min_x;
        let height = b.max_y - b.min_y;
        if width > R::zero() && height > R::zero() {
            Ok(width * height)
        } else {
            Err(Error::DegenerateExtent)
        }
    }

    /// `(min, max)` over sample values; `None` for an empty cloud.
    pub fn value_bounds(&self) -> Option<(R, R)> {
        self.bounds.map(|b| (b.min_value, b.max_value))
    }

    /// `(min_x, min_y, max_x, max_y)` of the sample locations.
    pub fn coord_bounds(&self) -> Option<(R, R, R, R)> {
        self.bounds.map(|b| (b.min_x, b.min_y, b.max_x, b.max_y))
    }
}

impl PointCloud<f64> {
    /// Narrows a double-precision cloud to single precision, preserving the
    /// layout. Fails if a value overflows the `f32` range.
    pub fn to_single(&self) -> Result<PointCloud<f32>> {
        let samples: Vec<Sample<f32>> = self
            .iter()
            .map(|s| Sample { x: s.x as f32, y: s.y as f32, value: s.value as f32 })
            .collect();
        PointCloud::from_samples(self.layout(), samples)
    }
}

fn compute_bounds<R: Real>(samples: impl Iterator<Item = Sample<R>>) -> Option<Bounds<R>> {
    let mut bounds: Option<Bounds<R>> = None;
    for s in samples {
        match &mut bounds {
            None => {
                bounds = Some(Bounds {
                    min_x: s.x,
                    max_x: s.x,
                    min_y: s.y,
                    max_y: s.y,
                    min_value: s.value,
                    max_value: s.value,
                });
            }
            Some(b) => {
                b.min_x = b.min_x.min(s.x);
                b.max_x = b.max_x.max(s.x);
                b.min_y = b.min_y.min(s.y);
                b.max_y = b.max_y.max(s.y);
                b.min_value = b.min_value.min(s.value);
                b.max_value = b.max_value.max(s.value);
            }
        }
    }
    bounds
}

/// Euclidean distance from a query location to a sample location.
#[inline]
pub fn distance<R: Real>(q: &QueryPoint<R>, s: &Sample<R>) -> R {
    distance_sq(q.x, q.y, s.x, s.y).sqrt()
}

/// Squared Euclidean distance between two planar locations.
#[inline]
pub(crate) fn distance_sq<R: Real>(qx: R, qy: R, px: R, py: R) -> R {
    let dx = qx - px;
    let dy = qy - py;
    dx * dx + dy * dy
}
