//! Prediction kernels: fixed-exponent IDW and adaptive IDW.
//!
//! A prediction is the weighted average of all sample values with weights
//! `1/d^alpha`. IDW uses one user-chosen `alpha` for every query; adaptive
//! IDW derives `alpha` per query from the local point pattern and then
//! performs the same weighted average, so each adaptive prediction scans
//! the data twice: once for the bounded k-nearest search and once for the
//! weighting.
//!
//! Two slice kernels are provided through [`run_slice`]:
//!
//! - [`SliceMode::Naive`]: per query, one full pass over the samples
//!   (two for adaptive),
//! - [`SliceMode::Tiled`]: the samples are walked in `tile_size` chunks,
//!   and each chunk is applied to every query in the slice before moving
//!   on, so a chunk stays cache-resident across the whole query slice.
//!
//! Both kernels visit samples in ascending index order within each query,
//! share the same per-point accumulation code, and therefore produce
//! bit-identical output for any tile size. Parallel engines split the
//! query list into contiguous slices; results do not depend on the split.
//!
//! Numerical edges: a sample within `zero_dist_tol` of the query
//! short-circuits the average to the nearest such sample's value (the
//! weight would diverge); the final value is clamped to the sample value
//! range, making the convex-combination bound hold under rounding; and in
//! the degenerate case where every weight under- or overflows, the value
//! of the nearest sample is returned.

use alloc::vec::Vec;

use crate::adaptive::{trace_from_sorted_sq, AlphaTrace};
use crate::cloud::{distance_sq, LayoutView, PointCloud, QueryPoint};
use crate::error::{Error, Result};
use crate::knn::NeighborBuffer;
use crate::params::AidwParams;
use crate::real::{c, Real};

/// Default number of samples per tile for the tiled kernel.
pub const DEFAULT_TILE_SIZE: usize = 256;

/// Which batch engine executes a prediction run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EngineKind {
    /// Reference engine: one thread, naive full scans.
    Sequential,
    /// Cache-blocked tiles, queries partitioned across workers.
    TiledParallel,
}

impl EngineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineKind::Sequential => "seq",
            EngineKind::TiledParallel => "tiled",
        }
    }
}

impl core::str::FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seq" | "sequential" => Ok(EngineKind::Sequential),
            "tiled" | "tiled_parallel" => Ok(EngineKind::TiledParallel),
            _ => Err(Error::InvalidParams("engine must be `seq` or `tiled`")),
        }
    }
}

/// Engine choice plus its tuning knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecPlan {
    pub engine: EngineKind,
    /// Worker threads for the tiled engine; the sequential engine ignores it.
    pub workers: usize,
    /// Samples per tile for the tiled engine.
    pub tile_size: usize,
}

impl ExecPlan {
    pub fn sequential() -> Self {
        Self { engine: EngineKind::Sequential, workers: 1, tile_size: DEFAULT_TILE_SIZE }
    }

    pub fn tiled(workers: usize, tile_size: usize) -> Self {
        Self { engine: EngineKind::TiledParallel, workers, tile_size }
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers < 1 {
            return Err(Error::InvalidParams("workers must be at least 1"));
        }
        if self.tile_size < 1 {
            return Err(Error::InvalidParams("tile_size must be at least 1"));
        }
        Ok(())
    }
}

/// Prediction method for a batch run.
#[derive(Debug, Clone, PartialEq)]
pub enum Method<R> {
    /// Standard IDW with a fixed decay exponent.
    Idw { alpha: R, zero_dist_tol: R },
    /// Adaptive IDW with a per-query exponent.
    Aidw(AidwParams<R>),
}

impl<R: Real> Method<R> {
    /// Fixed-exponent IDW with the precision-default coincidence tolerance.
    pub fn idw(alpha: R) -> Self {
        Method::Idw { alpha, zero_dist_tol: R::default_zero_tol() }
    }

    pub fn aidw(params: AidwParams<R>) -> Self {
        Method::Aidw(params)
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, Method::Aidw(_))
    }
}

/// Batch output: one value per query, plus the adaptive traces on request.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionResult<R> {
    pub values: Vec<R>,
    pub traces: Option<Vec<AlphaTrace<R>>>,
}

/// Iteration pattern of a slice kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceMode {
    /// Per query, one uninterrupted pass over all samples.
    Naive,
    /// Samples walked in ascending `tile_size` chunks, each chunk applied
    /// to every query before the next is loaded.
    Tiled { tile_size: usize },
}

/// A method with batch-level preconditions checked and batch-constant
/// quantities (study area, expected distance, squared tolerance) resolved,
/// so the per-query kernels are infallible.
#[derive(Debug, Clone)]
pub struct PreparedMethod<R: Real> {
    inner: PreparedInner<R>,
}

#[derive(Debug, Clone)]
enum PreparedInner<R: Real> {
    Idw { exp: WeightExp<R>, tol_sq: R },
    Aidw { params: AidwParams<R>, r_exp: R, tol_sq: R },
}

impl<R: Real> PreparedMethod<R> {
    pub fn prepare(method: &Method<R>, cloud: &PointCloud<R>) -> Result<Self> {
        if cloud.is_empty() {
            return Err(Error::EmptyCloud);
        }
        let inner = match method {
            Method::Idw { alpha, zero_dist_tol } => {
                if *alpha <= R::zero() || !alpha.is_finite() {
                    return Err(Error::InvalidParams("alpha must be positive and finite"));
                }
                if *zero_dist_tol <= R::zero() || !zero_dist_tol.is_finite() {
                    return Err(Error::InvalidParams("zero_dist_tol must be positive and finite"));
                }
                PreparedInner::Idw {
                    exp: WeightExp::new(*alpha),
                    tol_sq: *zero_dist_tol * *zero_dist_tol,
                }
            }
            Method::Aidw(params) => {
                params.validate()?;
                if cloud.len() < params.k {
                    return Err(Error::InsufficientData { have: cloud.len(), need: params.k });
                }
                let area = params.resolve_area(cloud)?;
                let r_exp = crate::adaptive::expected_nn_distance(cloud.len(), area)?;
                if r_exp <= R::zero() || !r_exp.is_finite() {
                    return Err(Error::InvalidArea);
                }
                PreparedInner::Aidw {
                    params: params.clone(),
                    r_exp,
                    tol_sq: params.zero_dist_tol * params.zero_dist_tol,
                }
            }
        };
        Ok(Self { inner })
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self.inner, PreparedInner::Aidw { .. })
    }
}

/// Precomputed exponent context for the weight `sqd^(-alpha/2)`.
///
/// `alpha = 2` takes an exact reciprocal path; since the comparison is
/// against exactly 2, both engines and both methods agree on it, so the
/// engine- and method-equivalence guarantees are unaffected.
#[derive(Debug, Clone, Copy)]
struct WeightExp<R> {
    neg_half_alpha: R,
    is_inverse_square: bool,
}

impl<R: Real> WeightExp<R> {
    #[inline]
    fn new(alpha: R) -> Self {
        Self {
            neg_half_alpha: -(alpha * c::<R>(0.5)),
            is_inverse_square: alpha == c::<R>(2.0),
        }
    }

    #[inline(always)]
    fn weight(self, sqd: R) -> R {
        if self.is_inverse_square {
            sqd.recip()
        } else {
            sqd.powf(self.neg_half_alpha)
        }
    }
}

/// Per-query weighting accumulator. Tracks the running weight sums and the
/// nearest sample within the coincidence tolerance.
#[derive(Debug, Clone, Copy)]
struct WeightState<R> {
    wsum: R,
    wzsum: R,
    near_sqd: R,
    near_value: R,
    has_near: bool,
}

impl<R: Real> WeightState<R> {
    fn new() -> Self {
        Self {
            wsum: R::zero(),
            wzsum: R::zero(),
            near_sqd: R::infinity(),
            near_value: R::zero(),
            has_near: false,
        }
    }

    #[inline(always)]
    fn add(&mut self, sqd: R, value: R, tol_sq: R, exp: WeightExp<R>) {
        if sqd < tol_sq {
            // coincidence candidate; keep the nearest, first seen on ties
            if !self.has_near || sqd < self.near_sqd {
                self.has_near = true;
                self.near_sqd = sqd;
                self.near_value = value;
            }
        } else {
            let w = exp.weight(sqd);
            self.wsum = self.wsum + w;
            self.wzsum = self.wzsum + w * value;
        }
    }

    /// Final value clamped to the sample value range; `None` when the
    /// weight sums degenerated (all weights under- or overflowed).
    #[inline]
    fn finalize(&self, lo: R, hi: R) -> Option<R> {
        if self.has_near {
            return Some(self.near_value);
        }
        let v = self.wzsum / self.wsum;
        if v.is_finite() {
            Some(v.max(lo).min(hi))
        } else {
            None
        }
    }
}

/// Applies one chunk of samples to a weighting accumulator. The layout
/// match sits outside the inner loop; both arms perform identical
/// arithmetic in identical order.
#[inline]
fn weight_tile<R: Real>(
    state: &mut WeightState<R>,
    tile: &LayoutView<'_, R>,
    qx: R,
    qy: R,
    tol_sq: R,
    exp: WeightExp<R>,
) {
    match *tile {
        LayoutView::Soa { xs, ys, values } => {
            for ((&px, &py), &value) in xs.iter().zip(ys.iter()).zip(values.iter()) {
                state.add(distance_sq(qx, qy, px, py), value, tol_sq, exp);
            }
        }
        LayoutView::Aos(samples) => {
            for s in samples {
                state.add(distance_sq(qx, qy, s.x, s.y), s.value, tol_sq, exp);
            }
        }
    }
}

/// Applies one chunk of samples to a bounded neighbor buffer, in squared
/// distance space (monotone-equivalent to distances; square roots are
/// deferred to the trace computation).
#[inline]
fn knn_tile<R: Real>(buffer: &mut NeighborBuffer<R>, tile: &LayoutView<'_, R>, qx: R, qy: R) {
    match *tile {
        LayoutView::Soa { xs, ys, .. } => {
            for (&px, &py) in xs.iter().zip(ys.iter()) {
                buffer.push(distance_sq(qx, qy, px, py));
            }
        }
        LayoutView::Aos(samples) => {
            for s in samples {
                buffer.push(distance_sq(qx, qy, s.x, s.y));
            }
        }
    }
}

/// Value of the sample nearest to the query (first wins on ties).
fn nearest_sample_value<R: Real>(cloud: &PointCloud<R>, query: &QueryPoint<R>) -> R {
    let first = cloud.sample_at(0);
    let mut best_sqd = distance_sq(query.x, query.y, first.x, first.y);
    let mut best = first.value;
    for i in 1..cloud.len() {
        let s = cloud.sample_at(i);
        let sqd = distance_sq(query.x, query.y, s.x, s.y);
        if sqd < best_sqd {
            best_sqd = sqd;
            best = s.value;
        }
    }
    best
}

#[inline]
fn finish<R: Real>(
    state: &WeightState<R>,
    cloud: &PointCloud<R>,
    query: &QueryPoint<R>,
    lo: R,
    hi: R,
) -> R {
    state.finalize(lo, hi).unwrap_or_else(|| nearest_sample_value(cloud, query))
}

/// Runs a prepared method over a contiguous slice of queries, writing one
/// value per query (and one trace per query for adaptive methods, when a
/// trace buffer is supplied).
///
/// This is the building block execution engines drive: the sequential
/// engine runs one naive slice over the whole query list, and the tiled
/// parallel engine runs one tiled slice per worker. Output depends only on
/// `(cloud, query, prepared)` per query, never on how the list was sliced,
/// and naive and tiled modes are bit-identical.
pub fn run_slice<R: Real>(
    cloud: &PointCloud<R>,
    queries: &[QueryPoint<R>],
    prepared: &PreparedMethod<R>,
    mode: SliceMode,
    out_values: &mut [R],
    out_traces: Option<&mut [AlphaTrace<R>]>,
) {
    assert_eq!(queries.len(), out_values.len(), "output slice length mismatch");
    if let Some(traces) = &out_traces {
        assert_eq!(queries.len(), traces.len(), "trace slice length mismatch");
    }
    if queries.is_empty() {
        return;
    }
    let (lo, hi) = cloud.value_bounds().expect("prepare() rejects empty clouds");
    match mode {
        SliceMode::Naive => naive_slice(cloud, queries, prepared, lo, hi, out_values, out_traces),
        SliceMode::Tiled { tile_size } => {
            assert!(tile_size >= 1, "tile_size must be at least 1");
            tiled_slice(cloud, queries, prepared, tile_size, lo, hi, out_values, out_traces)
        }
    }
}

fn naive_slice<R: Real>(
    cloud: &PointCloud<R>,
    queries: &[QueryPoint<R>],
    prepared: &PreparedMethod<R>,
    lo: R,
    hi: R,
    out_values: &mut [R],
    mut out_traces: Option<&mut [AlphaTrace<R>]>,
) {
    let view = cloud.view();
    match &prepared.inner {
        PreparedInner::Idw { exp, tol_sq } => {
            for (i, q) in queries.iter().enumerate() {
                let mut state = WeightState::new();
                weight_tile(&mut state, &view, q.x, q.y, *tol_sq, *exp);
                out_values[i] = finish(&state, cloud, q, lo, hi);
            }
        }
        PreparedInner::Aidw { params, r_exp, tol_sq } => {
            let mut buffer = NeighborBuffer::new(params.k);
            let mut scratch = Vec::with_capacity(params.k);
            for (i, q) in queries.iter().enumerate() {
                buffer.reset();
                knn_tile(&mut buffer, &view, q.x, q.y);
                let trace = trace_from_sorted_sq(buffer.distances(), &mut scratch, *r_exp, params)
                    .expect("prepare() validated the pipeline inputs");
                let exp = WeightExp::new(trace.alpha);
                let mut state = WeightState::new();
                weight_tile(&mut state, &view, q.x, q.y, *tol_sq, exp);
                out_values[i] = finish(&state, cloud, q, lo, hi);
                if let Some(traces) = out_traces.as_deref_mut() {
                    traces[i] = trace;
                }
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn tiled_slice<R: Real>(
    cloud: &PointCloud<R>,
    queries: &[QueryPoint<R>],
    prepared: &PreparedMethod<R>,
    tile_size: usize,
    lo: R,
    hi: R,
    out_values: &mut [R],
    mut out_traces: Option<&mut [AlphaTrace<R>]>,
) {
    let view = cloud.view();
    let m = cloud.len();
    let tiles = move || {
        (0..m).step_by(tile_size).map(move |start| {
            let end = (start + tile_size).min(m);
            view.slice(start, end)
        })
    };
    match &prepared.inner {
        PreparedInner::Idw { exp, tol_sq } => {
            let mut states: Vec<WeightState<R>> =
                (0..queries.len()).map(|_| WeightState::new()).collect();
            for tile in tiles() {
                for (q, state) in queries.iter().zip(states.iter_mut()) {
                    weight_tile(state, &tile, q.x, q.y, *tol_sq, *exp);
                }
            }
            for (i, (q, state)) in queries.iter().zip(states.iter()).enumerate() {
                out_values[i] = finish(state, cloud, q, lo, hi);
            }
        }
        PreparedInner::Aidw { params, r_exp, tol_sq } => {
            // first wave: bounded kNN over all samples, tile by tile
            let mut buffers: Vec<NeighborBuffer<R>> =
                (0..queries.len()).map(|_| NeighborBuffer::new(params.k)).collect();
            for tile in tiles() {
                for (q, buffer) in queries.iter().zip(buffers.iter_mut()) {
                    knn_tile(buffer, &tile, q.x, q.y);
                }
            }
            // per-query exponents from the completed buffers
            let mut scratch = Vec::with_capacity(params.k);
            let mut exps: Vec<WeightExp<R>> = Vec::with_capacity(queries.len());
            for (i, buffer) in buffers.iter().enumerate() {
                let trace = trace_from_sorted_sq(buffer.distances(), &mut scratch, *r_exp, params)
                    .expect("prepare() validated the pipeline inputs");
                exps.push(WeightExp::new(trace.alpha));
                if let Some(traces) = out_traces.as_deref_mut() {
                    traces[i] = trace;
                }
            }
            // second wave: weighting over all samples, tile by tile
            let mut states: Vec<WeightState<R>> =
                (0..queries.len()).map(|_| WeightState::new()).collect();
            for tile in tiles() {
                for ((q, state), exp) in queries.iter().zip(states.iter_mut()).zip(exps.iter()) {
                    weight_tile(state, &tile, q.x, q.y, *tol_sq, *exp);
                }
            }
            for (i, (q, state)) in queries.iter().zip(states.iter()).enumerate() {
                out_values[i] = finish(state, cloud, q, lo, hi);
            }
        }
    }
}

/// Predicts one value with fixed-exponent IDW over all samples.
///
/// A sample within `zero_dist_tol` of the query short-circuits to that
/// sample's value (nearest such sample wins). The result always lies
/// within the sample value range.
pub fn predict_idw<R: Real>(
    cloud: &PointCloud<R>,
    query: &QueryPoint<R>,
    alpha: R,
    zero_dist_tol: R,
) -> Result<R> {
    let prepared = PreparedMethod::prepare(&Method::Idw { alpha, zero_dist_tol }, cloud)?;
    let mut out = [R::zero()];
    run_slice(cloud, core::slice::from_ref(query), &prepared, SliceMode::Naive, &mut out, None);
    Ok(out[0])
}

/// Predicts one value with adaptive IDW: derives the decay exponent from
/// the local point pattern, then applies the weighted average over all
/// samples. Returns the value together with the full pipeline trace.
pub fn predict_aidw<R: Real>(
    cloud: &PointCloud<R>,
    query: &QueryPoint<R>,
    params: &AidwParams<R>,
) -> Result<(R, AlphaTrace<R>)> {
    let prepared = PreparedMethod::prepare(&Method::Aidw(params.clone()), cloud)?;
    let mut out = [R::zero()];
    let mut traces = [AlphaTrace::default()];
    run_slice(
        cloud,
        core::slice::from_ref(query),
        &prepared,
        SliceMode::Naive,
        &mut out,
        Some(&mut traces),
    );
    Ok((out[0], traces[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloud::{Layout, Sample};
    use alloc::vec;
    use alloc::vec::Vec;

    /// Deterministic pseudo-random samples for engine tests (LCG; the full
    /// seeded generator lives in the companion crate).
    fn scatter(n: usize, seed: u64, extent: f64) -> Vec<Sample<f64>> {
        let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15) | 1;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        (0..n)
            .map(|_| Sample::new(next() * extent, next() * extent, next() * 100.0))
            .collect()
    }

    fn scatter_queries(n: usize, seed: u64, extent: f64) -> Vec<QueryPoint<f64>> {
        scatter(n, seed, extent).into_iter().map(|s| QueryPoint::new(s.x, s.y)).collect()
    }

    fn batch(
        cloud: &PointCloud<f64>,
        queries: &[QueryPoint<f64>],
        method: &Method<f64>,
        mode: SliceMode,
    ) -> Vec<f64> {
        let prepared = PreparedMethod::prepare(method, cloud).unwrap();
        let mut out = vec![0.0; queries.len()];
        run_slice(cloud, queries, &prepared, mode, &mut out, None);
        out
    }

    #[test]
    fn single_sample_returns_its_value() {
        let cloud =
            PointCloud::from_samples(Layout::Soa, vec![Sample::new(3.0, -2.0, 7.25)]).unwrap();
        for alpha in [1.0, 2.0, 3.3] {
            let v = predict_idw(&cloud, &QueryPoint::new(100.0, 41.0), alpha, 1e-12).unwrap();
            assert_eq!(v, 7.25);
        }
    }

    #[test]
    fn equidistant_pair_averages() {
        // both samples at distance exactly 1, so the weights are exactly
        // equal for every exponent
        let cloud = PointCloud::from_samples(
            Layout::Aos,
            vec![Sample::new(-1.0, 0.0, 0.0), Sample::new(1.0, 0.0, 10.0)],
        )
        .unwrap();
        for alpha in [1.0, 2.0, 2.7, 5.0] {
            let v = predict_idw(&cloud, &QueryPoint::new(0.0, 0.0), alpha, 1e-12).unwrap();
            assert_eq!(v, 5.0, "alpha = {alpha}");
        }
    }

    #[test]
    fn coincident_query_short_circuits() {
        let cloud = PointCloud::from_samples(
            Layout::Soa,
            vec![Sample::new(0.0, 0.0, 1.5), Sample::new(2.0, 2.0, 9.5)],
        )
        .unwrap();
        let v = predict_idw(&cloud, &QueryPoint::new(0.0, 0.0), 2.0, 1e-12).unwrap();
        assert_eq!(v, 1.5);
    }

    #[test]
    fn nearest_coincident_sample_wins() {
        let tol = 1e-3;
        let cloud = PointCloud::from_samples(
            Layout::Soa,
            vec![
                Sample::new(5e-4, 0.0, 20.0), // inside tolerance, farther
                Sample::new(1e-4, 0.0, 30.0), // inside tolerance, nearest
                Sample::new(9.0, 9.0, 40.0),
            ],
        )
        .unwrap();
        let v = predict_idw(&cloud, &QueryPoint::new(0.0, 0.0), 2.0, tol).unwrap();
        assert_eq!(v, 30.0);
    }

    #[test]
    fn empty_cloud_is_an_error() {
        let cloud: PointCloud<f64> = PointCloud::empty(Layout::Soa);
        assert_eq!(
            predict_idw(&cloud, &QueryPoint::new(0.0, 0.0), 2.0, 1e-12),
            Err(Error::EmptyCloud)
        );
    }

    #[test]
    fn rejects_bad_alpha() {
        let cloud =
            PointCloud::from_samples(Layout::Soa, vec![Sample::new(0.0, 0.0, 1.0)]).unwrap();
        assert!(matches!(
            predict_idw(&cloud, &QueryPoint::new(1.0, 1.0), 0.0, 1e-12),
            Err(Error::InvalidParams(_))
        ));
    }

    /// Straight-line reference evaluator, written independently of the
    /// engine path: true distances, `powf` on the distance, no clamp.
    fn straight_line_idw(
        cloud: &PointCloud<f64>,
        q: &QueryPoint<f64>,
        alpha: f64,
        tol: f64,
    ) -> f64 {
        let mut best: Option<(f64, f64)> = None;
        let mut wsum = 0.0;
        let mut wzsum = 0.0;
        for s in cloud.iter() {
            let d = ((q.x - s.x).powi(2) + (q.y - s.y).powi(2)).sqrt();
            if d < tol {
                match best {
                    Some((bd, _)) if bd <= d => {}
                    _ => best = Some((d, s.value)),
                }
                continue;
            }
            let w = 1.0 / d.powf(alpha);
            wsum += w;
            wzsum += w * s.value;
        }
        match best {
            Some((_, v)) => v,
            None => wzsum / wsum,
        }
    }

    #[test]
    fn matches_straight_line_oracle() {
        let cloud = PointCloud::from_samples(Layout::Soa, scatter(100, 11, 50.0)).unwrap();
        let queries = scatter_queries(10, 13, 50.0);
        for alpha in [1.0, 2.0, 2.5, 3.0] {
            for q in &queries {
                let got = predict_idw(&cloud, q, alpha, 1e-12).unwrap();
                let want = straight_line_idw(&cloud, q, alpha, 1e-12);
                assert!(
                    (got - want).abs() <= 1e-12 * want.abs(),
                    "alpha = {alpha}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn aidw_with_constant_levels_degenerates_to_idw() {
        let cloud = PointCloud::from_samples(Layout::Soa, scatter(200, 3, 100.0)).unwrap();
        let queries = scatter_queries(50, 5, 100.0);
        let params = AidwParams { alpha_levels: [2.0; 5], ..AidwParams::default() };
        let idw = Method::Idw { alpha: 2.0, zero_dist_tol: params.zero_dist_tol };
        let aidw = Method::Aidw(params);
        for mode in [SliceMode::Naive, SliceMode::Tiled { tile_size: 64 }] {
            let a = batch(&cloud, &queries, &aidw, mode);
            let b = batch(&cloud, &queries, &idw, mode);
            for (x, y) in a.iter().zip(b.iter()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn naive_and_tiled_are_bit_identical() {
        let cloud = PointCloud::from_samples(Layout::Soa, scatter(300, 17, 100.0)).unwrap();
        let queries = scatter_queries(80, 19, 100.0);
        for method in [Method::idw(2.5), Method::Aidw(AidwParams::default())] {
            let reference = batch(&cloud, &queries, &method, SliceMode::Naive);
            for tile_size in [1, 7, 64, 300, 1000] {
                let tiled = batch(&cloud, &queries, &method, SliceMode::Tiled { tile_size });
                for (a, b) in reference.iter().zip(tiled.iter()) {
                    assert_eq!(a.to_bits(), b.to_bits(), "tile_size = {tile_size}");
                }
            }
        }
    }

    #[test]
    fn layouts_are_bit_identical() {
        let soa = PointCloud::from_samples(Layout::Soa, scatter(150, 23, 100.0)).unwrap();
        let aos = soa.convert_layout(Layout::Aos);
        let queries = scatter_queries(40, 29, 100.0);
        let method = Method::Aidw(AidwParams::default());
        for mode in [SliceMode::Naive, SliceMode::Tiled { tile_size: 32 }] {
            let a = batch(&soa, &queries, &method, mode);
            let b = batch(&aos, &queries, &method, mode);
            for (x, y) in a.iter().zip(b.iter()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn tiled_traces_match_naive_traces() {
        let cloud = PointCloud::from_samples(Layout::Soa, scatter(120, 31, 60.0)).unwrap();
        let queries = scatter_queries(25, 37, 60.0);
        let prepared =
            PreparedMethod::prepare(&Method::Aidw(AidwParams::default()), &cloud).unwrap();
        let mut v1 = vec![0.0; queries.len()];
        let mut t1 = vec![AlphaTrace::default(); queries.len()];
        run_slice(&cloud, &queries, &prepared, SliceMode::Naive, &mut v1, Some(&mut t1));
        let mut v2 = vec![0.0; queries.len()];
        let mut t2 = vec![AlphaTrace::default(); queries.len()];
        run_slice(
            &cloud,
            &queries,
            &prepared,
            SliceMode::Tiled { tile_size: 13 },
            &mut v2,
            Some(&mut t2),
        );
        for (a, b) in t1.iter().zip(t2.iter()) {
            assert_eq!(a.alpha.to_bits(), b.alpha.to_bits());
            assert_eq!(a.r_obs.to_bits(), b.r_obs.to_bits());
        }
    }

    #[test]
    fn engine_trace_matches_public_pipeline() {
        // the squared-distance engine path and the public distance-space
        // pipeline must agree bit for bit
        let cloud = PointCloud::from_samples(Layout::Soa, scatter(90, 41, 50.0)).unwrap();
        let params = AidwParams { k: 7, ..AidwParams::default() };
        for q in scatter_queries(20, 43, 50.0) {
            let (_, engine_trace) = predict_aidw(&cloud, &q, &params).unwrap();
            let public_trace = crate::adaptive::adaptive_alpha(&cloud, &q, &params).unwrap();
            assert_eq!(engine_trace.r_obs.to_bits(), public_trace.r_obs.to_bits());
            assert_eq!(engine_trace.mu.to_bits(), public_trace.mu.to_bits());
            assert_eq!(engine_trace.alpha.to_bits(), public_trace.alpha.to_bits());
        }
    }

    #[test]
    fn aidw_coincident_query_returns_sample_value() {
        let mut samples = scatter(30, 47, 20.0);
        samples.push(Sample::new(4.0, 5.0, -3.25));
        let cloud = PointCloud::from_samples(Layout::Soa, samples).unwrap();
        let (v, _) =
            predict_aidw(&cloud, &QueryPoint::new(4.0, 5.0), &AidwParams::default()).unwrap();
        assert_eq!(v, -3.25);
    }

    #[test]
    fn degenerate_weight_range_falls_back_to_nearest() {
        // distances around 1e200 overflow the squared-distance weights;
        // the nearest sample's value is the defensible limit
        let cloud = PointCloud::from_samples(
            Layout::Soa,
            vec![Sample::new(1e200, 0.0, 2.0), Sample::new(-1e200, 0.0, 8.0)],
        )
        .unwrap();
        let v: f64 = predict_idw(&cloud, &QueryPoint::new(1e199, 0.0), 2.0, 1e-12).unwrap();
        assert_eq!(v, 2.0);
        assert!(v.is_finite());
    }

    #[test]
    fn plan_validation() {
        assert!(ExecPlan::sequential().validate().is_ok());
        assert!(ExecPlan::tiled(4, 256).validate().is_ok());
        assert!(ExecPlan::tiled(0, 256).validate().is_err());
        assert!(ExecPlan::tiled(1, 0).validate().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        type ScatterCase = (Vec<(f64, f64, f64)>, (f64, f64), f64);

        fn scatter_strategy() -> impl Strategy<Value = ScatterCase> {
            (
                proptest::collection::vec(
                    (0.0..100.0f64, 0.0..100.0f64, -50.0..50.0f64),
                    1..60,
                ),
                (0.0..100.0f64, 0.0..100.0f64),
                0.5..4.0f64,
            )
        }

        proptest! {
            #[test]
            fn prediction_bounded_by_value_range(
                (pts, (qx, qy), alpha) in scatter_strategy(),
            ) {
                let cloud = PointCloud::from_samples(
                    Layout::Soa,
                    pts.iter().map(|&(x, y, v)| Sample::new(x, y, v)).collect(),
                ).unwrap();
                let (lo, hi) = cloud.value_bounds().unwrap();
                let v = predict_idw(&cloud, &QueryPoint::new(qx, qy), alpha, 1e-12).unwrap();
                prop_assert!(v >= lo && v <= hi, "{v} outside [{lo}, {hi}]");
            }

            #[test]
            fn translation_invariance(
                (pts, (qx, qy), alpha) in scatter_strategy(),
                (tx, ty) in (-1000.0..1000.0f64, -1000.0..1000.0f64),
            ) {
                let cloud = PointCloud::from_samples(
                    Layout::Soa,
                    pts.iter().map(|&(x, y, v)| Sample::new(x, y, v)).collect(),
                ).unwrap();
                let moved = PointCloud::from_samples(
                    Layout::Soa,
                    pts.iter().map(|&(x, y, v)| Sample::new(x + tx, y + ty, v)).collect(),
                ).unwrap();
                let v0 = predict_idw(&cloud, &QueryPoint::new(qx, qy), alpha, 1e-12).unwrap();
                let v1 = predict_idw(&moved, &QueryPoint::new(qx + tx, qy + ty), alpha, 1e-12).unwrap();
                prop_assert!(
                    (v0 - v1).abs() <= 1e-9 * v0.abs().max(1.0),
                    "{v0} vs {v1} under translation ({tx}, {ty})"
                );
            }
        }
    }
}
