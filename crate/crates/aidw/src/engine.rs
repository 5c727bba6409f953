//! Batch execution over a query list.
//!
//! The sequential engine runs the naive slice kernel over the whole list
//! on the calling thread. The tiled-parallel engine splits the query list
//! into contiguous chunks, one per worker, and runs the cache-blocked
//! tiled kernel on each chunk in its own thread. Workers write disjoint
//! slices of the output and synchronize only at the final join, so output
//! is bit-identical for any worker count, and — because both kernels
//! accumulate per query in ascending sample order — bit-identical between
//! the two engines at equal precision.

use std::fmt;
use std::thread;

use aidw_core::interpolate::{run_slice, SliceMode};
use aidw_core::{
    AlphaTrace, EngineKind, Error as CoreError, ExecPlan, Method, PointCloud, PredictionResult,
    PreparedMethod, QueryPoint, Real,
};

/// A batch run failure: the underlying error plus the index of the first
/// failing query when the failure is query-specific.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchError {
    pub query_index: Option<usize>,
    pub source: CoreError,
}

impl BatchError {
    fn setup(source: CoreError) -> Self {
        Self { query_index: None, source }
    }
}

impl fmt::Display for BatchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.query_index {
            Some(i) => write!(f, "query {i}: {}", self.source),
            None => write!(f, "{}", self.source),
        }
    }
}

impl std::error::Error for BatchError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

/// Predicts one value per query point.
///
/// Preconditions are validated up front against the whole batch (non-empty
/// cloud, method parameters, `k` against the sample count, study area);
/// they fail before any prediction work starts. Per-query coordinates must
/// be finite, as produced by the readers and the generator.
///
/// `emit_traces` requests the adaptive pipeline trace for every query;
/// it is ignored for the fixed-exponent method.
pub fn interpolate_all<R: Real>(
    cloud: &PointCloud<R>,
    queries: &[QueryPoint<R>],
    method: &Method<R>,
    plan: &ExecPlan,
    emit_traces: bool,
) -> Result<PredictionResult<R>, BatchError> {
    plan.validate().map_err(BatchError::setup)?;
    if queries.is_empty() {
        return Ok(PredictionResult { values: Vec::new(), traces: None });
    }
    for (i, q) in queries.iter().enumerate() {
        if !(q.x.is_finite() && q.y.is_finite()) {
            return Err(BatchError { query_index: Some(i), source: CoreError::NonFinite { index: i } });
        }
    }
    let prepared = PreparedMethod::prepare(method, cloud).map_err(BatchError::setup)?;

    let n = queries.len();
    let mut values = vec![R::zero(); n];
    let want_traces = emit_traces && method.is_adaptive();
    let mut traces = if want_traces { vec![AlphaTrace::<R>::default(); n] } else { Vec::new() };

    match plan.engine {
        EngineKind::Sequential => {
            let trace_slice = want_traces.then_some(traces.as_mut_slice());
            run_slice(cloud, queries, &prepared, SliceMode::Naive, &mut values, trace_slice);
        }
        EngineKind::TiledParallel => {
            let mode = SliceMode::Tiled { tile_size: plan.tile_size };
            let workers = plan.workers.min(n);
            if workers <= 1 {
                let trace_slice = want_traces.then_some(traces.as_mut_slice());
                run_slice(cloud, queries, &prepared, mode, &mut values, trace_slice);
            } else {
                let chunk = n.div_ceil(workers);
                thread::scope(|scope| {
                    let mut q_rest = queries;
                    let mut v_rest = values.as_mut_slice();
                    let mut t_rest = want_traces.then_some(traces.as_mut_slice());
                    while !q_rest.is_empty() {
                        let take = chunk.min(q_rest.len());
                        let (q_chunk, q_tail) = q_rest.split_at(take);
                        let (v_chunk, v_tail) = v_rest.split_at_mut(take);
                        let t_chunk = match t_rest.take() {
                            Some(t) => {
                                let (head, tail) = t.split_at_mut(take);
                                t_rest = Some(tail);
                                Some(head)
                            }
                            None => None,
                        };
                        q_rest = q_tail;
                        v_rest = v_tail;
                        let prepared = &prepared;
                        scope.spawn(move || {
                            run_slice(cloud, q_chunk, prepared, mode, v_chunk, t_chunk);
                        });
                    }
                });
            }
        }
    }

    Ok(PredictionResult { values, traces: want_traces.then_some(traces) })
}
