//! Benchmark harness: engine x layout x precision x size timing grid.
//!
//! Every cell interpolates the same seeded dataset pair (matched data and
//! query sets of equal count, derived from the base seed) with adaptive
//! IDW. Before any timing is reported, cell outputs at the same size and
//! precision are verified bit-equal against the first cell of that group;
//! a mismatching or failing cell is recorded as failed and the rest of the
//! grid proceeds. Timings cover the interpolation call only — dataset
//! generation and layout conversion happen outside the clock.
//!
//! Reported times are the median of at least three repetitions. Speedups
//! are relative to the sequential double-precision SoA run of the same
//! size, timed out of band when that cell is not part of the grid.

use std::fmt::Write as _;
use std::time::Instant;

use aidw_core::{
    AidwParams, EngineKind, ExecPlan, Layout, Method, PointCloud, Precision, QueryPoint, Real,
};

use crate::engine::interpolate_all;
use crate::io::{format_count, generate, queries_from_cloud, DatasetSpec, ValueModel};
use crate::rng::derive_seed;

/// Grid definition for one benchmark run.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Point counts; data and query sets both have this many entries.
    pub sizes: Vec<usize>,
    pub engines: Vec<EngineKind>,
    pub layouts: Vec<Layout>,
    pub precisions: Vec<Precision>,
    /// Repetitions per cell; the median is reported. At least 3.
    pub reps: usize,
    pub seed: u64,
    /// Worker threads for the tiled engine.
    pub workers: usize,
    pub tile_size: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![10 * 1024, 50 * 1024, 100 * 1024],
            engines: vec![EngineKind::Sequential, EngineKind::TiledParallel],
            layouts: vec![Layout::Soa, Layout::Aos],
            precisions: vec![Precision::Single, Precision::Double],
            reps: 3,
            seed: 1,
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            tile_size: aidw_core::DEFAULT_TILE_SIZE,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.sizes.is_empty()
            || self.engines.is_empty()
            || self.layouts.is_empty()
            || self.precisions.is_empty()
        {
            return Err(BenchError::InvalidConfig("empty grid dimension"));
        }
        if self.reps < 3 {
            return Err(BenchError::InvalidConfig("at least 3 repetitions are required"));
        }
        if self.workers < 1 || self.tile_size < 1 {
            return Err(BenchError::InvalidConfig("workers and tile_size must be at least 1"));
        }
        Ok(())
    }
}

/// One timed grid cell.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub size: usize,
    pub engine: EngineKind,
    pub layout: Layout,
    pub precision: Precision,
    pub reps: usize,
    /// Median wall time in milliseconds; 0 when the cell failed.
    pub wall_ms: f64,
    /// Sequential-double reference time divided by this cell's time.
    pub speedup_vs_reference: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchError {
    InvalidConfig(&'static str),
    EmptyReport,
}

impl std::fmt::Display for BenchError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BenchError::InvalidConfig(reason) => write!(f, "invalid bench config: {reason}"),
            BenchError::EmptyReport => write!(f, "no benchmark records to report"),
        }
    }
}

impl std::error::Error for BenchError {}

struct CellOutcome {
    times_ms: Vec<f64>,
    bits: Vec<u64>,
}

fn median(times: &mut [f64]) -> f64 {
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = times.len();
    if n % 2 == 1 {
        times[n / 2]
    } else {
        0.5 * (times[n / 2 - 1] + times[n / 2])
    }
}

fn time_cell<R: Real>(
    cloud: &PointCloud<R>,
    queries: &[QueryPoint<R>],
    plan: &ExecPlan,
    reps: usize,
) -> Result<CellOutcome, String> {
    let method = Method::Aidw(AidwParams::<R>::default());
    let mut times_ms = Vec::with_capacity(reps);
    let mut bits = Vec::new();
    for _ in 0..reps {
        let start = Instant::now();
        let result = interpolate_all(cloud, queries, &method, plan, false)
            .map_err(|e| e.to_string())?;
        times_ms.push(start.elapsed().as_secs_f64() * 1e3);
        bits = result.values.iter().map(|v| v.to_bits_u64()).collect();
    }
    Ok(CellOutcome { times_ms, bits })
}

fn plan_for(config: &BenchConfig, engine: EngineKind) -> ExecPlan {
    match engine {
        EngineKind::Sequential => ExecPlan::sequential(),
        EngineKind::TiledParallel => ExecPlan::tiled(config.workers, config.tile_size),
    }
}

/// Runs the full grid and returns one record per cell, in
/// size-major, precision-, engine-, layout-minor order.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRecord>, BenchError> {
    config.validate()?;
    let mut records = Vec::new();

    for (size_idx, &size) in config.sizes.iter().enumerate() {
        let data64 = generate(&DatasetSpec {
            count: size,
            extent: 100.0,
            seed: derive_seed(config.seed, 2 * size_idx as u64),
            value_model: ValueModel::Uniform { lo: 0.0, hi: 100.0 },
        })
        .expect("generator output is finite");
        let query_cloud = generate(&DatasetSpec {
            count: size,
            extent: 100.0,
            seed: derive_seed(config.seed, 2 * size_idx as u64 + 1),
            value_model: ValueModel::Uniform { lo: 0.0, hi: 100.0 },
        })
        .expect("generator output is finite");
        let queries64 = queries_from_cloud(&query_cloud);

        let size_start = records.len();
        for &precision in &config.precisions {
            // reference output of the first successful cell in this
            // (size, precision) group; the correctness gate for the rest
            let mut reference_bits: Option<Vec<u64>> = None;

            match precision {
                Precision::Double => {
                    for &engine in &config.engines {
                        let plan = plan_for(config, engine);
                        for &layout in &config.layouts {
                            let cloud = data64.convert_layout(layout);
                            let outcome = time_cell(&cloud, &queries64, &plan, config.reps);
                            records.push(gated_record(
                                outcome,
                                &mut reference_bits,
                                size,
                                engine,
                                layout,
                                precision,
                                config.reps,
                            ));
                        }
                    }
                }
                Precision::Single => {
                    let data32 = data64.to_single().expect("extent-bounded values fit f32");
                    let queries32: Vec<QueryPoint<f32>> = queries64
                        .iter()
                        .map(|q| QueryPoint::new(q.x as f32, q.y as f32))
                        .collect();
                    for &engine in &config.engines {
                        let plan = plan_for(config, engine);
                        for &layout in &config.layouts {
                            let cloud = data32.convert_layout(layout);
                            let outcome = time_cell(&cloud, &queries32, &plan, config.reps);
                            records.push(gated_record(
                                outcome,
                                &mut reference_bits,
                                size,
                                engine,
                                layout,
                                precision,
                                config.reps,
                            ));
                        }
                    }
                }
            }
        }

        // speedups against the sequential double-precision reference
        let reference_ms = records[size_start..]
            .iter()
            .find(|r| {
                r.engine == EngineKind::Sequential
                    && r.precision == Precision::Double
                    && r.error.is_none()
            })
            .map(|r| r.wall_ms)
            .or_else(|| {
                // reference cell not part of the grid: time it out of band
                time_cell(&data64, &queries64, &ExecPlan::sequential(), config.reps)
                    .ok()
                    .map(|mut o| median(&mut o.times_ms))
            });
        if let Some(reference_ms) = reference_ms {
            for r in &mut records[size_start..] {
                if r.error.is_none() {
                    r.speedup_vs_reference = Some(reference_ms / r.wall_ms);
                }
            }
        }
    }

    Ok(records)
}

#[allow(clippy::too_many_arguments)]
fn gated_record(
    outcome: Result<CellOutcome, String>,
    reference_bits: &mut Option<Vec<u64>>,
    size: usize,
    engine: EngineKind,
    layout: Layout,
    precision: Precision,
    reps: usize,
) -> BenchRecord {
    let mut record = BenchRecord {
        size,
        engine,
        layout,
        precision,
        reps,
        wall_ms: 0.0,
        speedup_vs_reference: None,
        error: None,
    };
    match outcome {
        Err(message) => record.error = Some(message),
        Ok(mut outcome) => match reference_bits {
            None => {
                *reference_bits = Some(outcome.bits);
                record.wall_ms = median(&mut outcome.times_ms);
            }
            Some(reference) => {
                if &outcome.bits == reference {
                    record.wall_ms = median(&mut outcome.times_ms);
                } else {
                    record.error =
                        Some("output mismatch vs first cell at this size/precision".into());
                }
            }
        },
    }
    record
}

fn find(
    records: &[BenchRecord],
    size: usize,
    engine: EngineKind,
    layout: Layout,
    precision: Precision,
) -> Option<&BenchRecord> {
    records.iter().find(|r| {
        r.size == size
            && r.engine == engine
            && r.layout == layout
            && r.precision == precision
            && r.error.is_none()
    })
}

/// Layout ratio for a row: AoS time over SoA time at the same size,
/// engine, and precision (above 1 means SoA is faster).
pub fn aos_over_soa(records: &[BenchRecord], r: &BenchRecord) -> Option<f64> {
    let soa = find(records, r.size, r.engine, Layout::Soa, r.precision)?;
    let aos = find(records, r.size, r.engine, Layout::Aos, r.precision)?;
    Some(aos.wall_ms / soa.wall_ms)
}

/// Engine ratio for a row: sequential time over tiled time at the same
/// size, layout, and precision (above 1 means the tiled engine is faster).
pub fn seq_over_tiled(records: &[BenchRecord], r: &BenchRecord) -> Option<f64> {
    let seq = find(records, r.size, EngineKind::Sequential, r.layout, r.precision)?;
    let tiled = find(records, r.size, EngineKind::TiledParallel, r.layout, r.precision)?;
    Some(seq.wall_ms / tiled.wall_ms)
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.3}"),
        None => "-".into(),
    }
}

/// Renders the fixed-width timing table, including the layout and engine
/// ratio columns.
pub fn report(records: &[BenchRecord]) -> Result<String, BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyReport);
    }
    let mut out = String::new();
    writeln!(
        out,
        "{:<8} {:<6} {:<7} {:<9} {:>14} {:>9} {:>12} {:>12}",
        "size", "engine", "layout", "precision", "wall_ms", "speedup", "aos/soa", "seq/tiled"
    )
    .unwrap();
    for r in records {
        match &r.error {
            Some(message) => {
                writeln!(
                    out,
                    "{:<8} {:<6} {:<7} {:<9} FAILED: {}",
                    format_count(r.size),
                    r.engine.as_str(),
                    r.layout.as_str(),
                    r.precision.as_str(),
                    message
                )
                .unwrap();
            }
            None => {
                writeln!(
                    out,
                    "{:<8} {:<6} {:<7} {:<9} {:>14.3} {:>9} {:>12} {:>12}",
                    format_count(r.size),
                    r.engine.as_str(),
                    r.layout.as_str(),
                    r.precision.as_str(),
                    r.wall_ms,
                    fmt_opt(r.speedup_vs_reference),
                    fmt_opt(aos_over_soa(records, r)),
                    fmt_opt(seq_over_tiled(records, r)),
                )
                .unwrap();
            }
        }
    }
    Ok(out)
}

/// CSV form of the report, one line per record, same derived columns.
pub fn records_to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(
        "size,engine,layout,precision,reps,wall_ms,speedup_vs_reference,aos_soa_ratio,seq_tiled_ratio,error\n",
    );
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.size,
            r.engine.as_str(),
            r.layout.as_str(),
            r.precision.as_str(),
            r.reps,
            if r.error.is_none() { format!("{:.6}", r.wall_ms) } else { String::new() },
            fmt_opt(r.speedup_vs_reference),
            fmt_opt(aos_over_soa(records, r)),
            fmt_opt(seq_over_tiled(records, r)),
            r.error.as_deref().unwrap_or(""),
        )
        .unwrap();
    }
    out
}
