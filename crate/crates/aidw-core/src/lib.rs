//! Adaptive inverse distance weighting (AIDW) interpolation kernels.
//!
//! Standard IDW predicts the value at an unknown location as a weighted
//! average of known sample values, with weights `1/d^alpha` for a fixed
//! distance-decay exponent `alpha`. AIDW instead derives `alpha` per query
//! point from the local point pattern: the mean distance to the k nearest
//! samples is compared against the distance expected for a random pattern,
//! the resulting statistic is squashed into `[0, 1]` by a cosine membership
//! function, and that value is mapped through a piecewise-linear ramp over
//! five configurable decay levels.
//!
//! The crate provides:
//!
//! - [`cloud`]: point clouds in SoA and AoS memory layouts, plus planar
//!   geometry helpers,
//! - [`knn`]: a bounded k-nearest-distance buffer designed for brute-force
//!   per-query scans (no spatial index),
//! - [`adaptive`]: the per-query decay-exponent pipeline,
//! - [`interpolate`]: single-query predictors and the batch slice kernels
//!   (a naive full-scan loop and a cache-blocked tiled loop) that execution
//!   engines are built from.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`) and deterministic:
//! for a fixed precision, the naive and tiled kernels accumulate in the
//! same order and produce bit-identical results regardless of tile size,
//! and results are independent of the storage layout.
//!
//! The crate is `no_std`-compatible (requires `alloc`); disable the default
//! `std` feature to use the `libm` math backend.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod adaptive;
pub mod cloud;
pub mod error;
pub mod interpolate;
pub mod knn;
pub mod params;
mod real;

pub use adaptive::{
    adaptive_alpha, decay_parameter, expected_nn_distance, nn_statistic, normalize_statistic,
    observed_nn_distance, AlphaTrace,
};
pub use cloud::{distance, Layout, LayoutView, PointCloud, QueryPoint, Sample};
pub use error::{Error, Result};
pub use interpolate::{
    predict_aidw, predict_idw, run_slice, EngineKind, ExecPlan, Method, PredictionResult,
    PreparedMethod, SliceMode, DEFAULT_TILE_SIZE,
};
pub use knn::{init_buffer, nearest_k_distances, NeighborBuffer};
pub use params::{AidwParams, AreaSpec, Precision};
pub use real::Real;
