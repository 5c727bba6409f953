//! Execution engines, file formats, dataset generation, benchmarking, and
//! self-checks for the adaptive inverse distance weighting kernels in
//! [`aidw_core`].
//!
//! The split follows the runtime boundary: everything in `aidw-core` is
//! pure computation (and `no_std`-compatible), while this crate owns
//! threads, the filesystem, and wall-clock timing:
//!
//! - [`engine`]: batch interpolation over a query list, sequential or
//!   tiled-parallel with deterministic, bit-reproducible output,
//! - [`io`]: CSV formats and the seeded synthetic dataset generator,
//! - [`rng`]: the fixed, documented PRNG behind the generator,
//! - [`mod@bench`]: the engine x layout x precision x size timing grid,
//! - [`selfcheck`]: independent oracles (brute-force kNN, straight-line
//!   IDW) wired into runnable consistency suites.

pub mod bench;
pub mod engine;
pub mod io;
pub mod rng;
pub mod selfcheck;

pub use aidw_core as core;
pub use aidw_core::{
    AidwParams, AlphaTrace, AreaSpec, EngineKind, Error as CoreError, ExecPlan, Layout, Method,
    PointCloud, Precision, PredictionResult, QueryPoint, Real, Sample, DEFAULT_TILE_SIZE,
};
pub use engine::{interpolate_all, BatchError};
pub use io::{DatasetSpec, IoError, ValueModel};
