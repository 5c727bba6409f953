//! Acceptance suite: one test per criterion, one pass/fail line each.
//!
//! Run with `cargo test -p aidw --test acceptance -- --nocapture` to see
//! the lines. Criteria share a lock so timing-sensitive runs are not
//! distorted by concurrent tests. The performance criterion asserts its
//! speedup only on machines with at least 4 cores; below that it still
//! exercises the full benchmark pipeline at a reduced size and reports the
//! measured ratio (set `AIDW_ACCEPTANCE_FULL=1` to force the full size).

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::sync::Mutex;

use aidw::bench::{aos_over_soa, report, run_bench, seq_over_tiled, BenchConfig};
use aidw::io::{generate, queries_from_cloud, DatasetSpec, ValueModel};
use aidw::rng::{derive_seed, Xoshiro256pp};
use aidw::selfcheck::brute_force_knn;
use aidw::{
    interpolate_all, AidwParams, EngineKind, ExecPlan, Layout, Method, PointCloud, Precision,
    QueryPoint, Sample,
};
use aidw_core::{
    decay_parameter, distance, expected_nn_distance, nearest_k_distances, nn_statistic,
    normalize_statistic, observed_nn_distance, predict_idw,
};

static LOCK: Mutex<()> = Mutex::new(());

fn criterion(num: u32, name: &str, body: impl FnOnce() -> String) {
    let guard = LOCK.lock().unwrap_or_else(|poisoned| poisoned.into_inner());
    let outcome = catch_unwind(AssertUnwindSafe(body));
    drop(guard);
    match outcome {
        Ok(detail) => println!("[PASS] criterion {num}: {name} — {detail}"),
        Err(panic) => {
            println!("[FAIL] criterion {num}: {name}");
            resume_unwind(panic);
        }
    }
}

fn seeded(count: usize, seed: u64) -> (PointCloud<f64>, Vec<QueryPoint<f64>>) {
    let data = generate(&DatasetSpec {
        count,
        extent: 100.0,
        seed: derive_seed(seed, 0),
        value_model: ValueModel::Uniform { lo: 0.0, hi: 100.0 },
    })
    .unwrap();
    let queries = queries_from_cloud(
        &generate(&DatasetSpec {
            count,
            extent: 100.0,
            seed: derive_seed(seed, 1),
            value_model: ValueModel::Uniform { lo: 0.0, hi: 100.0 },
        })
        .unwrap(),
    );
    (data, queries)
}

fn bits(values: &[f64]) -> Vec<u64> {
    values.iter().map(|v| v.to_bits()).collect()
}

#[test]
fn criterion_1_analytic_math_suite() {
    criterion(1, "analytic math suite", || {
        // planar distance
        assert_eq!(distance(&QueryPoint::new(0.0, 0.0), &Sample::new(3.0, 4.0, 0.0)), 5.0);
        assert_eq!(distance(&QueryPoint::new(1.0, 1.0), &Sample::new(1.0, 1.0, 0.0)), 0.0);
        assert_eq!(
            distance(&QueryPoint::new(0.0, 0.0), &Sample::new(1.0, 1.0, 0.0)),
            2.0f64.sqrt()
        );

        // expected nearest-neighbor distance
        assert_eq!(expected_nn_distance(100, 100.0).unwrap(), 0.5);
        assert_eq!(expected_nn_distance(4, 1.0).unwrap(), 0.25);

        // observed mean distance and the statistic
        assert_eq!(observed_nn_distance(&[1.0, 2.0, 3.0]).unwrap(), 2.0);
        assert_eq!(observed_nn_distance(&[5.0]).unwrap(), 5.0);
        assert_eq!(observed_nn_distance(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(nn_statistic(1.0, 2.0).unwrap(), 0.5);
        assert_eq!(nn_statistic(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(nn_statistic(1.5, 1.5).unwrap(), 1.0);

        // membership normalization at 0 / midpoint / clamps, exact
        assert_eq!(normalize_statistic(0.0, 0.0, 2.0).unwrap(), 0.0);
        assert_eq!(normalize_statistic(1.0, 0.0, 2.0).unwrap(), 0.5);
        assert_eq!(normalize_statistic(2.0, 0.0, 2.0).unwrap(), 1.0);
        assert_eq!(normalize_statistic(3.0, 0.0, 2.0).unwrap(), 1.0);

        // decay ramp examples, exact
        let levels = [1.0, 1.5, 2.0, 2.5, 3.0];
        assert_eq!(decay_parameter(0.05, &levels).unwrap(), 1.0);
        assert_eq!(decay_parameter(0.2, &levels).unwrap(), 1.25);
        assert_eq!(decay_parameter(0.3, &levels).unwrap(), 1.5);
        assert_eq!(decay_parameter(0.95, &levels).unwrap(), 3.0);

        // decay ramp continuity at every breakpoint, arbitrary levels
        let level_sets: [[f64; 5]; 4] = [
            levels,
            [3.0, 1.0, 4.0, 1.0, 5.0],
            [0.5, 9.0, 0.3, 7.0, 2.0],
            [6.25, 6.25, 0.125, 8.5, 0.01],
        ];
        let mut worst: f64 = 0.0;
        for set in &level_sets {
            for b in [0.1, 0.3, 0.5, 0.7, 0.9] {
                let left = decay_parameter(b - 1e-15, set).unwrap();
                let right = decay_parameter(b + 1e-15, set).unwrap();
                worst = worst.max((left - right).abs());
            }
        }
        assert!(worst <= 1e-12, "breakpoint jump {worst}");

        // equal levels collapse to that constant, exactly, for any mu
        for constant in [0.1, 2.0, 3.7, 123.456] {
            for i in 0..=100 {
                let mu = i as f64 / 100.0;
                assert_eq!(decay_parameter(mu, &[constant; 5]).unwrap(), constant);
            }
        }

        format!("all exact; worst breakpoint jump {worst:.2e}")
    });
}

#[test]
fn criterion_2_knn_oracle_equivalence() {
    criterion(2, "kNN oracle equivalence", || {
        let mut rng = Xoshiro256pp::from_seed(20260808);
        let mut cases = 0;
        for config_idx in 0..100u64 {
            let k = [1usize, 5, 10, 50][(config_idx % 4) as usize];
            let m = k + (rng.next_u64() as usize) % (2000 - k + 1);
            let cloud = generate(&DatasetSpec {
                count: m,
                extent: 100.0,
                seed: rng.next_u64(),
                value_model: ValueModel::Uniform { lo: 0.0, hi: 100.0 },
            })
            .unwrap();
            let s0 = cloud.sample_at(0);
            let queries = [
                QueryPoint::new(rng.next_f64() * 100.0, rng.next_f64() * 100.0),
                QueryPoint::new(s0.x, s0.y), // coincident with a sample
            ];
            for query in &queries {
                let got = nearest_k_distances(&cloud, query, k).unwrap();
                let want = brute_force_knn(&cloud, query, k);
                assert_eq!(got, want, "m = {m}, k = {k}");
                cases += 1;
            }
        }
        format!("{cases} seeded configurations, sorted multisets exactly equal")
    });
}

#[test]
fn criterion_3_aidw_idw_degeneracy() {
    criterion(3, "adaptive/fixed degeneracy with constant levels", || {
        let (cloud, queries) = seeded(1024, 3);
        let params = AidwParams { alpha_levels: [2.0; 5], ..AidwParams::default() };
        let idw = Method::Idw { alpha: 2.0, zero_dist_tol: params.zero_dist_tol };
        let aidw = Method::Aidw(params);
        let mut checked = 0;
        for plan in [ExecPlan::sequential(), ExecPlan::tiled(4, 256)] {
            let a = interpolate_all(&cloud, &queries, &aidw, &plan, false).unwrap();
            let b = interpolate_all(&cloud, &queries, &idw, &plan, false).unwrap();
            assert_eq!(bits(&a.values), bits(&b.values), "engine {:?}", plan.engine);
            checked += a.values.len();
        }
        format!("{checked} predictions bit-equal across both engines")
    });
}

#[test]
fn criterion_4_determinism_matrix() {
    criterion(4, "engine/worker/layout determinism matrix", || {
        let (cloud, queries) = seeded(1024, 4);
        let method = Method::Aidw(AidwParams::default());
        let reference =
            interpolate_all(&cloud, &queries, &method, &ExecPlan::sequential(), false).unwrap();
        let reference_bits = bits(&reference.values);
        let mut cells = 1;
        for layout in [Layout::Soa, Layout::Aos] {
            let cloud = cloud.convert_layout(layout);
            let seq =
                interpolate_all(&cloud, &queries, &method, &ExecPlan::sequential(), false).unwrap();
            assert_eq!(bits(&seq.values), reference_bits, "sequential, {layout:?}");
            cells += 1;
            for workers in [1, 2, 4, 8] {
                let tiled =
                    interpolate_all(&cloud, &queries, &method, &ExecPlan::tiled(workers, 256), false)
                        .unwrap();
                assert_eq!(bits(&tiled.values), reference_bits, "{workers} workers, {layout:?}");
                cells += 1;
            }
        }

        // same matrix at single precision
        let cloud32 = cloud.to_single().unwrap();
        let queries32: Vec<QueryPoint<f32>> =
            queries.iter().map(|q| QueryPoint::new(q.x as f32, q.y as f32)).collect();
        let method32 = Method::Aidw(AidwParams::<f32>::default());
        let ref32 =
            interpolate_all(&cloud32, &queries32, &method32, &ExecPlan::sequential(), false)
                .unwrap();
        let ref32_bits: Vec<u32> = ref32.values.iter().map(|v| v.to_bits()).collect();
        for layout in [Layout::Soa, Layout::Aos] {
            let cloud32 = cloud32.convert_layout(layout);
            for workers in [1, 2, 4, 8] {
                let tiled =
                    interpolate_all(&cloud32, &queries32, &method32, &ExecPlan::tiled(workers, 256), false)
                        .unwrap();
                let got: Vec<u32> = tiled.values.iter().map(|v| v.to_bits()).collect();
                assert_eq!(got, ref32_bits, "single precision, {workers} workers, {layout:?}");
                cells += 1;
            }
        }
        format!("{cells} engine/worker/layout cells bit-identical per precision")
    });
}

#[test]
fn criterion_5_convexity_bound() {
    criterion(5, "convex-combination bound and coincidence short-circuit", || {
        let mut predictions = 0;
        for i in 0..10u64 {
            let count = 256 + 128 * (i as usize % 4);
            let (cloud, queries) = seeded(count, 50 + i);
            let (lo, hi) = cloud.value_bounds().unwrap();
            let result = interpolate_all(
                &cloud,
                &queries,
                &Method::Aidw(AidwParams::default()),
                &ExecPlan::tiled(2, 128),
                false,
            )
            .unwrap();
            for &v in &result.values {
                assert!(v >= lo && v <= hi, "dataset {i}: {v} outside [{lo}, {hi}]");
            }
            predictions += result.values.len();

            // a query placed exactly on a sample returns that value
            let s = cloud.sample_at(cloud.len() / 2);
            let got = predict_idw(&cloud, &QueryPoint::new(s.x, s.y), 2.0, 1e-12).unwrap();
            assert_eq!(got, s.value);
            let (got, _) =
                aidw_core::predict_aidw(&cloud, &QueryPoint::new(s.x, s.y), &AidwParams::default())
                    .unwrap();
            assert_eq!(got, s.value);
            predictions += 2;
        }
        format!("{predictions} predictions inside the sample value range")
    });
}

#[test]
fn criterion_6_precision_gap() {
    criterion(6, "single vs double precision gap", || {
        let (cloud, queries) = seeded(1024, 6);
        let double = interpolate_all(
            &cloud,
            &queries,
            &Method::Aidw(AidwParams::default()),
            &ExecPlan::sequential(),
            false,
        )
        .unwrap();

        let cloud32 = cloud.to_single().unwrap();
        let queries32: Vec<QueryPoint<f32>> =
            queries.iter().map(|q| QueryPoint::new(q.x as f32, q.y as f32)).collect();
        let single = interpolate_all(
            &cloud32,
            &queries32,
            &Method::Aidw(AidwParams::<f32>::default()),
            &ExecPlan::sequential(),
            false,
        )
        .unwrap();

        let mut worst: f64 = 0.0;
        for (&v32, &v64) in single.values.iter().zip(double.values.iter()) {
            let rel = (f64::from(v32) - v64).abs() / v64.abs();
            worst = worst.max(rel);
            assert!(rel <= 1e-3, "relative gap {rel} at value {v64}");
        }
        format!("worst relative gap {worst:.2e} over {} predictions", double.values.len())
    });
}

#[test]
fn criterion_7_desk_scale_performance() {
    criterion(7, "tiled-parallel speedup over sequential", || {
        let cores = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
        let full = cores >= 4 || std::env::var_os("AIDW_ACCEPTANCE_FULL").is_some();
        let size = if full { 50 * 1024 } else { 10 * 1024 };

        let config = BenchConfig {
            sizes: vec![size],
            engines: vec![EngineKind::Sequential, EngineKind::TiledParallel],
            layouts: vec![Layout::Soa],
            precisions: vec![Precision::Double],
            reps: 3,
            seed: 20260808,
            workers: cores,
            tile_size: 256,
        };
        let records = run_bench(&config).unwrap();
        for r in &records {
            assert!(r.error.is_none(), "cell failed: {:?}", r.error);
        }
        print!("{}", report(&records).unwrap());

        let seq = records.iter().find(|r| r.engine == EngineKind::Sequential).unwrap();
        let ratio = seq_over_tiled(&records, seq).unwrap();
        if cores >= 4 {
            assert!(
                ratio >= 2.0,
                "tiled speedup {ratio:.2} below 2.0 with {cores} cores at {size} points"
            );
            format!("seq/tiled = {ratio:.2} with {cores} workers at {size} points (gate passed)")
        } else {
            format!(
                "speedup assertion skipped ({cores} cores < 4); measured seq/tiled = {ratio:.2} \
                 at {size} points, output-equality gate passed"
            )
        }
    });
}

#[test]
fn criterion_8_report_ratio_columns() {
    criterion(8, "benchmark report emits layout and engine ratios", || {
        let config = BenchConfig {
            sizes: vec![1024],
            engines: vec![EngineKind::Sequential, EngineKind::TiledParallel],
            layouts: vec![Layout::Soa, Layout::Aos],
            precisions: vec![Precision::Double],
            reps: 3,
            seed: 8,
            workers: 2,
            tile_size: 256,
        };
        let records = run_bench(&config).unwrap();
        let text = report(&records).unwrap();
        assert!(text.contains("aos/soa") && text.contains("seq/tiled"));
        let mut layout_ratio = None;
        let mut engine_ratio = None;
        for r in &records {
            assert!(r.error.is_none());
            layout_ratio = aos_over_soa(&records, r);
            engine_ratio = seq_over_tiled(&records, r);
            assert!(layout_ratio.is_some(), "layout ratio missing for {r:?}");
            assert!(engine_ratio.is_some(), "engine ratio missing for {r:?}");
        }
        format!(
            "ratios reported, not asserted: aos/soa = {:.3}, seq/tiled = {:.3}",
            layout_ratio.unwrap(),
            engine_ratio.unwrap()
        )
    });
}
