//! Independent oracles and runnable consistency suites.
//!
//! The oracles here deliberately avoid the engine code paths: the kNN
//! oracle sorts the full distance list instead of maintaining a bounded
//! buffer, and the IDW oracle evaluates the weighted average directly on
//! true distances with `powf`. The `selfcheck` CLI subcommand runs these
//! suites against the engines and exits nonzero on any disagreement.

use aidw_core::{
    distance, AidwParams, ExecPlan, Layout, Method, PointCloud, QueryPoint, Real,
};

use crate::engine::interpolate_all;
use crate::io::{generate, queries_from_cloud, DatasetSpec, ValueModel};
use crate::rng::{derive_seed, Xoshiro256pp};

/// Brute-force kNN oracle: all m distances, fully sorted, first k.
pub fn brute_force_knn<R: Real>(cloud: &PointCloud<R>, query: &QueryPoint<R>, k: usize) -> Vec<R> {
    let mut all: Vec<R> = cloud.iter().map(|s| distance(query, &s)).collect();
    all.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    all.truncate(k);
    all
}

/// Straight-line IDW oracle: direct double-precision evaluation of the
/// weighted average over all samples, independent of the engine kernels.
pub fn straight_line_idw(
    cloud: &PointCloud<f64>,
    query: &QueryPoint<f64>,
    alpha: f64,
    zero_dist_tol: f64,
) -> f64 {
    let mut nearest_in_tol: Option<(f64, f64)> = None;
    let mut wsum = 0.0;
    let mut wzsum = 0.0;
    for s in cloud.iter() {
        let d = ((query.x - s.x).powi(2) + (query.y - s.y).powi(2)).sqrt();
        if d < zero_dist_tol {
            match nearest_in_tol {
                Some((bd, _)) if bd <= d => {}
                _ => nearest_in_tol = Some((d, s.value)),
            }
            continue;
        }
        let w = 1.0 / d.powf(alpha);
        wsum += w;
        wzsum += w * s.value;
    }
    match nearest_in_tol {
        Some((_, v)) => v,
        None => wzsum / wsum,
    }
}

/// Outcome of one selfcheck suite.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn report(name: &'static str, failures: usize, cases: usize) -> CheckReport {
    CheckReport {
        name,
        passed: failures == 0,
        detail: if failures == 0 {
            format!("{cases} cases")
        } else {
            format!("{failures} of {cases} cases failed")
        },
    }
}

fn dataset(count: usize, seed: u64) -> (PointCloud<f64>, Vec<QueryPoint<f64>>) {
    let data = generate(&DatasetSpec {
        count,
        extent: 100.0,
        seed: derive_seed(seed, 0),
        value_model: ValueModel::Uniform { lo: 0.0, hi: 100.0 },
    })
    .expect("generator output is finite");
    let queries = queries_from_cloud(
        &generate(&DatasetSpec {
            count,
            extent: 100.0,
            seed: derive_seed(seed, 1),
            value_model: ValueModel::Uniform { lo: 0.0, hi: 100.0 },
        })
        .expect("generator output is finite"),
    );
    (data, queries)
}

fn knn_oracle_suite(seed: u64) -> CheckReport {
    let mut rng = Xoshiro256pp::from_seed(derive_seed(seed, 100));
    let mut failures = 0;
    let mut cases = 0;
    for _ in 0..20 {
        let k = [1usize, 5, 10][(rng.next_u64() % 3) as usize];
        let m = k + (rng.next_u64() % 400) as usize;
        let (cloud, queries) = dataset(m, rng.next_u64());
        for query in queries.iter().take(5) {
            cases += 1;
            let got = aidw_core::nearest_k_distances(&cloud, query, k).expect("m >= k");
            if got != brute_force_knn(&cloud, query, k) {
                failures += 1;
            }
        }
    }
    report("knn-oracle", failures, cases)
}

fn idw_oracle_suite(seed: u64) -> CheckReport {
    let (cloud, queries) = dataset(200, derive_seed(seed, 200));
    let mut failures = 0;
    let mut cases = 0;
    for alpha in [1.0, 2.0, 2.5] {
        let result = interpolate_all(
            &cloud,
            &queries,
            &Method::idw(alpha),
            &ExecPlan::sequential(),
            false,
        )
        .expect("valid batch");
        for (q, &got) in queries.iter().zip(result.values.iter()) {
            cases += 1;
            let want = straight_line_idw(&cloud, q, alpha, 1e-12);
            if (got - want).abs() > 1e-12 * want.abs().max(1.0) {
                failures += 1;
            }
        }
    }
    report("idw-oracle", failures, cases)
}

fn degeneracy_suite(seed: u64) -> CheckReport {
    let (cloud, queries) = dataset(256, derive_seed(seed, 300));
    let params = AidwParams { alpha_levels: [2.0; 5], ..AidwParams::default() };
    let tol = params.zero_dist_tol;
    let mut failures = 0;
    let mut cases = 0;
    for plan in [ExecPlan::sequential(), ExecPlan::tiled(4, 64)] {
        let adaptive =
            interpolate_all(&cloud, &queries, &Method::Aidw(params.clone()), &plan, false)
                .expect("valid batch");
        let fixed = interpolate_all(
            &cloud,
            &queries,
            &Method::Idw { alpha: 2.0, zero_dist_tol: tol },
            &plan,
            false,
        )
        .expect("valid batch");
        for (a, b) in adaptive.values.iter().zip(fixed.values.iter()) {
            cases += 1;
            if a.to_bits() != b.to_bits() {
                failures += 1;
            }
        }
    }
    report("aidw-degeneracy", failures, cases)
}

fn determinism_suite(seed: u64) -> CheckReport {
    let (cloud, queries) = dataset(256, derive_seed(seed, 400));
    let method = Method::Aidw(AidwParams::default());
    let reference = interpolate_all(&cloud, &queries, &method, &ExecPlan::sequential(), false)
        .expect("valid batch");
    let reference_bits: Vec<u64> = reference.values.iter().map(|v| v.to_bits()).collect();
    let mut failures = 0;
    let mut cases = 0;
    for layout in [Layout::Soa, Layout::Aos] {
        let cloud = cloud.convert_layout(layout);
        for workers in [1, 2, 4] {
            let got = interpolate_all(&cloud, &queries, &method, &ExecPlan::tiled(workers, 256), false)
                .expect("valid batch");
            cases += 1;
            let bits: Vec<u64> = got.values.iter().map(|v| v.to_bits()).collect();
            if bits != reference_bits {
                failures += 1;
            }
        }
    }
    report("determinism", failures, cases)
}

/// Runs all suites with datasets derived from `seed`.
pub fn run_selfcheck(seed: u64) -> Vec<CheckReport> {
    vec![
        knn_oracle_suite(seed),
        idw_oracle_suite(seed),
        degeneracy_suite(seed),
        determinism_suite(seed),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_suites_pass() {
        for r in run_selfcheck(7) {
            assert!(r.passed, "{} failed: {}", r.name, r.detail);
        }
    }

    #[test]
    fn suites_run_for_other_seeds() {
        for r in run_selfcheck(123456789) {
            assert!(r.passed, "{} failed: {}", r.name, r.detail);
        }
    }
}
