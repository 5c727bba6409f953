//! Bounded k-nearest-distance search via a sorted insertion buffer.
//!
//! Designed for the brute-force per-query scan the prediction engines use:
//! no spatial index, just a fixed-capacity ascending array of the k
//! smallest distances seen so far. The first k candidates are collected
//! and kept sorted; each later candidate is compared against the current
//! kth distance, and if strictly smaller replaces it and is bubbled toward
//! the front by neighboring swaps until ascending order is restored.
//!
//! Candidates equal to the kth distance are rejected (strict `<`), which
//! makes the surviving distance multiset deterministic under any candidate
//! order; only which of several tied samples survives can vary, never the
//! distances themselves.

use alloc::vec::Vec;

use crate::cloud::{distance, PointCloud, QueryPoint};
use crate::error::{Error, Result};
use crate::real::Real;

/// Fixed-capacity ascending buffer of the k smallest distances seen so far.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborBuffer<R> {
    dists: Vec<R>,
    capacity: usize,
}

impl<R: Real> NeighborBuffer<R> {
    /// Empty buffer that will retain the `k` smallest candidates.
    pub(crate) fn new(k: usize) -> Self {
        Self { dists: Vec::with_capacity(k), capacity: k }
    }

    /// Empties the buffer for reuse on the next query.
    pub(crate) fn reset(&mut self) {
        self.dists.clear();
    }

    /// Offers a candidate. Below capacity the candidate is always admitted;
    /// at capacity it replaces the kth entry only if strictly smaller.
    /// Ascending order is restored by bubbling toward the front.
    ///
    /// Callers guarantee capacity >= 1; engine hot loops rely on this
    /// having no extra branch.
    #[inline]
    pub(crate) fn push(&mut self, cand: R) {
        debug_assert!(self.capacity >= 1);
        if self.dists.len() < self.capacity {
            self.dists.push(cand);
        } else {
            let last = self.dists.len() - 1;
            if cand < self.dists[last] {
                self.dists[last] = cand;
            } else {
                return;
            }
        }
        let mut i = self.dists.len() - 1;
        while i > 0 && self.dists[i] < self.dists[i - 1] {
            self.dists.swap(i, i - 1);
            i -= 1;
        }
    }

    /// Offers a candidate to a full buffer: no-op if `dist` is not strictly
    /// smaller than the kth distance, otherwise replace-and-bubble.
    #[inline]
    pub fn insert_candidate(&mut self, dist: R) {
        if self.capacity == 0 {
            return;
        }
        debug_assert!(self.is_full(), "insert_candidate operates on a full buffer");
        self.push(dist);
    }

    /// Current contents, sorted ascending.
    pub fn distances(&self) -> &[R] {
        &self.dists
    }

    /// The current kth (largest retained) distance. Panics on an empty
    /// buffer.
    pub fn kth(&self) -> R {
        self.dists[self.dists.len() - 1]
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.dists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dists.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dists.len() == self.capacity
    }

    pub fn into_distances(self) -> Vec<R> {
        self.dists
    }
}

/// Builds a buffer from the distances between `query` and the first `k`
/// samples of the cloud, sorted ascending.
pub fn init_buffer<R: Real>(
    cloud: &PointCloud<R>,
    query: &QueryPoint<R>,
    k: usize,
) -> Result<NeighborBuffer<R>> {
    if cloud.len() < k {
        return Err(Error::InsufficientData { have: cloud.len(), need: k });
    }
    let mut buffer = NeighborBuffer::new(k);
    for i in 0..k {
        buffer.push(distance(query, &cloud.sample_at(i)));
    }
    Ok(buffer)
}

/// The k smallest query-to-sample distances, sorted ascending.
///
/// Initializes the buffer over the first k samples, then offers each
/// remaining sample in index order. Equals the first k entries of the
/// fully sorted distance list as a multiset.
pub fn nearest_k_distances<R: Real>(
    cloud: &PointCloud<R>,
    query: &QueryPoint<R>,
    k: usize,
) -> Result<Vec<R>> {
    let mut buffer = init_buffer(cloud, query, k)?;
    for i in k..cloud.len() {
        buffer.insert_candidate(distance(query, &cloud.sample_at(i)));
    }
    Ok(buffer.into_distances())
}
