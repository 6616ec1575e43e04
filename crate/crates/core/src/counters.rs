//! Work counters instrumenting the amortized-cost claims.

use std::sync::atomic::{AtomicU64, Ordering};

#[derive(Default)]
pub struct CounterSet {
    /// Total reprupd invocations, including the recursive ones.
    pub reprupd_calls: u64,
    /// reprupd_depth_hist[d] = number of top-level calls whose recursion
    /// reached exactly depth d (the initial invocation has depth 1).
    pub reprupd_depth_hist: Vec<u64>,
    pub pos_updates: u64,
    /// Band/run structure mutations: pushes, pops, splits, migrations.
    pub band_ops: u64,
    /// Symbol comparisons performed while extending (descents, splits).
    pub extend_comparisons: u64,
    /// Suffix-link hops taken by mrm_find walks (queries only mutate this).
    mrmfind_hops: AtomicU64,
    pub leaves_added: u64,
    pub splits: u64,
}

impl CounterSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record_reprupd_depth(&mut self, depth: u32) {
        let d = depth as usize;
        if self.reprupd_depth_hist.len() <= d {
            self.reprupd_depth_hist.resize(d + 1, 0);
        }
        self.reprupd_depth_hist[d] += 1;
    }

    pub fn reprupd_depth_max(&self) -> u32 {
        (self.reprupd_depth_hist.len().saturating_sub(1)) as u32
    }

    pub fn add_mrmfind_hops(&self, hops: u64) {
        self.mrmfind_hops.fetch_add(hops, Ordering::Relaxed);
    }

    pub fn mrmfind_hops_total(&self) -> u64 {
        self.mrmfind_hops.load(Ordering::Relaxed)
    }
}
