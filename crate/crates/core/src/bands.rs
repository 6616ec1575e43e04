//! Active-suffix bookkeeping: the band stack over internal edges plus
//! arithmetic runs over external edges.
//!
//! The suffixes of the current text that also occur elsewhere always form a
//! contiguous range of lengths 1..=d. Their tree points shift down one
//! symbol per iteration, so depths are stored as `clock - key`: a uniform
//! shift is a single clock increment. Points on internal edges are grouped
//! into bands (runs of suffix-link-parallel edges sharing one offset);
//! points on external edges are grouped per edge into arithmetic-progression
//! runs, whose spacing reflects the periodicity of the text tail.

use crate::tree::EdgeHandle;
use std::collections::VecDeque;

/// A run of suffix-link-parallel internal edges, all with label length
/// `label_len`, each holding one implicit suffix point at the shared offset
/// `clock - key`. `edges` is ordered shallowest first.
pub(crate) struct Band {
    pub edges: VecDeque<EdgeHandle>,
    pub key: i64,
    pub label_len: usize,
}

impl Band {
    pub fn offset(&self, clock: i64) -> i64 {
        clock - self.key
    }
}

/// Implicit suffix points on one external edge at depths
/// `{clock - k : k = key_deep, key_deep + step, ..., key_shallow}`.
pub(crate) struct ExtRun {
    pub edge: EdgeHandle,
    pub key_deep: i64,
    pub key_shallow: i64,
    pub step: i64,
}

impl ExtRun {
    pub fn singleton(edge: EdgeHandle, key: i64) -> Self {
        ExtRun {
            edge,
            key_deep: key,
            key_shallow: key,
            step: 1,
        }
    }

    pub fn count(&self) -> usize {
        ((self.key_shallow - self.key_deep) / self.step) as usize + 1
    }

    pub fn depths(&self, clock: i64) -> impl Iterator<Item = usize> + '_ {
        let mut k = self.key_deep;
        let hi = self.key_shallow;
        let step = self.step;
        std::iter::from_fn(move || {
            if k > hi {
                None
            } else {
                let d = (clock - k) as usize;
                k += step;
                Some(d)
            }
        })
    }

    /// Largest key in the progression that is <= `limit`, if any.
    pub fn key_at_or_below(&self, limit: i64) -> Option<i64> {
        if limit < self.key_deep {
            return None;
        }
        let hi = self.key_shallow.min(limit);
        Some(self.key_deep + ((hi - self.key_deep) / self.step) * self.step)
    }
}
