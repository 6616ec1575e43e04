//! Most-recent-match queries: locus dispatch between the implicit-suffix
//! case and the repr-hint walk.

use crate::tree::{EdgeHandle, Index};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchResult {
    pub position: usize,
    pub length: usize,
}

impl Index {
    /// Most recent start position of the string at `e`'s endpoint, computed
    /// from stored positions and repr hints along the suffix-link chain.
    pub fn mrm_find(&self, e: EdgeHandle) -> usize {
        debug_assert!(
            self.deferred.is_none(),
            "queries are invalid while updates are deferred"
        );
        if self.is_external(e) {
            // A leaf endpoint string occurs exactly once.
            return self.edges[e].pos;
        }
        let ltd_e = self.walk_depth(e);
        let mut p = self.edges[e].pos;
        let mut g = e;
        let mut hops: u64 = 0;
        loop {
            if let Some(f) = self.edges[g].repr.filter(|&f| self.edges.is_live(f)) {
                if self.is_ancestor_internal(e, f) {
                    let q = self.edges[f].pos + self.walk_depth(f) - ltd_e;
                    if q > p {
                        p = q;
                    }
                }
            }
            if g == self.top_edge {
                break;
            }
            g = self.suf_of_internal(g);
            hops += 1;
        }
        self.counters.add_mrmfind_hops(hops);
        p
    }

    /// Longest matched prefix of `pattern` and the most recent position of
    /// that prefix. The empty prefix matches at position `n`.
    pub fn most_recent_longest_match(&self, pattern: &[u8]) -> MatchResult {
        assert!(
            self.deferred.is_none(),
            "queries are invalid while updates are deferred"
        );
        let locus = self.locate(pattern);
        let matched = locus.matched;
        if matched == 0 {
            return MatchResult {
                position: self.n(),
                length: 0,
            };
        }
        // A suffix extending the matched prefix on the locus edge is always
        // more recent than any fully indexed occurrence.
        if let Some(depth) = self.min_active_suffix_on(locus.edge, matched) {
            return MatchResult {
                position: self.n() - depth,
                length: matched,
            };
        }
        MatchResult {
            position: self.mrm_find(locus.edge),
            length: matched,
        }
    }

    /// Most recent occurrence of the whole pattern, if it occurs.
    pub fn most_recent_exact_match(&self, pattern: &[u8]) -> Option<usize> {
        assert!(
            self.deferred.is_none(),
            "queries are invalid while updates are deferred"
        );
        if pattern.is_empty() {
            return Some(self.n());
        }
        let locus = self.locate(pattern);
        if !locus.exact {
            return None;
        }
        if let Some(depth) = self.min_active_suffix_on(locus.edge, locus.matched) {
            return Some(self.n() - depth);
        }
        Some(self.mrm_find(locus.edge))
    }
}
