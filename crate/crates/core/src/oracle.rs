//! Independent correctness authorities.
//!
//! Everything here works by direct string scanning over the raw text, with no
//! shared traversal code with the index proper, so test agreement carries
//! evidentiary weight. Quadratic or worse cost is fine.

use crate::query::MatchResult;
use crate::tree::{EdgeHandle, Index};

/// Direct check of the repr property: for every live link-tree node `g`,
/// the most recently pos-updated edge in the subtree of `g` must be named
/// by the repr of some ancestor of `g`. Quadratic; test use only.
pub fn check_repr_property(index: &Index) -> bool {
    let updated: Vec<(EdgeHandle, u64)> = index
        .edges
        .iter()
        .filter(|(_, rec)| rec.last_pos_update > 0)
        .map(|(h, rec)| (h, rec.last_pos_update))
        .collect();
    if updated.is_empty() {
        return true;
    }
    let internal: Vec<EdgeHandle> = index
        .edges
        .iter()
        .map(|(h, _)| h)
        .filter(|&h| !index.is_external(h))
        .collect();
    for &g in &internal {
        let best = updated
            .iter()
            .filter(|&&(f, _)| index.is_ancestor(g, f))
            .max_by_key(|&&(_, t)| t);
        let Some(&(fstar, _)) = best else { continue };
        let mut a = g;
        let found = loop {
            if index.edges[a].repr == Some(fstar) {
                break true;
            }
            if a == index.top_edge() {
                break false;
            }
            a = match index.suf_of(a) {
                Ok(x) => x,
                Err(_) => break false,
            };
        };
        if !found {
            return false;
        }
    }
    true
}

/// Most recent longest match by exhaustive scan: maximal matched prefix
/// length first, then maximal start position. Empty prefix matches at `n`.
pub fn brute_force_mrlm(text: &[u8], pattern: &[u8]) -> MatchResult {
    let n = text.len();
    let mut best_len = 0usize;
    let mut best_pos = n;
    for start in 0..n {
        let mut l = 0;
        while l < pattern.len() && start + l < n && text[start + l] == pattern[l] {
            l += 1;
        }
        if l > best_len || (l == best_len && l > 0 && start > best_pos) {
            best_len = l;
            best_pos = start;
        }
    }
    MatchResult {
        position: best_pos,
        length: best_len,
    }
}

/// Most recent exact occurrence of `pattern`, scanning right to left.
pub fn brute_force_exact(text: &[u8], pattern: &[u8]) -> Option<usize> {
    if pattern.is_empty() {
        return Some(text.len());
    }
    if pattern.len() > text.len() {
        return None;
    }
    (0..=text.len() - pattern.len())
        .rev()
        .find(|&p| &text[p..p + pattern.len()] == pattern)
}

/// Lengths of the nonempty suffixes that also occur elsewhere in `text` as
/// substrings. These are always a contiguous range `1..=d`.
pub fn active_suffixes(text: &[u8]) -> Vec<usize> {
    let n = text.len();
    let mut out = Vec::new();
    for len in 1..=n {
        let suf = &text[n - len..];
        let occurs_earlier = (0..n - len).rev().any(|p| &text[p..p + len] == suf);
        if occurs_earlier {
            out.push(len);
        }
    }
    out
}

/// Depth of the active point: length of the longest suffix occurring earlier.
pub fn active_depth(text: &[u8]) -> usize {
    active_suffixes(text).into_iter().max().unwrap_or(0)
}

/// Rightmost occurrence start of `s` in `text`, if any.
pub fn rightmost_occurrence(text: &[u8], s: &[u8]) -> Option<usize> {
    brute_force_exact(text, s).filter(|_| !s.is_empty())
}

/// Distinct symbols following occurrences of `s` in `text`. The endpoint of
/// an internal suffix-tree edge is exactly a string with two or more of them.
pub fn follower_set(text: &[u8], s: &[u8]) -> Vec<u8> {
    let n = text.len();
    let mut fs: Vec<u8> = Vec::new();
    if s.is_empty() {
        for &c in text {
            if !fs.contains(&c) {
                fs.push(c);
            }
        }
        fs.sort_unstable();
        return fs;
    }
    for p in 0..n.saturating_sub(s.len()) {
        if &text[p..p + s.len()] == s {
            let c = text[p + s.len()];
            if !fs.contains(&c) {
                fs.push(c);
            }
        }
    }
    fs.sort_unstable();
    fs
}

/// The update-edge oracle: the string depth of the deepest branching active
/// suffix, or `None` when no active suffix ends at an internal node.
pub fn deepest_branching_active_suffix(text: &[u8]) -> Option<usize> {
    let n = text.len();
    active_suffixes(text)
        .into_iter()
        .filter(|&len| follower_set(text, &text[n - len..]).len() >= 2)
        .max()
}

/// Naive online indexer maintaining `pos` by full active-path traversal:
/// after each symbol, every edge whose endpoint is an active suffix gets its
/// position set to the most recent occurrence. Observably, the position of
/// any repeated string equals its rightmost occurrence, which is what
/// `pos_of` reports.
#[derive(Default)]
pub struct NaiveIndex {
    text: Vec<u8>,
}

impl NaiveIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn naive_extend(&mut self, symbol: u8) {
        self.text.push(symbol);
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    /// Position the naive strategy would store for an edge whose endpoint
    /// string is `s` (string must occur in the text).
    pub fn pos_of(&self, s: &[u8]) -> Option<usize> {
        rightmost_occurrence(&self.text, s)
    }

    /// Suffix lengths the naive traversal pos-updates in the iteration that
    /// consumed the last symbol: active suffixes ending at edge endpoints.
    pub fn updated_lengths_last_iteration(&self) -> Vec<usize> {
        active_suffixes(&self.text)
            .into_iter()
            .filter(|&len| {
                follower_set(&self.text, &self.text[self.text.len() - len..]).len() >= 2
            })
            .collect()
    }
}

/// All distinct substrings of `text`, including the empty string.
pub fn substring_set(text: &[u8]) -> std::collections::HashSet<Vec<u8>> {
    let mut set = std::collections::HashSet::new();
    set.insert(Vec::new());
    for i in 0..text.len() {
        for j in i + 1..=text.len() {
            set.insert(text[i..j].to_vec());
        }
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mrlm_examples() {
        let r = brute_force_mrlm(b"abcabda", b"ab");
        assert_eq!((r.position, r.length), (3, 2));
        let r = brute_force_mrlm(b"abcabda", b"");
        assert_eq!((r.position, r.length), (7, 0));
        let r = brute_force_mrlm(b"aaaa", b"aa");
        assert_eq!((r.position, r.length), (2, 2));
        let r = brute_force_mrlm(b"abcabda", b"abx");
        assert_eq!((r.position, r.length), (3, 2));
    }

    #[test]
    fn active_suffix_examples() {
        assert_eq!(active_suffixes(b"abcabda"), vec![1]);
        assert_eq!(active_suffixes(b"abcab"), vec![1, 2]);
        assert!(active_suffixes(b"ab").is_empty());
    }

    #[test]
    fn naive_pos_examples() {
        let mut idx = NaiveIndex::new();
        for &c in b"abcabdab" {
            idx.naive_extend(c);
        }
        assert_eq!(idx.pos_of(b"ab"), Some(6));
        // after "abcabd": the iteration consuming 'd' updates nothing
        let mut idx = NaiveIndex::new();
        for &c in b"abcabd" {
            idx.naive_extend(c);
        }
        assert!(idx.updated_lengths_last_iteration().is_empty());
        let mut idx = NaiveIndex::new();
        idx.naive_extend(b'a');
        assert!(idx.updated_lengths_last_iteration().is_empty());
    }

    #[test]
    fn exact_examples() {
        assert_eq!(brute_force_exact(b"abcabda", b"bd"), Some(4));
        assert_eq!(brute_force_exact(b"abcabda", b"abx"), None);
        assert_eq!(brute_force_exact(b"ab", b"abc"), None);
    }
}
