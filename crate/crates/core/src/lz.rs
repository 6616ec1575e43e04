//! Greedy LZ factorization with rightmost sources, optionally batching the
//! repr maintenance per factor through a deferred-update stack.

use std::fmt;
use std::io::Write;

use crate::tree::{DeferredUpdate, Index, IndexError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factor {
    /// Start of the most recent earlier occurrence; absent for literals.
    pub source_pos: Option<usize>,
    pub length: usize,
    /// Symbol following the copied part; absent at stream end.
    pub next_symbol: Option<u8>,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.source_pos, self.next_symbol) {
            (None, Some(c)) => write!(f, "L {c:02x}"),
            (Some(p), Some(c)) => write!(f, "F {p} {} {c:02x}", self.length),
            (Some(p), None) => write!(f, "F {p} {} -", self.length),
            (None, None) => unreachable!("empty factor"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateMode {
    /// repr maintenance runs on every extend.
    Immediate,
    /// Update edges are stacked per factor and flushed in reverse, skipping
    /// updates superseded by later ones.
    Deferred,
}

impl Index {
    /// Enter or leave deferred-update mode. While deferred, extends stack
    /// their update edges instead of running repr maintenance, and queries
    /// are forbidden until `flush_deferred` restores the repr property.
    pub fn set_deferred(&mut self, on: bool) {
        match (on, self.deferred.is_some()) {
            (true, false) => self.deferred = Some(Vec::new()),
            (false, true) => {
                let left = self.deferred.take().unwrap();
                assert!(left.is_empty(), "leaving deferred mode with unflushed updates");
            }
            _ => {}
        }
    }

    /// Pop the deferred stack, applying each update only if it would move
    /// the stored position forward, and restore the repr property. Returns
    /// the number of reprupd invocations incurred.
    pub fn flush_deferred(&mut self) -> u64 {
        let Some(stack) = self.deferred.as_mut() else {
            return 0;
        };
        let mut stack = std::mem::take(stack);
        let mut calls = 0;
        while let Some(DeferredUpdate { node, iter }) = stack.pop() {
            if !self.nodes.is_live(node) {
                continue;
            }
            let e = self.pred_edge(node);
            if self.is_external(e) {
                continue;
            }
            let len = self.end_depth(e);
            let candidate = iter - len;
            if candidate > self.edge_pos(e) {
                {
                    let rec = &mut self.edges[e];
                    rec.pos = candidate;
                    rec.last_pos_update = iter as u64;
                }
                self.counters.pos_updates += 1;
                calls += self.repr_update(e);
            }
        }
        calls
    }
}

/// Greedy factorization of `input`, querying the index only at factor
/// boundaries so sources never overlap the factor itself.
pub fn factorize(
    input: &[u8],
    window: Option<usize>,
    mode: UpdateMode,
) -> Result<Vec<Factor>, IndexError> {
    factorize_with_index(input, window, mode).map(|(f, _)| f)
}

/// Like `factorize` but also returns the index for counter inspection.
pub fn factorize_with_index(
    input: &[u8],
    window: Option<usize>,
    mode: UpdateMode,
) -> Result<(Vec<Factor>, Index), IndexError> {
    let mut index = match window {
        Some(w) => Index::windowed(w)?,
        None => Index::new(),
    };
    let factors = factorize_into(&mut index, input, mode)?;
    Ok((factors, index))
}

pub(crate) fn factorize_into(
    index: &mut Index,
    input: &[u8],
    mode: UpdateMode,
) -> Result<Vec<Factor>, IndexError> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < input.len() {
        let m = index.most_recent_longest_match(&input[i..]);
        let length = m.length;
        let source_pos = if length == 0 { None } else { Some(m.position) };
        let next_symbol = if i + length < input.len() {
            Some(input[i + length])
        } else {
            None
        };
        let consumed = length + usize::from(next_symbol.is_some());
        if mode == UpdateMode::Deferred {
            index.set_deferred(true);
        }
        for k in 0..consumed {
            index.extend(input[i + k])?;
        }
        if mode == UpdateMode::Deferred {
            index.flush_deferred();
            index.set_deferred(false);
        }
        out.push(Factor {
            source_pos,
            length,
            next_symbol,
        });
        i += consumed;
    }
    Ok(out)
}

/// One factor per line, ASCII, as emitted by the CLI and the golden files.
pub fn write_factors<W: Write>(mut w: W, factors: &[Factor]) -> std::io::Result<()> {
    for f in factors {
        writeln!(w, "{f}")?;
    }
    Ok(())
}

/// Concatenate the factors back into the original input.
pub fn expand(factors: &[Factor], reconstructed: &mut Vec<u8>) {
    for f in factors {
        if let Some(src) = f.source_pos {
            for k in 0..f.length {
                let b = reconstructed[src + k];
                reconstructed.push(b);
            }
        }
        if let Some(c) = f.next_symbol {
            reconstructed.push(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_abcabda() {
        let fs = factorize(b"abcabda", None, UpdateMode::Deferred).unwrap();
        let want = vec![
            Factor { source_pos: None, length: 0, next_symbol: Some(b'a') },
            Factor { source_pos: None, length: 0, next_symbol: Some(b'b') },
            Factor { source_pos: None, length: 0, next_symbol: Some(b'c') },
            Factor { source_pos: Some(0), length: 2, next_symbol: Some(b'd') },
            Factor { source_pos: Some(3), length: 1, next_symbol: None },
        ];
        assert_eq!(fs, want);
    }

    #[test]
    fn factorize_empty() {
        assert!(factorize(b"", None, UpdateMode::Deferred).unwrap().is_empty());
    }

    #[test]
    fn factorize_aaaa() {
        // Without self-reference the longest prefix of "aaa" in "a" is "a".
        let fs = factorize(b"aaaa", None, UpdateMode::Deferred).unwrap();
        let want = vec![
            Factor { source_pos: None, length: 0, next_symbol: Some(b'a') },
            Factor { source_pos: Some(0), length: 1, next_symbol: Some(b'a') },
            Factor { source_pos: Some(2), length: 1, next_symbol: None },
        ];
        assert_eq!(fs, want);
    }

    #[test]
    fn roundtrip() {
        let input = b"the quick brown fox jumps over the lazy dog the quick brown fox";
        for mode in [UpdateMode::Immediate, UpdateMode::Deferred] {
            let fs = factorize(input, None, mode).unwrap();
            let mut back = Vec::new();
            expand(&fs, &mut back);
            assert_eq!(back, input);
        }
    }

    #[test]
    fn deferred_stack_dedup() {
        // Pushing the same edge twice applies at most one update: the
        // second pop is superseded by the first (more recent) one.
        let mut idx = Index::new();
        for &c in b"abcab" {
            idx.extend(c).unwrap();
        }
        idx.set_deferred(true);
        for &c in b"abab" {
            idx.extend(c).unwrap();
        }
        let before = idx.counters().pos_updates;
        idx.flush_deferred();
        idx.set_deferred(false);
        let applied = idx.counters().pos_updates - before;
        assert!(applied >= 1);
        // "ab" was the update edge at several iterations; only the latest
        // position survives.
        let ab = idx.child_edge(idx.root_node(), b'a').unwrap();
        assert_eq!(idx.endpoint_string(ab), b"ab");
        assert_eq!(idx.edge_pos(ab), 7);
    }

    #[test]
    fn empty_flush_is_zero() {
        let mut idx = Index::new();
        idx.set_deferred(true);
        assert_eq!(idx.flush_deferred(), 0);
        idx.set_deferred(false);
    }
}
