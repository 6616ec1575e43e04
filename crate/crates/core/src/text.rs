//! Backing storage for the indexed stream.
//!
//! Positions handed out by the index are absolute stream offsets. In stream
//! mode the whole history is kept; in window mode a power-of-two ring holds
//! a few multiples of the window so that stale-but-refreshed edge labels can
//! still be resolved.

pub struct TextStore {
    buf: Vec<u8>,
    /// `usize::MAX` in stream mode, else `capacity - 1` of the ring.
    mask: usize,
    len: usize,
    /// Lowest absolute position still guaranteed readable.
    retained_from: usize,
}

impl TextStore {
    pub fn stream() -> Self {
        TextStore {
            buf: Vec::new(),
            mask: usize::MAX,
            len: 0,
            retained_from: 0,
        }
    }

    pub fn ring(window: usize) -> Self {
        let cap = (4 * (window + 2)).next_power_of_two();
        TextStore {
            buf: vec![0; cap],
            mask: cap - 1,
            len: 0,
            retained_from: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn push(&mut self, byte: u8) {
        if self.mask == usize::MAX {
            self.buf.push(byte);
        } else {
            let i = self.len & self.mask;
            self.buf[i] = byte;
        }
        self.len += 1;
        if self.mask != usize::MAX {
            self.retained_from = self.len.saturating_sub(self.mask + 1);
        }
    }

    pub fn retained_from(&self) -> usize {
        self.retained_from
    }

    pub fn get(&self, pos: usize) -> u8 {
        debug_assert!(pos < self.len, "read past end of stream");
        debug_assert!(
            pos >= self.retained_from,
            "read of evicted text at {pos} (retained from {})",
            self.retained_from
        );
        if self.mask == usize::MAX {
            self.buf[pos]
        } else {
            self.buf[pos & self.mask]
        }
    }

    /// Compare `len` bytes starting at absolute positions `a` and `b`.
    pub fn range_eq(&self, a: usize, b: usize, len: usize) -> bool {
        (0..len).all(|k| self.get(a + k) == self.get(b + k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_wraps_and_tracks_retention() {
        let mut t = TextStore::ring(1);
        let cap = (4usize * 3).next_power_of_two();
        for i in 0..3 * cap {
            t.push((i % 251) as u8);
        }
        assert_eq!(t.len(), 3 * cap);
        assert_eq!(t.retained_from(), 2 * cap);
        for p in t.retained_from()..t.len() {
            assert_eq!(t.get(p), (p % 251) as u8);
        }
    }
}
